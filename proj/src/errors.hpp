#pragma once

#include <stdexcept>
#include <string>

namespace kummerlab {

enum class ErrorCode {
  domain = 1,
  no_convergence = 2,
  degenerate = 3,
  contract = 4,
  parse = 5,
  internal = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorCode::domain, what) {}
};

// Quadrature failed to reach the requested tolerance; carries the best
// estimate (log scale) and the achieved relative error bound.
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& what, double best_log_value, double achieved_rel_error)
      : Error(ErrorCode::no_convergence, what),
        best_log_value(best_log_value),
        achieved_rel_error(achieved_rel_error) {}
  double best_log_value;
  double achieved_rel_error;
};

class SamplerDegenerateError : public Error {
 public:
  SamplerDegenerateError(const std::string& what, double acceptance_rate)
      : Error(ErrorCode::degenerate, what), acceptance_rate(acceptance_rate) {}
  double acceptance_rate;
};

class ContractError : public Error {
 public:
  explicit ContractError(const std::string& what) : Error(ErrorCode::contract, what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(ErrorCode::parse, what) {}
};

}  // namespace kummerlab
