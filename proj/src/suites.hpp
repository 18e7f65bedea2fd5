#pragma once

#include <string>
#include <vector>

#include "stats.hpp"

namespace kummerlab {

struct SuiteResult {
  std::vector<StatReport> reports;
  bool all_pass = false;
  std::vector<std::string> csv_outputs;  // files written during the run (trajectory dumps)
};

// suite in {balance, corollary, limits, identities, lattice}; config_json per
// the schemas documented in the README.  threads parallelizes across seeds
// (output is identical for any thread count).
SuiteResult run_suite(const std::string& suite, const std::string& config_json, int threads);

std::string suite_result_to_json(const SuiteResult& r);

}  // namespace kummerlab
