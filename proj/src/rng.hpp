#pragma once

#include <cstdint>
#include <random>

namespace kummerlab {

// Stream-addressed RNG state: identical (seed, stream) reproduces identical
// draws bit-for-bit on any platform (mt19937_64 is fully specified by the
// standard; the distribution transforms below are our own).
struct RngState {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

class Rng {
 public:
  explicit Rng(RngState s);

  std::uint64_t next_u64() { return eng_(); }

  // uniform on the open interval (0,1), 53-bit resolution
  double uniform() { return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53; }

  // standard normal via Box-Muller (pair cached)
  double normal();

  RngState state_id() const { return id_; }

 private:
  RngState id_;
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace kummerlab
