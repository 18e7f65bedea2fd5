#include "rng.hpp"

#include <cmath>

namespace kummerlab {

namespace {

std::uint64_t splitmix64(std::uint64_t& s) {
  std::uint64_t x = (s += 0x9e3779b97f4a7c15ULL);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 make_engine(RngState s) {
  // derive four 64-bit words from (seed, stream) via splitmix64
  std::uint64_t st = s.seed ^ (s.stream * 0xda942042e4dd58b5ULL + 0x2545f4914f6cdd1dULL);
  std::uint32_t words[8];
  for (int i = 0; i < 4; ++i) {
    std::uint64_t w = splitmix64(st);
    words[2 * i] = static_cast<std::uint32_t>(w);
    words[2 * i + 1] = static_cast<std::uint32_t>(w >> 32);
  }
  std::seed_seq seq(words, words + 8);
  return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(RngState s) : id_(s), eng_(make_engine(s)) {}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 6.283185307179586476925286766559 * u2;
  spare_ = r * std::sin(th);
  has_spare_ = true;
  return r * std::cos(th);
}

}  // namespace kummerlab
