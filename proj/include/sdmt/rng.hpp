#pragma once

#include <complex>
#include <cmath>
#include <cstdint>

namespace sdmt {

// Counter-based deterministic randomness.
//
// Every draw is a pure function of (master_seed, stream_index, block, draw
// position): block k of a stream is served by a splitmix64 generator whose
// initial state is a fixed hash of the triple, so disjoint streams and blocks
// can be sampled in any order, on any worker, with bit-identical results.

struct RngSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
};

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

// Child stream i of a parent stream (rung -> trial derivation and the like).
inline RngSpec substream(const RngSpec& parent, std::uint64_t i) {
  return {parent.master_seed, mix64(parent.stream_index + kGolden * (i + 1))};
}

class BlockRng {
 public:
  BlockRng(const RngSpec& spec, std::uint64_t block) {
    std::uint64_t h = mix64(spec.master_seed + kGolden);
    h = mix64(h ^ (spec.stream_index + 0xd6e8feb86659fd93ull));
    state_ = mix64(h ^ (block + 0x2545f4914f6cdd1dull));
  }

  std::uint64_t next_u64() {
    state_ += kGolden;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform on [0,1), 53-bit resolution
  double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // uniform on (0,1]; safe as a log argument
  double next_unit_pos() { return double((next_u64() >> 11) + 1) * 0x1.0p-53; }

  // Complex Gaussian CN(0, var): variance var/2 per real component.
  // Box-Muller, one entry per uniform pair:
  //   h = sqrt(-var * ln u1) * exp(i 2 pi u2)
  // so |h|^2 = -var * ln(u1) is exactly var * Exp(1).
  std::complex<double> next_cgauss(double var = 1.0) {
    constexpr double kTwoPi = 6.283185307179586476925287;
    double u1 = next_unit_pos();
    double u2 = next_unit();
    double mag = std::sqrt(-var * std::log(u1));
    return {mag * std::cos(kTwoPi * u2), mag * std::sin(kTwoPi * u2)};
  }

 private:
  std::uint64_t state_;
};

}  // namespace sdmt
