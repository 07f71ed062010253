#pragma once

#include <cstdint>
#include <limits>

#include "holonomy/algebra.hpp"

namespace holonomy {

// SplitMix64 (Steele, Lea, Flood 2014): state += 0x9e3779b97f4a7c15, then the
// two xor-shift-multiply rounds below. Chosen because it is a few lines in any
// language, so fixtures can be regenerated outside C++. Gaussians use the basic
// Box-Muller transform on two consecutive uniforms (no caching).
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double normal();

 private:
  std::uint64_t state_;
};

CMatrix random_complex(SplitMix64& rng, int rows, int cols);
// Hermitian with i.i.d. N(0,1) real and imaginary parts above the diagonal.
CMatrix random_hermitian(SplitMix64& rng, int n);
CMatrix random_unitary(SplitMix64& rng, int n);
// Orthonormal n x k block (Gram-Schmidt of a Gaussian block).
CMatrix random_frame_matrix(SplitMix64& rng, int n, int k);
// Strictly decreasing positive weights summing to one, consecutive gaps >= min_gap.
RVector random_weights(SplitMix64& rng, int k, double min_gap = 0.05);

}  // namespace holonomy
