#include "holonomy/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace holonomy {

double SplitMix64::normal() {
  // 1 - u keeps the logarithm finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

CMatrix random_complex(SplitMix64& rng, int rows, int cols) {
  CMatrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      m(i, j) = cplx(re, im);
    }
  }
  return m;
}

CMatrix random_hermitian(SplitMix64& rng, int n) {
  CMatrix h(n, n);
  for (int i = 0; i < n; ++i) {
    h(i, i) = rng.normal();
    for (int j = i + 1; j < n; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      h(i, j) = cplx(re, im);
      h(j, i) = std::conj(h(i, j));
    }
  }
  return h;
}

CMatrix random_unitary(SplitMix64& rng, int n) {
  return expm_skew(random_hermitian(rng, n), 1.0);
}

CMatrix random_frame_matrix(SplitMix64& rng, int n, int k) {
  return gram_schmidt(random_complex(rng, n, k));
}

RVector random_weights(SplitMix64& rng, int k, double min_gap) {
  RVector w(k);
  if (k == 1) {
    w(0) = 1.0;
    return w;
  }
  // Rejection sampling from the uniform simplex; for k <= 4 and the default gap
  // the acceptance rate is comfortably high.
  for (;;) {
    double total = 0.0;
    for (int a = 0; a < k; ++a) {
      w(a) = -std::log(1.0 - rng.uniform());
      total += w(a);
    }
    w /= total;
    std::sort(w.data(), w.data() + k, std::greater<>());
    bool ok = true;
    for (int a = 0; a + 1 < k; ++a) ok = ok && (w(a) - w(a + 1) >= min_gap);
    if (ok && w(k - 1) >= min_gap) {
      w(k - 1) = 1.0 - (w.sum() - w(k - 1));
      return w;
    }
  }
}

}  // namespace holonomy
