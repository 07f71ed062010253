#include "validation/oracles.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

namespace holonomy::oracles {

namespace {

using std::numbers::pi;

double delta(int a, int b) { return a == b ? 1.0 : 0.0; }

struct Spinor {
  std::complex<double> up;
  std::complex<double> down;
};

std::complex<double> inner(const Spinor& a, const Spinor& b) {
  return std::conj(a.up) * b.up + std::conj(a.down) * b.down;
}

Spinor bloch_state(double theta, int level, double phi) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const auto e = std::polar(1.0, phi);
  if (level == 0) return {c, e * s};
  return {-s, e * c};
}

// exp(-i e G) with G Hermitian, through the general matrix exponential.
CMatrix step_exp(const CMatrix& g, double e) { return CMatrix(-kI * e * g).exp(); }

CMatrix tangent_generator(const Frame& frame, const FrameTangent& t) {
  const CMatrix& psi = frame.matrix();
  return -psi * t.h * psi.adjoint() + kI * (t.chi * psi.adjoint() - psi * t.chi.adjoint());
}

// A^(a) evaluated on the velocity `dpsi` at `psi`.
RVector connection(const CMatrix& psi, const CMatrix& dpsi) {
  RVector out(psi.cols());
  for (int a = 0; a < psi.cols(); ++a) out(a) = (-kI * psi.col(a).dot(dpsi.col(a))).real();
  return out;
}

}  // namespace

double bloch_lift_phase(double theta, int level, long steps) {
  const double dphi = 2.0 * pi / static_cast<double>(steps);
  Spinor lift = bloch_state(theta, level, 0.0);
  double accumulated = 0.0;
  for (long i = 1; i <= steps; ++i) {
    const Spinor raw = bloch_state(theta, level, static_cast<double>(i) * dphi);
    const auto z = inner(lift, raw);
    const auto align = std::conj(z) / std::abs(z);
    lift = {raw.up * align, raw.down * align};
    // lift = e^{i beta} raw: track beta continuously.
    const double beta = std::arg(inner(raw, lift));
    accumulated += std::remainder(beta - accumulated, 2.0 * pi);
  }
  return accumulated;
}

CMatrix j_generator(int n, int j, int k) {
  CMatrix m(n, n);
  for (int l = 0; l < n; ++l) {
    for (int r = 0; r < n; ++r) {
      m(l, r) = kI / std::sqrt(2.0) * (delta(j, l) * delta(k, r) - delta(j, r) * delta(k, l));
    }
  }
  return m;
}

CMatrix q_generator(int n, int j, int k) {
  CMatrix m(n, n);
  for (int l = 0; l < n; ++l) {
    for (int r = 0; r < n; ++r) {
      m(l, r) = (delta(j, l) * delta(k, r) + delta(j, r) * delta(k, l)) / std::sqrt(2.0);
    }
  }
  return m;
}

CMatrix commutator_jj(int n, int j, int k, int l, int m) {
  return (delta(k, l) * j_generator(n, j, m) - delta(j, l) * j_generator(n, k, m) +
          delta(k, m) * j_generator(n, l, j) - delta(j, m) * j_generator(n, l, k)) /
         std::sqrt(2.0);
}

CMatrix commutator_jq(int n, int j, int k, int l, int m) {
  return (delta(k, l) * q_generator(n, j, m) - delta(j, l) * q_generator(n, k, m) +
          delta(k, m) * q_generator(n, j, l) - delta(j, m) * q_generator(n, k, l)) /
         std::sqrt(2.0);
}

CMatrix commutator_qq(int n, int j, int k, int l, int m) {
  return (delta(k, l) * j_generator(n, m, j) + delta(j, l) * j_generator(n, m, k) +
          delta(k, m) * j_generator(n, l, j) + delta(j, m) * j_generator(n, l, k)) /
         std::sqrt(2.0);
}

RVector fd_curvature(const Frame& frame, const FrameTangent& t1, const FrameTangent& t2,
                     double delta) {
  const CMatrix g1 = tangent_generator(frame, t1);
  const CMatrix g2 = tangent_generator(frame, t2);
  const CMatrix& psi0 = frame.matrix();
  // A(d/de2) at (e1, 0) and A(d/de1) at (0, e2).
  auto a2 = [&](double e1) {
    const CMatrix e = step_exp(g1, e1);
    return connection(e * psi0, e * (-kI * g2) * psi0);
  };
  auto a1 = [&](double e2) {
    const CMatrix psi = step_exp(g2, e2) * psi0;
    return connection(psi, -kI * g1 * psi);
  };
  return RVector((a2(delta) - a2(-delta) - a1(delta) + a1(-delta)) / (2.0 * delta));
}

}  // namespace holonomy::oracles
