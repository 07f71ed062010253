#include "holonomy/geometry.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "holonomy/errors.hpp"

namespace holonomy {

namespace {

constexpr double kTangentTol = 1e-12;
constexpr double kChartTol = 1e-10;

double wrap_phase(double a) {
  const double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(a, two_pi);
  if (w < 0.0) w += two_pi;
  return w >= two_pi ? 0.0 : w;
}

void require_rank_two(const Frame& f, const char* what) {
  if (f.k() != 2) throw ContractError(std::string(what) + ": the chart is defined for k = 2");
}

}  // namespace

FrameTangent FrameTangent::from_velocity(const Frame& frame, const CMatrix& phi) {
  const CMatrix& psi = frame.matrix();
  if (phi.rows() != psi.rows() || phi.cols() != psi.cols()) {
    throw ContractError("FrameTangent: velocity shape differs from the frame");
  }
  const CMatrix overlap = psi.adjoint() * phi;
  if (max_abs(overlap + overlap.adjoint()) > kTangentTol * std::max(1.0, max_abs(phi))) {
    throw ContractError("FrameTangent: velocity is not tangent to the frame manifold");
  }
  FrameTangent t;
  t.h = -kI * overlap;
  t.h = 0.5 * (t.h + t.h.adjoint());
  t.chi = phi - psi * overlap;
  return t;
}

CMatrix FrameTangent::velocity(const Frame& frame) const { return kI * frame.matrix() * h + chi; }

void check_tangent(const Frame& frame, const FrameTangent& t) {
  const int n = frame.n();
  const int k = frame.k();
  if (t.h.rows() != k || t.h.cols() != k || t.chi.rows() != n || t.chi.cols() != k) {
    throw ContractError("tangent: (h, chi) shapes do not match the frame");
  }
  if (!is_hermitian(t.h, kTangentTol)) throw ContractError("tangent: h is not Hermitian");
  if (max_abs(frame.matrix().adjoint() * t.chi) > kTangentTol * std::max(1.0, max_abs(t.chi))) {
    throw ContractError("tangent: chi is not orthogonal to the frame");
  }
}

RVector connection_eval(const Frame& frame, const FrameTangent& t) {
  check_tangent(frame, t);
  return t.h.diagonal().real();
}

FrameTangent horizontal_project(const Frame& frame, const FrameTangent& t) {
  check_tangent(frame, t);
  FrameTangent out = t;
  out.h.diagonal().setZero();
  return out;
}

CMatrix OrbitTangent::h_offdiag() const {
  CMatrix h = h_upper;
  h.diagonal().setZero();
  h.triangularView<Eigen::StrictlyLower>().setZero();
  return h + h.adjoint();
}

CMatrix OrbitTangent::matrix() const {
  const CMatrix& psi = base.matrix();
  const CMatrix kappa = weights.values().cast<cplx>().asDiagonal();
  const CMatrix h = h_offdiag();
  return kI * psi * (h * kappa - kappa * h) * psi.adjoint() + psi * kappa * chi.adjoint() +
         chi * kappa * psi.adjoint();
}

OrbitTangent OrbitTangent::from_matrix(const Frame& base, const SpectralWeights& weights,
                                       const CMatrix& x) {
  const int n = base.n();
  const int k = base.k();
  if (weights.k() != k || x.rows() != n || x.cols() != n) {
    throw ContractError("OrbitTangent::from_matrix: shape mismatch");
  }
  const CMatrix& psi = base.matrix();
  const CMatrix xpsi = x * psi;
  const CMatrix block = psi.adjoint() * xpsi;
  OrbitTangent t{CMatrix::Zero(k, k), xpsi - psi * block, base, weights};
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) t.h_upper(a, b) = kI * block(a, b) / (weights[a] - weights[b]);
    t.chi.col(a) /= weights[a];
  }
  return t;
}

OrbitTangent tangent_to_orbit(const Frame& frame, const SpectralWeights& weights,
                              const FrameTangent& t) {
  check_tangent(frame, t);
  if (weights.k() != frame.k()) throw ContractError("tangent_to_orbit: frame/weights mismatch");
  CMatrix upper = t.h.triangularView<Eigen::StrictlyUpper>();
  return OrbitTangent{std::move(upper), t.chi, frame, weights};
}

CMatrix generator_for(const OrbitTangent& t) {
  const CMatrix& psi = t.base.matrix();
  return kI * (t.chi * psi.adjoint() - psi * t.chi.adjoint()) - psi * t.h_offdiag() * psi.adjoint();
}

cplx kks_trace(const CMatrix& rho, const CMatrix& k1, const CMatrix& k2) {
  return -kI * (rho * (k1 * k2 - k2 * k1)).trace();
}

double kks_eval(const CMatrix& rho, const CMatrix& k1, const CMatrix& k2) {
  return kks_trace(rho, k1, k2).real();
}

double kks_coordinates(const RVector& kappa, const CMatrix& h1, const CMatrix& chi1,
                       const CMatrix& h2, const CMatrix& chi2) {
  const auto k = kappa.size();
  cplx total = 0.0;
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = a + 1; b < k; ++b) {
      total += -kI * (kappa(a) - kappa(b)) * (h1(a, b) * h2(b, a) - h1(b, a) * h2(a, b));
    }
    const cplx c12 = chi1.col(a).dot(chi2.col(a));
    const cplx c21 = chi2.col(a).dot(chi1.col(a));
    total += -kI * kappa(a) * (c12 - c21);
  }
  return total.real();
}

double kks_closed_form(const OrbitTangent& t1, const OrbitTangent& t2) {
  if (t1.base.n() != t2.base.n() || t1.base.k() != t2.base.k() ||
      max_abs(t1.base.matrix() - t2.base.matrix()) > kTangentTol ||
      (t1.weights.values() - t2.weights.values()).cwiseAbs().maxCoeff() > 0.0) {
    throw ContractError("kks_closed_form: tangents live at different base points");
  }
  return kks_coordinates(t1.weights.values(), t1.h_offdiag(), t1.chi, t2.h_offdiag(), t2.chi);
}

RVector dA_closed_form(const FrameTangent& t1, const FrameTangent& t2) {
  const auto k = t1.h.rows();
  if (t2.h.rows() != k || t1.chi.cols() != k || t2.chi.cols() != k ||
      t1.chi.rows() != t2.chi.rows()) {
    throw ContractError("dA_closed_form: tangent shapes differ");
  }
  RVector out(k);
  for (Eigen::Index a = 0; a < k; ++a) {
    cplx v = 0.0;
    for (Eigen::Index b = 0; b < k; ++b) {
      v += -kI * (t1.h(a, b) * t2.h(b, a) - t2.h(a, b) * t1.h(b, a));
    }
    v += -kI * (t1.chi.col(a).dot(t2.chi.col(a)) - t2.chi.col(a).dot(t1.chi.col(a)));
    out(a) = v.real();
  }
  return out;
}

CMatrix chart_unitary(cplx z) {
  const double c = std::sqrt(std::max(0.0, 1.0 - std::norm(z)));
  CMatrix u(2, 2);
  u << c, z, -std::conj(z), c;
  return u;
}

ChartCoords chart_encode(const Frame& reference, const Frame& psi) {
  require_rank_two(reference, "chart_encode");
  if (psi.n() != reference.n() || psi.k() != 2) {
    throw ContractError("chart_encode: frame shape differs from the reference");
  }
  const CMatrix& psi0 = reference.matrix();
  const CMatrix s = psi0.adjoint() * psi.matrix();
  const CMatrix chi_raw = psi.matrix() - psi0 * s;
  const PolarDecomposition polar = polar_decompose(s);  // singular S: chi0 eigenvalue 1
  const CMatrix& w = polar.unitary;
  ChartCoords c;
  c.alpha.resize(2);
  for (int a = 0; a < 2; ++a) {
    if (std::abs(w(a, a)) < kChartTol) {
      throw OutsideChartError("chart_encode: diagonal of the unitary factor vanishes (|z| = 1)");
    }
    c.alpha(a) = wrap_phase(std::arg(w(a, a)));
  }
  c.z = w(0, 1) * std::polar(1.0, -c.alpha(1));
  if (std::abs(c.z) >= 1.0) throw OutsideChartError("chart_encode: |z| >= 1");
  c.chi0 = chi_raw;
  for (int a = 0; a < 2; ++a) c.chi0.col(a) *= std::polar(1.0, -c.alpha(a));
  return c;
}

Frame chart_decode(const Frame& reference, const ChartCoords& coords) {
  require_rank_two(reference, "chart_decode");
  const CMatrix& psi0 = reference.matrix();
  if (coords.alpha.size() != 2 || coords.chi0.rows() != reference.n() || coords.chi0.cols() != 2) {
    throw ContractError("chart_decode: coordinate shapes do not match the reference");
  }
  if (!(std::abs(coords.z) < 1.0)) throw OutsideChartError("chart_decode: |z| >= 1");
  if (max_abs(psi0.adjoint() * coords.chi0) > kChartTol) {
    throw OutsideChartError("chart_decode: chi0 is not orthogonal to the reference frame");
  }
  const CMatrix gram = coords.chi0.adjoint() * coords.chi0;
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().maxCoeff() >= 1.0) {
    throw OutsideChartError("chart_decode: chi0^dagger chi0 has an eigenvalue >= 1");
  }
  CMatrix psi = psi0 * chart_unitary(coords.z) * hermitian_sqrt(CMatrix::Identity(2, 2) - gram) +
                coords.chi0;
  for (int a = 0; a < 2; ++a) psi.col(a) *= std::polar(1.0, coords.alpha(a));
  return Frame(std::move(psi));
}

ChartDifferential chart_differential(const Frame& reference, const FrameTangent& t) {
  require_rank_two(reference, "chart_differential");
  check_tangent(reference, t);
  return {t.h.diagonal().real(), kI * t.h(0, 1), t.chi};
}

RVector dA_chart_form(const ChartDifferential& d1, const ChartDifferential& d2) {
  const cplx zz = d1.dz * std::conj(d2.dz) - d2.dz * std::conj(d1.dz);
  RVector out(2);
  for (int a = 0; a < 2; ++a) {
    const cplx cc = d1.dchi0.col(a).dot(d2.dchi0.col(a)) - d2.dchi0.col(a).dot(d1.dchi0.col(a));
    const double sign = a == 0 ? -1.0 : 1.0;
    out(a) = (sign * kI * zz - kI * cc).real();
  }
  return out;
}

PullbackResult pullback_check(const Frame& frame, const SpectralWeights& weights,
                              const FrameTangent& t1, const FrameTangent& t2,
                              const KksFormula& omega) {
  check_tangent(frame, t1);
  check_tangent(frame, t2);
  if (weights.k() != frame.k()) throw ContractError("pullback_check: frame/weights mismatch");
  RVector da;
  if (frame.k() == 2) {
    da = dA_chart_form(chart_differential(frame, t1), chart_differential(frame, t2));
  } else {
    da = dA_closed_form(t1, t2);
  }
  PullbackResult r;
  r.lhs = weights.values().dot(da);
  r.rhs = omega(tangent_to_orbit(frame, weights, t1), tangent_to_orbit(frame, weights, t2));
  return r;
}

}  // namespace holonomy
