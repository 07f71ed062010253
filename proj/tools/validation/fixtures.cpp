#include "validation/fixtures.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace holonomy::fixtures {

namespace {

// Real antisymmetric with spectral norm one.
CMatrix unit_antisymmetric(SplitMix64& rng, int n) {
  Eigen::MatrixXd b(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) b(i, j) = rng.normal();
  }
  const Eigen::MatrixXd a = b - b.transpose();
  const CMatrix k = kI * a.cast<cplx>();
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(k, Eigen::EigenvaluesOnly);
  const double norm = eig.eigenvalues().cwiseAbs().maxCoeff();
  return a.cast<cplx>() / norm;
}

CMatrix unit_hermitian(SplitMix64& rng, int n) {
  const CMatrix h = random_hermitian(rng, n);
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(h, Eigen::EigenvaluesOnly);
  return h / eig.eigenvalues().cwiseAbs().maxCoeff();
}

// exp(t A) for real antisymmetric A.
CMatrix rotation(const CMatrix& a, double t) { return expm_skew(kI * a, t); }

CMatrix leading_columns(const CMatrix& m, int k) { return m.leftCols(k); }

}  // namespace

DiscretizedPath strip_frames(const DiscretizedPath& path) {
  std::vector<PathSample> samples = path.samples();
  for (auto& p : samples) p.frame.reset();
  return DiscretizedPath(path.weights(), std::move(samples), path.closed());
}

Curve real_rotation(const SpectralWeights& weights, int n, double angle, std::uint64_t seed,
                    bool plane) {
  const int k = weights.k();
  if (plane && k >= n) throw ContractError("real_rotation: plane rotation needs n > k");
  SplitMix64 rng(seed);
  const CMatrix w = random_unitary(rng, n);
  CMatrix a = CMatrix::Zero(n, n);
  if (plane) {
    a(k, 0) = 1.0;
    a(0, k) = -1.0;
  } else {
    a = unit_antisymmetric(rng, n);
  }
  Curve c;
  c.weights = weights;
  c.n = n;
  c.closed = false;
  c.frame = [w, a, angle, k](double s) {
    return CMatrix(w * leading_columns(rotation(a, s * angle), k));
  };
  return c;
}

std::array<DiscretizedPath, 3> random_triangle(const SpectralWeights& weights, int n,
                                               double scale, std::uint64_t seed, int steps) {
  SplitMix64 rng(seed);
  const Frame base(random_frame_matrix(rng, n, weights.k()));
  const double norm = scale / std::sqrt(2.0 * n);
  std::array<CMatrix, 3> corner;
  std::array<CMatrix, 3> bend;
  for (auto& y : corner) y = norm * random_hermitian(rng, n);
  for (auto& z : bend) z = 0.5 * norm * random_hermitian(rng, n);
  std::array<DiscretizedPath, 3> sides;
  for (int c = 0; c < 3; ++c) {
    const CMatrix y0 = corner[c];
    const CMatrix y1 = corner[(c + 1) % 3];
    const CMatrix z = bend[c];
    Curve side;
    side.weights = weights;
    side.n = n;
    side.closed = false;
    side.frame = [y0, y1, z, base](double t) {
      CMatrix u = expm_skew((1.0 - t) * y0 + t * y1, -1.0);
      const double bump = sin_pi(t);
      if (bump != 0.0) u = expm_skew(z, -bump) * u;
      return CMatrix(u * base.matrix());
    };
    sides[c] = side.sample(steps);
  }
  return sides;
}

ParametrizedSurface real_patch(const SpectralWeights& weights, int n, double scale,
                               std::uint64_t seed) {
  SplitMix64 rng(seed);
  const CMatrix w = random_unitary(rng, n);
  const CMatrix a = unit_antisymmetric(rng, n);
  const CMatrix b = unit_antisymmetric(rng, n);
  const int k = weights.k();
  return ParametrizedSurface::from_map(
      weights, n,
      [=](double u, double v) {
        const CMatrix r = expm_skew(kI * (u * a + v * b), scale);
        return project(Frame(w * leading_columns(r, k)), weights);
      },
      LoopEdge::kTop);
}

ParametrizedSurface generic_patch(const SpectralWeights& weights, int n, double scale,
                                  std::uint64_t seed) {
  SplitMix64 rng(seed);
  const CMatrix rho0 = project(Frame(random_frame_matrix(rng, n, weights.k())), weights);
  const CMatrix h1 = unit_hermitian(rng, n);
  const CMatrix h2 = unit_hermitian(rng, n);
  return ParametrizedSurface::from_map(
      weights, n,
      [=](double u, double v) {
        const CMatrix e = expm_skew(u * h1 + v * h2, -scale);
        return CMatrix(e * rho0 * e.adjoint());
      },
      LoopEdge::kTop);
}

ParametrizedSurface ruled_patch(const SpectralWeights& weights, int n, double scale,
                                std::uint64_t seed) {
  SplitMix64 rng(seed);
  const CMatrix rho0 = project(Frame(random_frame_matrix(rng, n, weights.k())), weights);
  const CMatrix h = unit_hermitian(rng, n);
  return ParametrizedSurface::from_map(
      weights, n,
      [=](double u, double) {
        const CMatrix e = expm_skew(h, -scale * u);
        return CMatrix(e * rho0 * e.adjoint());
      },
      LoopEdge::kTop);
}

ParametrizedSurface constant_patch(const SpectralWeights& weights, int n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const CMatrix rho0 = project(Frame(random_frame_matrix(rng, n, weights.k())), weights);
  return ParametrizedSurface::from_map(
      weights, n, [rho0](double, double) { return rho0; }, LoopEdge::kTop);
}

FrameTangent random_tangent(SplitMix64& rng, const Frame& frame, double scale) {
  const CMatrix& psi = frame.matrix();
  const int n = frame.n();
  const int k = frame.k();
  FrameTangent t;
  t.h = scale * random_hermitian(rng, k);
  const CMatrix g = random_complex(rng, n, k);
  t.chi = scale * (g - psi * (psi.adjoint() * g));
  return t;
}

}  // namespace holonomy::fixtures
