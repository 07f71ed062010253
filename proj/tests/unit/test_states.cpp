#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "test_util.hpp"

namespace holonomy {
namespace {

using test::diag;
using test::near;

RVector sorted_eigenvalues(const CMatrix& m) {
  RVector ev = Eigen::SelfAdjointEigenSolver<CMatrix>(m).eigenvalues();
  std::sort(ev.data(), ev.data() + ev.size(), std::greater<>());
  return ev;
}

TEST(Frame, RejectsNonOrthonormalColumns) {
  CMatrix m = CMatrix::Identity(3, 2);
  EXPECT_NO_THROW(Frame{m});
  m(0, 1) = 1e-6;
  EXPECT_THROW(Frame{m}, ContractError);
}

TEST(Frame, RankRange) {
  // Full rank k = n is allowed (the n = k = 2 Bloch case).
  EXPECT_NO_THROW(Frame(CMatrix::Identity(2, 2)));
  EXPECT_THROW(Frame(CMatrix::Identity(2, 3)), ContractError);
  EXPECT_THROW(Frame(CMatrix(3, 0)), ContractError);
}

TEST(Frame, WithPhasesMultipliesColumns) {
  const Frame f = Frame::canonical(3, 2);
  const Frame g = f.with_phases(RVector::Constant(2, std::numbers::pi / 2));
  EXPECT_TRUE(near(g.matrix(), kI * f.matrix(), 1e-15));
}

TEST(SpectralWeights, Validation) {
  EXPECT_NO_THROW((SpectralWeights{0.7, 0.3}));
  EXPECT_NO_THROW((SpectralWeights{1.0}));
  EXPECT_THROW((SpectralWeights{0.3, 0.7}), ContractError);
  EXPECT_THROW((SpectralWeights{0.5, 0.5}), ContractError);
  EXPECT_THROW((SpectralWeights{0.7, 0.4}), ContractError);
  EXPECT_THROW((SpectralWeights{1.2, -0.2}), ContractError);
  EXPECT_THROW((SpectralWeights{0.9}), ContractError);
  EXPECT_THROW(SpectralWeights{RVector()}, ContractError);
}

TEST(DensityMatrix, Validation) {
  EXPECT_NO_THROW(DensityMatrix{diag({0.7, 0.3, 0.0})});
  EXPECT_THROW(DensityMatrix{diag({0.7, 0.4, 0.0})}, ContractError);
  EXPECT_THROW(DensityMatrix{diag({1.2, -0.2})}, ContractError);
  CMatrix m = diag({0.5, 0.5});
  m(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix{m}, ContractError);
}

TEST(OrbitPoint, ChecksSpectrum) {
  const SpectralWeights w{0.7, 0.3};
  EXPECT_NO_THROW(OrbitPoint(DensityMatrix(diag({0.7, 0.3, 0.0})), w));
  EXPECT_THROW(OrbitPoint(DensityMatrix(diag({0.6, 0.4, 0.0})), w), NotOnOrbitError);
}

TEST(Project, CanonicalFrame) {
  EXPECT_TRUE(near(project(Frame::canonical(3, 2), {0.7, 0.3}), diag({0.7, 0.3, 0.0}), 0.0));
}

TEST(Project, DimensionMismatch) {
  EXPECT_THROW(project(Frame::canonical(3, 2), {1.0}), ContractError);
}

TEST(Project, SpectrumAndFiberInvariance) {
  SplitMix64 rng(4);
  const SpectralWeights w{0.6, 0.4};
  const Frame f(random_frame_matrix(rng, 4, 2));
  const CMatrix rho = project(f, w);
  const RVector ev = sorted_eigenvalues(rho);
  EXPECT_NEAR(ev(0), 0.6, 1e-12);
  EXPECT_NEAR(ev(1), 0.4, 1e-12);
  EXPECT_NEAR(std::abs(ev(2)) + std::abs(ev(3)), 0.0, 1e-12);
  RVector alpha(2);
  alpha << 0.3, -2.1;
  EXPECT_TRUE(near(project(f.with_phases(alpha), w), rho, 1e-14));
}

TEST(SpectralFrame, DiagonalCase) {
  const SpectralDecomposition d = spectral_frame(diag({0.7, 0.3, 0.0}), 2);
  EXPECT_TRUE(near(d.frame.matrix(), CMatrix::Identity(3, 2), 1e-14));
  EXPECT_NEAR(d.weights[0], 0.7, 1e-14);
  EXPECT_NEAR(d.weights[1], 0.3, 1e-14);
}

TEST(SpectralFrame, RoundTripAndPhaseConvention) {
  SplitMix64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix u = random_unitary(rng, 4);
    const CMatrix rho = u * diag({0.5, 0.3, 0.2, 0.0}) * u.adjoint();
    const SpectralDecomposition d = spectral_frame(rho, 3);
    EXPECT_NEAR(d.weights[0], 0.5, 1e-12);
    EXPECT_NEAR(d.weights[2], 0.2, 1e-12);
    EXPECT_TRUE(near(project(d.frame, d.weights), rho, 1e-10));
    for (int a = 0; a < 3; ++a) {
      Eigen::Index at = 0;
      d.frame.column(a).cwiseAbs().maxCoeff(&at);
      EXPECT_NEAR(d.frame.column(a)(at).imag(), 0.0, 1e-15);
      EXPECT_GT(d.frame.column(a)(at).real(), 0.0);
    }
    // Idempotent on its own output.
    EXPECT_TRUE(near(apply_phase_convention(d.frame.matrix()), d.frame.matrix(), 1e-15));
  }
}

TEST(SpectralFrame, Errors) {
  EXPECT_THROW(spectral_frame(diag({0.5, 0.5}), 1), DegeneracyError);
  EXPECT_THROW(spectral_frame(diag({0.5, 0.5, 0.0}), 2), DegeneracyError);
  EXPECT_THROW(spectral_frame(diag({0.6, 0.3, 0.1}), 2), NotOnOrbitError);
}

TEST(Dims, Examples) {
  EXPECT_EQ(dims(3, 2), std::make_pair(8, 6));
  EXPECT_EQ(dims(2, 1), std::make_pair(3, 2));
  EXPECT_EQ(dims(5, 3), std::make_pair(21, 18));
  for (int n = 3; n < 8; ++n) EXPECT_EQ(dims(n, 2), std::make_pair(4 * (n - 1), 2 * (2 * n - 3)));
  EXPECT_EQ(dims(2, 2), std::make_pair(4, 2));
  EXPECT_THROW(dims(2, 3), ContractError);
  EXPECT_THROW(dims(3, 0), ContractError);
}

TEST(SinPi, ExactAtIntegers) {
  for (int m = -4; m <= 4; ++m) EXPECT_EQ(sin_pi(m), 0.0);
  EXPECT_NEAR(sin_pi(0.5), 1.0, 1e-16);
  EXPECT_NEAR(sin_pi(0.25), std::sqrt(0.5), 2e-16);
}

TEST(OrbitLoop, ZeroModesGiveConstantPath) {
  const SpectralWeights w{0.7, 0.3};
  const Frame base = Frame::canonical(3, 2);
  const OrbitLoop loop(w, base, {CMatrix::Zero(3, 3), CMatrix::Zero(3, 3)});
  const DiscretizedPath p = loop.sample(16);
  for (const auto& sample : p.samples()) EXPECT_TRUE(near(sample.rho, project(base, w), 1e-15));
}

TEST(OrbitLoop, SpectrumPreservedAndExactClosure) {
  const SpectralWeights w{0.5, 0.3, 0.2};
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const OrbitLoop loop = random_orbit_loop(w, 5, 3, seed);
    EXPECT_EQ(max_abs(loop.rho_at(0.0) - loop.rho_at(1.0)), 0.0);
    for (double s : {0.1, 0.37, 0.5, 0.93}) {
      const RVector ev = sorted_eigenvalues(loop.rho_at(s));
      EXPECT_NEAR(ev(0), 0.5, 1e-12);
      EXPECT_NEAR(ev(1), 0.3, 1e-12);
      EXPECT_NEAR(ev(2), 0.2, 1e-12);
      EXPECT_TRUE(near(project(Frame(loop.frame_at(s)), w), loop.rho_at(s), 1e-12));
    }
    for (const auto& x : loop.modes()) EXPECT_NEAR(std::abs(x.trace()), 0.0, 1e-12);
  }
}

TEST(OrbitLoop, Deterministic) {
  const SpectralWeights w{0.7, 0.3};
  EXPECT_EQ(max_abs(random_orbit_loop(w, 3, 2, 9).rho_at(0.3) -
                    random_orbit_loop(w, 3, 2, 9).rho_at(0.3)),
            0.0);
}

TEST(DiscretizedPath, Validation) {
  const SpectralWeights w{0.7, 0.3};
  const CMatrix rho = diag({0.7, 0.3, 0.0});
  EXPECT_THROW(DiscretizedPath(w, {}, false), ContractError);
  EXPECT_THROW(DiscretizedPath(w, {{0.0, rho, {}}, {0.0, rho, {}}}, false), ContractError);
  EXPECT_THROW(DiscretizedPath(w, {{0.0, rho, {}}, {1.0, diag({0.7, 0.0, 0.3}), {}}}, true),
               ContractError);
  EXPECT_THROW(DiscretizedPath(w, {{0.0, rho, {}}, {1.0, diag({0.7, 0.3}), {}}}, false),
               ContractError);
  EXPECT_THROW(DiscretizedPath(w, {{0.0, rho, Frame::canonical(3, 2).with_phases(RVector::Zero(2))},
                                   {1.0, rho, Frame(CMatrix::Identity(3, 2).rowwise().reverse())}},
                               false),
               ContractError);
  EXPECT_NO_THROW(DiscretizedPath(w, {{0.0, rho, {}}, {1.0, rho, {}}}, true));
}

TEST(DiscretizedPath, ReversedAndConcatenated) {
  const SpectralWeights w{0.7, 0.3};
  const DiscretizedPath p = random_orbit_loop(w, 3, 2, 5).sample(20);
  const DiscretizedPath r = reversed(p);
  ASSERT_EQ(r.size(), p.size());
  EXPECT_EQ(r[0].s, 0.0);
  EXPECT_EQ(r[r.size() - 1].s, 1.0);
  EXPECT_TRUE(near(r[3].rho, p[p.size() - 4].rho, 0.0));
  EXPECT_TRUE(r.closed());

  const DiscretizedPath twice = concatenate({p, p}, true);
  EXPECT_EQ(twice.size(), 2 * p.size() - 1);
  EXPECT_NEAR(twice[twice.size() - 1].s, 2.0, 1e-14);
  ASSERT_TRUE(twice.has_frames());
  // Frames stay continuous across the junction.
  const std::size_t j = p.size() - 1;
  EXPECT_TRUE(near(twice[j].frame->matrix(), p[j].frame->matrix(), 1e-14));
}

TEST(DiscretizedPath, ConcatenateRejectsGaps) {
  const SpectralWeights w{0.7, 0.3};
  const DiscretizedPath a = random_orbit_loop(w, 3, 2, 5).curve().sample(10);
  const DiscretizedPath b = random_orbit_loop(w, 3, 2, 6).curve().sample(10);
  EXPECT_THROW(concatenate({a, b}, false), ContractError);
}

TEST(Curve, ClosedSamplingAndReparametrization) {
  const SpectralWeights w{0.7, 0.3};
  const Curve c = random_orbit_loop(w, 3, 2, 3).curve();
  const DiscretizedPath p = c.sample(8);
  EXPECT_EQ(p.size(), 9u);
  EXPECT_EQ(max_abs(p[0].rho - p[8].rho), 0.0);
  const Curve r = c.reparametrized([](double s) { return s * s; });
  EXPECT_TRUE(near(r.rho_at(0.5), c.rho_at(0.25), 1e-15));
}

}  // namespace
}  // namespace holonomy
