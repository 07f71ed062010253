#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "test_util.hpp"
#include "validation/fixtures.hpp"
#include "validation/oracles.hpp"

namespace holonomy {
namespace {

using test::diag;
using test::near;

constexpr double kPi = std::numbers::pi;

DiscretizedPath constant_loop(int steps) {
  const SpectralWeights w{0.7, 0.3};
  const CMatrix rho = project(Frame::canonical(3, 2), w);
  std::vector<PathSample> samples;
  for (int i = 0; i <= steps; ++i) samples.push_back({static_cast<double>(i) / steps, rho, {}});
  return DiscretizedPath(w, std::move(samples), true);
}

TEST(GeometricPhases, ConstantLoopIsZero) {
  const PhaseReport r = geometric_phases(constant_loop(10));
  EXPECT_EQ(r.per_level.norm(), 0.0);
  EXPECT_EQ(r.weighted, 0.0);
}

TEST(GeometricPhases, BlochHemisphereIsMinusPi) {
  const PhaseReport r = geometric_phases(bloch_circle(kPi / 2, {1.0}));
  EXPECT_NEAR(r.per_level(0), -kPi, 1e-6);
  EXPECT_NEAR(r.weighted, -kPi, 1e-6);
}

TEST(GeometricPhases, BlochCirclesMatchOracle) {
  for (double theta : {0.3, kPi / 3, 2.0, 2.9}) {
    const PhaseReport r = geometric_phases(bloch_circle(theta, {1.0}));
    EXPECT_NEAR(r.per_level(0), oracles::bloch_lift_phase(theta, 0, 200000), 1e-6);
    EXPECT_NEAR(r.per_level(0), -kPi * (1.0 - std::cos(theta)), 1e-6);
  }
}

TEST(GeometricPhases, MixedBlochCircle) {
  const SpectralWeights w{0.7, 0.3};
  for (double theta : {kPi / 3, kPi / 2}) {
    const PhaseReport r = geometric_phases(bloch_circle(theta, w));
    const double c = std::cos(theta);
    EXPECT_NEAR(r.per_level(0), -kPi * (1.0 - c), 1e-6);
    EXPECT_NEAR(r.per_level(1), -kPi * (1.0 + c), 1e-6);
    EXPECT_NEAR(r.per_level(1), oracles::bloch_lift_phase(theta, 1, 200000), 1e-6);
    EXPECT_NEAR(r.weighted, -kPi * (1.0 - 0.4 * c), 1e-6);
    EXPECT_NEAR(r.weighted, 0.7 * r.per_level(0) + 0.3 * r.per_level(1), 1e-12);
  }
  EXPECT_NEAR(geometric_phases(bloch_circle(kPi / 3, w)).weighted, -0.8 * kPi, 1e-6);
}

TEST(GeometricPhases, SelfConvergence) {
  const DiscretizedPath coarse = bloch_circle(1.1, {1.0}).sample(10000);
  const DiscretizedPath fine = bloch_circle(1.1, {1.0}).sample(100000);
  EXPECT_NEAR(geometric_phases(coarse).weighted, geometric_phases(fine).weighted, 1e-5);
}

TEST(GeometricPhases, IndependentOfInitialPhases) {
  const DiscretizedPath p = fixtures::strip_frames(random_orbit_loop({0.7, 0.3}, 3, 3, 4).sample(800));
  const PhaseReport a = geometric_phases(p);
  RVector alpha(2);
  alpha << 1.2, -0.4;
  const Frame start = spectral_frame(p[0].rho, 2).frame.with_phases(alpha);
  const PhaseReport b = geometric_phases(p, start);
  EXPECT_NEAR((a.per_level - b.per_level).norm(), 0.0, 1e-12);
}

TEST(GeometricPhases, TracelessLoopPhasesSumToZero) {
  // With equal-size levels and traceless modes the two accumulated phases cancel.
  const PhaseReport r = geometric_phases(random_orbit_loop({0.7, 0.3}, 2, 3, 6).curve());
  EXPECT_NEAR(r.per_level.sum(), 0.0, 1e-6);
}

TEST(GeometricPhases, RejectsOpenPath) {
  const Curve c = fixtures::real_rotation({1.0}, 3, 0.5, 1);
  EXPECT_THROW(geometric_phases(c.sample(10)), ContractError);
}

TEST(HorizontalLift, IsHorizontalAndProjectsBack) {
  const DiscretizedPath p = fixtures::strip_frames(random_orbit_loop({0.6, 0.4}, 4, 2, 8).sample(400));
  const DiscretizedPath lift = horizontal_lift(p);
  ASSERT_TRUE(lift.has_frames());
  for (std::size_t i = 0; i + 1 < lift.size(); ++i) {
    EXPECT_TRUE(near(project(*lift[i].frame, p.weights()), p[i].rho, 1e-10));
    for (int a = 0; a < 2; ++a) {
      const cplx o = lift[i].frame->column(a).dot(lift[i + 1].frame->column(a));
      EXPECT_GT(o.real(), 0.0);
      EXPECT_NEAR(o.imag(), 0.0, 1e-14);
    }
  }
}

TEST(HorizontalLift, ConvergesUnderRefinement) {
  // Every discrete estimate of A along the lift is zero by construction, so
  // convergence is checked on the transported end frame instead.
  const OrbitLoop loop = random_orbit_loop({0.6, 0.4}, 3, 2, 9);
  const auto end_frame = [&](int steps) {
    const DiscretizedPath lift = horizontal_lift(fixtures::strip_frames(loop.sample(steps)));
    return CMatrix(lift[lift.size() - 1].frame->matrix());
  };
  const CMatrix reference = end_frame(25600);
  const double e1 = max_abs(end_frame(200) - reference);
  const double e2 = max_abs(end_frame(400) - reference);
  EXPECT_GT(e1 / e2, 1.8);
  EXPECT_LT(e2, 1e-3);
}

TEST(HorizontalLift, TrivialCases) {
  const DiscretizedPath lift = horizontal_lift(constant_loop(5));
  for (const auto& s : lift.samples()) EXPECT_TRUE(near(s.frame->matrix(), CMatrix::Identity(3, 2), 1e-15));
}

TEST(HorizontalLift, RejectsForeignInitialFrame) {
  CMatrix other = CMatrix::Zero(3, 2);
  other(1, 0) = 1.0;
  other(0, 1) = 1.0;
  EXPECT_THROW(horizontal_lift(constant_loop(5), Frame(other)), ContractError);
}

TEST(HorizontalLift, StepTooLarge) {
  try {
    horizontal_lift(bloch_circle(kPi / 2, {1.0}).sample(2));
    FAIL() << "expected StepTooLargeError";
  } catch (const StepTooLargeError& e) {
    EXPECT_EQ(e.level(), 1);
  }
}

TEST(PathOrderedExp, TrivialCases) {
  const std::vector<CoefficientSample> zero{{0.0, CMatrix::Zero(2, 2)}, {1.0, CMatrix::Zero(2, 2)}};
  EXPECT_TRUE(near(path_ordered_exp(zero), CMatrix::Identity(2, 2), 0.0));
  SplitMix64 rng(1);
  const CMatrix k = random_hermitian(rng, 3);
  const CMatrix u = path_ordered_exp([&](double) { return k; }, 0.0, 1.0, 7);
  EXPECT_TRUE(near(u, CMatrix(-kI * k).exp(), 1e-12));
}

TEST(PathOrderedExp, LaterStepsToTheLeft) {
  CMatrix a(2, 2), b(2, 2);
  a << 0.0, 1.0, 1.0, 0.0;
  b << 1.0, 0.0, 0.0, -1.0;
  const std::vector<CoefficientSample> samples{{0.0, a}, {1.0, b}, {2.0, b}};
  const CMatrix u = path_ordered_exp(samples, OrderingMethod::kProduct);
  const CMatrix ordered = CMatrix(-kI * b).exp() * CMatrix(-kI * a).exp();
  EXPECT_TRUE(near(u, ordered, 1e-13));
  EXPECT_GT(max_abs(u - CMatrix(-kI * (a + b)).exp()), 0.1);
}

TEST(PathOrderedExp, ConvergenceOrders) {
  SplitMix64 rng(2);
  const CMatrix a = random_hermitian(rng, 3), b = random_hermitian(rng, 3);
  const auto coeff = [&](double s) { return CMatrix(std::cos(2 * s) * a + s * b); };
  const CMatrix reference = path_ordered_exp(coeff, 0.0, 1.0, 1 << 14);
  const auto error = [&](int steps, OrderingMethod m) {
    return max_abs(path_ordered_exp(coeff, 0.0, 1.0, steps, m) - reference);
  };
  const double product = error(64, OrderingMethod::kProduct) / error(128, OrderingMethod::kProduct);
  EXPECT_NEAR(product, 2.0, 0.2);
  const double midpoint = error(64, OrderingMethod::kMidpoint) / error(128, OrderingMethod::kMidpoint);
  EXPECT_GT(midpoint, 3.5);
  const CMatrix u = path_ordered_exp(coeff, 0.0, 1.0, 50);
  EXPECT_TRUE(near(u.adjoint() * u, CMatrix::Identity(3, 3), 1e-12));
}

TEST(Holonomy, MatchesPhasesAndComposes) {
  const DiscretizedPath p = random_orbit_loop({0.6, 0.4}, 3, 2, 10).sample(4000);
  const PhaseReport r = geometric_phases(p);
  const CMatrix h = holonomy_of_loop(p);
  EXPECT_TRUE(near(h.adjoint() * h, CMatrix::Identity(2, 2), 1e-12));
  EXPECT_LT(std::abs(h(0, 1)) + std::abs(h(1, 0)), 1e-12);
  for (int a = 0; a < 2; ++a) {
    EXPECT_LT(std::abs(h(a, a) - std::polar(1.0, r.per_level(a))), 1e-5);
  }
  const CMatrix twice = holonomy_of_loop(concatenate({p, p}, true));
  EXPECT_TRUE(near(twice, h * h, 1e-9));
  EXPECT_TRUE(near(holonomy_of_loop(constant_loop(8)), CMatrix::Identity(2, 2), 1e-15));
}

TEST(HamiltonianLoop, CommutingHamiltonianIsConstant) {
  const SpectralWeights w{0.7, 0.3};
  const CMatrix rho0 = project(Frame::canonical(3, 2), w);
  const DiscretizedPath p = hamiltonian_loop(diag({1.0, 2.0, 3.0}), rho0, w, 2 * kPi, 32);
  EXPECT_TRUE(p.closed());
  for (const auto& s : p.samples()) EXPECT_TRUE(near(s.rho, rho0, 1e-14));
}

TEST(HamiltonianLoop, CommensurateSpectrumCloses) {
  SplitMix64 rng(3);
  const SpectralWeights w{0.7, 0.3};
  const CMatrix u = random_unitary(rng, 3);
  const CMatrix rho0 = project(Frame::canonical(3, 2), w);
  const CMatrix h = u * diag({1.0, 2.0, 3.0}) * u.adjoint();
  const DiscretizedPath p = hamiltonian_loop(h, rho0, w, 2 * kPi, 400);
  EXPECT_TRUE(p.closed());
  EXPECT_TRUE(near(p[p.size() - 1].rho, p[0].rho, 1e-10));
  EXPECT_NO_THROW(geometric_phases(p));
  EXPECT_THROW(hamiltonian_loop(h, rho0, w, 1.0, 40), ContractError);
}

TEST(AreaIdentity, ConeLoop) {
  const OrbitLoop loop = random_orbit_loop({0.65, 0.35}, 3, 3, 7);
  const AreaCheck a = verify_area_identity(loop.curve(), cone_surface(loop));
  EXPECT_LT(a.residual, 1e-4);
  EXPECT_NEAR(a.minus_area, -a.area.value, 0.0);
}

TEST(AreaIdentity, PureStateCap) {
  const double theta = 1.2;
  const AreaCheck a = verify_area_identity(bloch_circle(theta, {1.0}), bloch_cap(theta, {1.0}));
  EXPECT_LT(a.residual, 1e-5);
  EXPECT_NEAR(a.weighted_phase, -kPi * (1.0 - std::cos(theta)), 1e-6);
}

TEST(AreaIdentity, MixedBlochCapHoldsModuloLowerLevelPeriod) {
  // The level-2 lift winds once around the cap's center, so the identity picks
  // up 2 pi kappa_2.
  const SpectralWeights w{0.7, 0.3};
  const double theta = 1.0;
  const AreaCheck a = verify_area_identity(bloch_circle(theta, w), bloch_cap(theta, w));
  EXPECT_NEAR(a.weighted_phase + a.area.value, -2 * kPi * 0.3, 1e-5);
}

TEST(AreaIdentity, RejectsForeignSurface) {
  const OrbitLoop loop = random_orbit_loop({0.65, 0.35}, 3, 3, 7);
  const OrbitLoop other = random_orbit_loop({0.65, 0.35}, 3, 3, 8);
  EXPECT_THROW(verify_area_identity(loop.curve(), cone_surface(other)), ContractError);
}

}  // namespace
}  // namespace holonomy
