#include <cmath>
#include <numbers>

#include "test_util.hpp"
#include "validation/fixtures.hpp"

namespace holonomy {
namespace {

using test::near;

constexpr double kPi = std::numbers::pi;

ParametrizedSurface cone(std::uint64_t seed) {
  return cone_surface(random_orbit_loop({0.65, 0.35}, 3, 3, seed));
}

TEST(ConeSurface, AnalyticJetMatchesFiniteDifference) {
  const ParametrizedSurface s = cone(1);
  const ParametrizedSurface plain =
      ParametrizedSurface::from_map(s.weights(), s.n(), [&](double u, double v) { return s.at(u, v); },
                                    LoopEdge::kTop);
  for (double u : {0.1, 0.45, 0.8}) {
    for (double v : {0.2, 0.7, 1.0}) {
      const SurfaceJet a = s.jet(u, v, 1e-5);
      const SurfaceJet b = plain.jet(u, v, 1e-5);
      EXPECT_TRUE(near(a.rho, b.rho, 1e-15));
      EXPECT_TRUE(near(a.du, b.du, 1e-8));
      EXPECT_TRUE(near(a.dv, b.dv, 1e-8));
    }
  }
}

TEST(ConeSurface, BoundaryIsTheLoop) {
  const OrbitLoop loop = random_orbit_loop({0.65, 0.35}, 3, 3, 2);
  const ParametrizedSurface s = cone_surface(loop);
  EXPECT_EQ(s.loop_edge(), LoopEdge::kTop);
  for (double t : {0.0, 0.3, 0.9}) EXPECT_TRUE(near(s.boundary_at(t), loop.rho_at(t), 1e-13));
  // The opposite edge collapses to the base point.
  EXPECT_TRUE(near(s.at(0.4, 0.0), project(loop.base(), loop.weights()), 1e-15));
}

TEST(SurfaceIntegral, ConstantSurfaceIsZero) {
  const ParametrizedSurface s = fixtures::constant_patch({0.7, 0.3}, 3, 4);
  EXPECT_NEAR(surface_integral(s).value, 0.0, 1e-12);
}

TEST(SurfaceIntegral, PureStateCapIsSolidAngleHalf) {
  for (double theta : {0.4, kPi / 3, kPi / 2, 2.0}) {
    QuadratureOptions q;
    q.quad_tol = 1e-8;
    const double area = surface_integral(bloch_cap(theta, {1.0}), q).value;
    EXPECT_NEAR(area, kPi * (1.0 - std::cos(theta)), 1e-7) << "theta = " << theta;
  }
}

TEST(SurfaceIntegral, AdditiveUnderSplitting) {
  const ParametrizedSurface s = cone(3);
  QuadratureOptions q;
  q.quad_tol = 1e-8;
  const double whole = surface_integral_region(s, 0, 1, 0, 1, q).value;
  const double left = surface_integral_region(s, 0, 0.5, 0, 1, q).value;
  const double right = surface_integral_region(s, 0.5, 1, 0, 1, q).value;
  EXPECT_NEAR(whole, left + right, 1e-6);
  const double bottom = surface_integral_region(s, 0, 1, 0, 0.5, q).value;
  const double top = surface_integral_region(s, 0, 1, 0.5, 1, q).value;
  EXPECT_NEAR(whole, bottom + top, 1e-6);
}

TEST(SurfaceIntegral, ReparametrizationAndOrientation) {
  const ParametrizedSurface s = cone(4);
  QuadratureOptions q;
  q.quad_tol = 1e-8;
  const double base = surface_integral(s, q).value;
  const auto remapped = [&](auto f) {
    return ParametrizedSurface::from_map(s.weights(), s.n(), f, s.loop_edge());
  };
  const double squared = surface_integral(remapped([&](double u, double v) { return s.at(u * u, v); }), q).value;
  EXPECT_NEAR(squared, base, 1e-6);
  const double flipped =
      surface_integral(remapped([&](double u, double v) { return s.at(1.0 - u, v); }), q).value;
  EXPECT_NEAR(flipped, -base, 1e-6);
}

TEST(SurfaceIntegral, LoopEdgeSetsSign) {
  const ParametrizedSurface s = cone(5);
  const auto swapped = ParametrizedSurface::from_map(
      s.weights(), s.n(), [&](double u, double v) { return s.at(v, u); }, LoopEdge::kRight);
  QuadratureOptions q;
  q.quad_tol = 1e-8;
  EXPECT_NEAR(surface_integral(swapped, q).value, surface_integral(s, q).value, 1e-6);
  EXPECT_EQ(edge_orientation(LoopEdge::kTop), -1.0);
  EXPECT_EQ(edge_orientation(LoopEdge::kRight), 1.0);
}

TEST(SurfaceIntegral, GridConvergesToCallable) {
  const ParametrizedSurface s = cone(6);
  const double reference = surface_integral(s).value;
  double last_error = 1e9;
  for (int nodes : {17, 33, 65}) {
    const double grid = surface_integral(io::sample_surface(s, nodes, nodes)).value;
    const double error = std::abs(grid - reference);
    EXPECT_LT(error, last_error);
    last_error = error;
  }
  EXPECT_LT(last_error, 1e-2);
}

TEST(SurfaceIntegral, ReportsNonConvergence) {
  QuadratureOptions q;
  q.quad_tol = 1e-15;
  q.extrapolate = false;
  q.max_resolution = 32;
  EXPECT_THROW(surface_integral(cone(7), q), QuadratureError);
  q.max_resolution = 4;
  EXPECT_THROW(surface_integral(cone(7), q), ContractError);
}

TEST(SurfaceIntegral, DeterministicBitForBit) {
  EXPECT_EQ(surface_integral(cone(8)).value, surface_integral(cone(8)).value);
}

}  // namespace
}  // namespace holonomy
