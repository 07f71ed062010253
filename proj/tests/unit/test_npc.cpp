#include <cmath>
#include <numbers>

#include "test_util.hpp"
#include "validation/fixtures.hpp"

namespace holonomy {
namespace {

using test::near;

constexpr double kPi = std::numbers::pi;

CMatrix projector(const CVector& v) { return v * v.adjoint() / v.squaredNorm(); }

// Path with frames Psi(s) diag(e^{i alpha(s)}) for the given per-level phase functions.
DiscretizedPath dressed(const DiscretizedPath& path, const std::function<RVector(double)>& alpha) {
  std::vector<PathSample> samples = path.samples();
  for (auto& s : samples) s.frame = s.frame->with_phases(alpha(s.s));
  return DiscretizedPath(path.weights(), std::move(samples), path.closed());
}

TEST(Bargmann3, Examples) {
  const CVector e1 = CVector::Unit(2, 0);
  const CVector e2 = CVector::Unit(2, 1);
  const CMatrix p1 = projector(e1);
  EXPECT_NEAR(std::abs(bargmann3(p1, p1, p1) - 1.0), 0.0, 1e-15);
  EXPECT_EQ(bargmann3(p1, projector(e1 + e2), projector(e2)), 0.0);
  const cplx v = bargmann3(p1, projector(e1 + e2), projector(e1 + kI * e2));
  EXPECT_NEAR(std::abs(v - 0.25 * cplx(1.0, 1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::arg(v), kPi / 4, 1e-15);
}

TEST(Bargmann3, CyclicAndConjugatedOnReversal) {
  SplitMix64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix a = projector(random_complex(rng, 4, 1).col(0));
    const CMatrix b = projector(random_complex(rng, 4, 1).col(0));
    const CMatrix c = projector(random_complex(rng, 4, 1).col(0));
    const cplx v = bargmann3(a, b, c);
    EXPECT_LT(std::abs(v - bargmann3(b, c, a)), 1e-15);
    EXPECT_LT(std::abs(v - std::conj(bargmann3(c, b, a))), 1e-15);
    EXPECT_LE(std::abs(v), 1.0 + 1e-15);
  }
}

TEST(Bargmann3, RejectsNonProjectors) {
  const CMatrix p = projector(CVector::Unit(2, 0));
  EXPECT_THROW(bargmann3(2.0 * p, p, p), ContractError);
  EXPECT_THROW(bargmann3(CMatrix::Identity(2, 2), p, p), ContractError);
}

TEST(ClassifyCurve, Examples) {
  const Curve constant{SpectralWeights{1.0}, 2, 0.0, 1.0, false,
                       {}, [](double) { return CMatrix(CMatrix::Identity(2, 1)); }};
  EXPECT_EQ(classify_curve(constant.sample(20)).kind, CurveKind::kNPC);

  const CurveClass orthogonal = classify_curve(fixtures::real_rotation({1.0}, 2, kPi / 2, 3).sample(40));
  EXPECT_EQ(orthogonal.kind, CurveKind::kInvalid);
  ASSERT_TRUE(orthogonal.witness);
  EXPECT_EQ(orthogonal.witness->kind, "pair");

  const CurveClass geodesic = classify_curve(fixtures::real_rotation({1.0}, 3, 1.0, 4, true).sample(60));
  EXPECT_EQ(geodesic.kind, CurveKind::kNPC);
  EXPECT_FALSE(geodesic.witness);
}

TEST(ClassifyCurve, GenericLoopIsClassII) {
  const CurveClass c = classify_curve(fixtures::strip_frames(
      random_orbit_loop({0.7, 0.3}, 3, 2, 5, 0.3).sample(200)));
  EXPECT_EQ(c.kind, CurveKind::kClassII);
  ASSERT_TRUE(c.witness);
  EXPECT_EQ(c.witness->kind, "triple");
}

TEST(ClassifyCurve, PassingHalfwayThroughOrthogonalIsClassI) {
  // A great circle through 3 pi / 4 passes a state orthogonal to the start (at
  // s = 2/3, a sample point) but ends on one that is not.
  const CurveClass c = classify_curve(fixtures::real_rotation({1.0}, 3, 0.75 * kPi, 6, true).sample(12));
  EXPECT_EQ(c.kind, CurveKind::kClassI);
  ASSERT_TRUE(c.witness);
  EXPECT_EQ(c.witness->kind, "pair");
}

TEST(PancharatnamLift, InPhaseWithReference) {
  const DiscretizedPath p = fixtures::strip_frames(random_orbit_loop({0.7, 0.3}, 3, 2, 7, 0.3).curve().sample(100));
  const DiscretizedPath lift = pancharatnam_lift(p);
  const Frame& ref = *lift[0].frame;
  for (std::size_t i = 0; i < lift.size(); ++i) {
    EXPECT_TRUE(near(project(*lift[i].frame, p.weights()), p[i].rho, 1e-10));
    for (int a = 0; a < 2; ++a) {
      const cplx o = ref.column(a).dot(lift[i].frame->column(a));
      EXPECT_GT(o.real(), 0.0);
      EXPECT_LT(std::abs(std::arg(o)), 1e-12);
    }
  }
}

TEST(PancharatnamLift, ConstantPathGivesReference) {
  SplitMix64 rng(8);
  const Frame ref(random_frame_matrix(rng, 3, 1));
  const CMatrix rho = project(ref, {1.0});
  const DiscretizedPath p({1.0}, {{0.0, rho, {}}, {0.5, rho, {}}, {1.0, rho, {}}}, false);
  const DiscretizedPath lift = pancharatnam_lift(p, ref);
  for (const auto& s : lift.samples()) EXPECT_TRUE(near(s.frame->matrix(), ref.matrix(), 1e-14));
}

TEST(PancharatnamLift, UndefinedWhenOrthogonal) {
  try {
    pancharatnam_lift(fixtures::real_rotation({1.0}, 2, kPi / 2, 3).sample(10));
    FAIL() << "expected LiftUndefinedError";
  } catch (const LiftUndefinedError& e) {
    EXPECT_EQ(e.level(), 1);
    EXPECT_NEAR(e.s(), 1.0, 1e-15);
  }
}

TEST(LineIntegralA, GeodesicLiftIsHorizontal) {
  const DiscretizedPath g = fixtures::strip_frames(fixtures::real_rotation({1.0}, 3, 1.0, 9, true).sample(200));
  const DiscretizedPath lift = pancharatnam_lift(g);
  EXPECT_NEAR(line_integral_A(lift)(0), 0.0, 1e-6);
  for (std::size_t i = 0; i < lift.size(); i += 37) {
    for (std::size_t j = 0; j < lift.size(); j += 41) {
      const cplx o = lift[i].frame->column(0).dot(lift[j].frame->column(0));
      EXPECT_GT(o.real(), 0.0);
      EXPECT_NEAR(o.imag(), 0.0, 1e-12);
    }
  }
}

TEST(LineIntegralA, RecoversAppliedPhase) {
  const DiscretizedPath g = pancharatnam_lift(fixtures::strip_frames(
      fixtures::real_rotation({0.7, 0.3}, 3, 0.8, 10).sample(500)));
  const DiscretizedPath d = dressed(g, [](double s) {
    RVector a(2);
    a << 2 * kPi * s, -0.5 * s * s;
    return a;
  });
  const RVector integral = line_integral_A(d);
  EXPECT_NEAR(integral(0), 2 * kPi, 1e-6);
  EXPECT_NEAR(integral(1), -0.5, 1e-6);
}

TEST(GpOpenCurve, NpcIsZero) {
  EXPECT_NEAR(gp_open_curve(fixtures::real_rotation({1.0}, 3, 1.0, 11, true).sample(200)), 0.0, 1e-6);
  EXPECT_NEAR(gp_open_curve(fixtures::real_rotation({0.6, 0.4}, 4, 1.0, 12).sample(200)), 0.0, 1e-6);
}

TEST(GpOpenCurve, LiftIndependent) {
  const Curve c = random_orbit_loop({0.7, 0.3}, 3, 2, 13, 0.3).curve();
  Curve open = c;
  open.closed = false;
  open.s_end = 0.6;
  const DiscretizedPath p = open.sample(600);
  const double carried = gp_open_curve(p);
  const double spectral = gp_open_curve(fixtures::strip_frames(p));
  const DiscretizedPath wobbly = dressed(p, [](double s) {
    RVector a(2);
    a << std::sin(7 * s) + 3 * s, 2.0 * s * s;
    return a;
  });
  EXPECT_NEAR(carried, spectral, 1e-8);
  EXPECT_NEAR(carried, gp_open_curve(wobbly), 1e-8);
}

TEST(GpOpenCurve, ClosedLoopMatchesTransport) {
  const DiscretizedPath p = random_orbit_loop({0.7, 0.3}, 3, 2, 14, 0.3).sample(4000);
  EXPECT_NEAR(gp_open_curve(p), geometric_phases(p).weighted, 1e-6);
}

TEST(NpcClosure, GeodesicClosureOfAnNpcIsZero) {
  const ClosureResult r = gp_via_npc_closure(fixtures::real_rotation({1.0}, 3, 1.0, 15, true).sample(200));
  ASSERT_TRUE(r.available) << r.reason;
  EXPECT_NEAR(r.value, 0.0, 1e-6);
}

TEST(NpcClosure, MatchesOpenCurvePhase) {
  // A pure-state open arc: the closed phase equals the open-curve GP.
  Curve arc = bloch_circle(1.0, {1.0});
  arc.closed = false;
  arc.s_end = 0.4;
  const DiscretizedPath p = arc.sample(400);
  const ClosureResult r = gp_via_npc_closure(p);
  ASSERT_TRUE(r.available) << r.reason;
  EXPECT_NEAR(r.value, gp_open_curve(p), 1e-5);
}

TEST(NonAdditivity, RandomTriangle) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto sides = fixtures::random_triangle({0.7, 0.3}, 3, 0.8, seed, 300);
    const NonAdditivity r = nonadditivity_check(sides[0], sides[1], sides[2]);
    EXPECT_LT(r.residual, 1e-5) << "seed " << seed;
  }
}

TEST(NonAdditivity, DegenerateTriangle) {
  const SpectralWeights w{0.7, 0.3};
  const CMatrix rho = project(Frame::canonical(3, 2), w);
  const DiscretizedPath point(w, {{0.0, rho, {}}, {1.0, rho, {}}}, false);
  const NonAdditivity r = nonadditivity_check(point, point, point);
  EXPECT_NEAR(r.lhs, 0.0, 1e-15);
  EXPECT_NEAR(r.rhs, 0.0, 1e-15);
  EXPECT_NEAR(r.residual, 0.0, 1e-15);
}

TEST(NonAdditivity, RejectsBrokenChain) {
  const auto a = fixtures::random_triangle({0.7, 0.3}, 3, 0.8, 4, 50);
  const auto b = fixtures::random_triangle({0.7, 0.3}, 3, 0.8, 5, 50);
  EXPECT_THROW(nonadditivity_check(a[0], b[1], a[2]), ContractError);
}

TEST(NpmCheck, KnownPatches) {
  const SpectralWeights w{0.7, 0.3};
  const NpmReport point = npm_check(fixtures::constant_patch(w, 3, 1), 6);
  EXPECT_TRUE(point.isotropic && point.npm && point.pancharatnam_exact);

  const NpmReport real = npm_check(fixtures::real_patch(w, 4, 0.5, 2), 6);
  EXPECT_TRUE(real.isotropic);
  EXPECT_TRUE(real.npm);
  EXPECT_TRUE(real.pancharatnam_exact);

  const NpmReport generic = npm_check(fixtures::generic_patch(w, 3, 0.5, 3), 6);
  EXPECT_FALSE(generic.isotropic);
  EXPECT_FALSE(generic.npm);

  const NpmReport ruled = npm_check(fixtures::ruled_patch(w, 3, 0.5, 4), 6);
  EXPECT_TRUE(ruled.isotropic);
  EXPECT_FALSE(ruled.npm);
}

TEST(NpmCheck, NpmImpliesIsotropic) {
  const SpectralWeights w{0.6, 0.4};
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    for (const auto& patch : {fixtures::real_patch(w, 3, 0.4, seed), fixtures::generic_patch(w, 3, 0.4, seed),
                              fixtures::ruled_patch(w, 3, 0.4, seed)}) {
      const NpmReport r = npm_check(patch, 5);
      EXPECT_TRUE(!r.npm || r.isotropic);
    }
  }
}

}  // namespace
}  // namespace holonomy
