#include "validation/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <utility>

#include <fmt/format.h>

#include <holonomy/holonomy.hpp>

#include "validation/fixtures.hpp"
#include "validation/oracles.hpp"

namespace holonomy::validation {

namespace {

using std::numbers::pi;

// Running maximum (or minimum) of one measured quantity.
struct Worst {
  double value;
  bool lowest = false;
  void add(double x) { value = lowest ? std::min(value, x) : std::max(value, x); }
};

Worst max_of() { return {0.0, false}; }
Worst min_of(double start) { return {start, true}; }

SpectralWeights draw_weights(SplitMix64& rng, int k) {
  if (k == 1) return SpectralWeights{1.0};
  return SpectralWeights(random_weights(rng, k));
}

double wrapped(double a) { return std::remainder(a, 2.0 * pi); }

// Calls `body` and records a holonomy::Error as a failed instance.
template <typename F>
void guarded(CheckResult& r, const std::string& instance, F&& body) {
  try {
    body();
  } catch (const Error& e) {
    r.failures.push_back(instance + ": " + e.what());
  }
}

void measure(CheckResult& r, std::string label, double value, double bound, bool at_least = false) {
  r.measurements.push_back({std::move(label), value, bound, at_least});
}

// --- 1: weighted phase + surface integral over cone surfaces ----------------

CheckResult check_area(const CheckOptions& o) {
  CheckResult r;
  const std::pair<int, int> configs[] = {{2, 1}, {3, 1}, {3, 2}, {4, 2}};
  const int per = o.reduced ? 1 : 5;
  Worst residual = max_of();
  Worst steps = min_of(1e300);
  for (int c = 0; c < 4; ++c) {
    const auto [n, k] = configs[c];
    for (int i = 0; i < per; ++i) {
      const std::uint64_t seed = o.seed + 1000 * c + i;
      guarded(r, fmt::format("n={} k={} seed={}", n, k, seed), [&] {
        SplitMix64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
        const OrbitLoop loop = random_orbit_loop(draw_weights(rng, k), n, 3, seed);
        const AreaCheck a = verify_area_identity(loop.curve(), cone_surface(loop));
        residual.add(a.residual);
        steps.add(a.steps);
        ++r.instances;
      });
    }
  }
  measure(r, "max |weighted phase + area|", residual.value, 1e-4);
  measure(r, "min lift steps", steps.value, 2000, true);
  return r;
}

// --- 2: sum_a kappa_a dA^(a) = pullback of Omega ------------------------------

CheckResult check_pullback(const CheckOptions& o) {
  CheckResult r;
  const KksFormula omega = o.fault == Fault::kKksSign
                               ? KksFormula([](const OrbitTangent& a, const OrbitTangent& b) {
                                   return -kks_closed_form(a, b);
                                 })
                               : KksFormula(kks_closed_form);
  const int per = o.reduced ? 20 : 100;
  Worst diff = max_of();
  SplitMix64 rng(o.seed + 2);
  for (int n : {3, 4, 5}) {
    for (int i = 0; i < per; ++i) {
      guarded(r, fmt::format("n={} #{}", n, i), [&] {
        const Frame frame(random_frame_matrix(rng, n, 2));
        const SpectralWeights w(random_weights(rng, 2));
        const FrameTangent t1 = fixtures::random_tangent(rng, frame);
        const FrameTangent t2 = fixtures::random_tangent(rng, frame);
        const PullbackResult p = pullback_check(frame, w, t1, t2, omega);
        diff.add(std::abs(p.lhs - p.rhs));
        ++r.instances;
      });
    }
  }
  measure(r, "max |sum kappa dA - Omega|", diff.value, 1e-10);
  return r;
}

// --- 3: trace formula vs coordinate formula for Omega -------------------------

CheckResult check_kks_dual(const CheckOptions& o) {
  CheckResult r;
  const std::pair<int, int> configs[] = {{2, 1}, {3, 1}, {3, 2}, {4, 2}, {4, 3}, {5, 2}, {6, 3}};
  const int count = o.reduced ? 200 : 1000;
  Worst diff = max_of();
  Worst generator = max_of();
  SplitMix64 rng(o.seed + 3);
  for (int i = 0; i < count; ++i) {
    const auto [n, k] = configs[i % 7];
    guarded(r, fmt::format("n={} k={} #{}", n, k, i), [&] {
      const Frame frame(random_frame_matrix(rng, n, k));
      const SpectralWeights w = draw_weights(rng, k);
      const CMatrix rho = project(frame, w);
      const OrbitTangent t1 =
          tangent_to_orbit(frame, w, fixtures::random_tangent(rng, frame));
      const OrbitTangent t2 =
          tangent_to_orbit(frame, w, fixtures::random_tangent(rng, frame));
      const CMatrix k1 = generator_for(t1);
      const CMatrix k2 = generator_for(t2);
      diff.add(std::abs(kks_eval(rho, k1, k2) - kks_closed_form(t1, t2)));
      generator.add(max_abs(-kI * commutator(k1, rho) - t1.matrix()));
      generator.add(max_abs(-kI * commutator(k2, rho) - t2.matrix()));
      ++r.instances;
    });
  }
  measure(r, "max |trace form - closed form|", diff.value, 1e-12);
  measure(r, "max |-i[K, rho] - X|", generator.value, 1e-12);
  return r;
}

// --- 4: Bloch circles against brute-force lifting ----------------------------

CheckResult check_bloch(const CheckOptions&) {
  CheckResult r;
  constexpr long kOracleSteps = 1'000'000;
  Worst lib_vs_oracle = max_of();
  Worst oracle_vs_exact = max_of();
  Worst mixed = max_of();
  for (double theta : {pi / 6, pi / 3, pi / 2, 2 * pi / 3}) {
    guarded(r, fmt::format("theta={:.6f}", theta), [&] {
      const double exact = -pi * (1.0 - std::cos(theta));
      const double oracle = oracles::bloch_lift_phase(theta, 0, kOracleSteps);
      const PhaseReport pure = geometric_phases(bloch_circle(theta, SpectralWeights{1.0}));
      lib_vs_oracle.add(std::abs(pure.per_level(0) - oracle));
      oracle_vs_exact.add(std::abs(oracle - exact));
      const PhaseReport m = geometric_phases(bloch_circle(theta, SpectralWeights{0.7, 0.3}));
      mixed.add(std::abs(m.weighted + pi * (1.0 - 0.4 * std::cos(theta))));
      r.instances += 2;
    });
  }
  measure(r, "max |library - oracle|", lib_vs_oracle.value, 1e-5);
  measure(r, "max |oracle + pi(1 - cos)|", oracle_vs_exact.value, 1e-4);
  measure(r, "max |mixed + pi(1 - 0.4 cos)|", mixed.value, 1e-4);
  return r;
}

// --- 5: u(n) commutators and trace pairings ----------------------------------

CheckResult check_lie_algebra(const CheckOptions&) {
  CheckResult r;
  Worst commutators = max_of();
  Worst traces = max_of();
  Worst definitions = max_of();
  for (int n = 2; n <= 5; ++n) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const CMatrix jjk = generator_j(n, j, k);
        const CMatrix qjk = generator_q(n, j, k);
        definitions.add(max_abs(jjk - oracles::j_generator(n, j, k)));
        definitions.add(max_abs(qjk - oracles::q_generator(n, j, k)));
        for (int l = 0; l < n; ++l) {
          for (int m = 0; m < n; ++m) {
            const CMatrix jlm = generator_j(n, l, m);
            const CMatrix qlm = generator_q(n, l, m);
            commutators.add(
                max_abs(-kI * commutator(jjk, jlm) - oracles::commutator_jj(n, j, k, l, m)));
            commutators.add(
                max_abs(-kI * commutator(jjk, qlm) - oracles::commutator_jq(n, j, k, l, m)));
            commutators.add(
                max_abs(-kI * commutator(qjk, qlm) - oracles::commutator_qq(n, j, k, l, m)));
            const double djl = j == l ? 1.0 : 0.0;
            const double dkm = k == m ? 1.0 : 0.0;
            const double djm = j == m ? 1.0 : 0.0;
            const double dkl = k == l ? 1.0 : 0.0;
            traces.add(std::abs((jjk * jlm).trace() - (djl * dkm - djm * dkl)));
            traces.add(std::abs((jjk * qlm).trace()));
            traces.add(std::abs((qjk * qlm).trace() - (djl * dkm + djm * dkl)));
            r.instances += 3;
          }
        }
      }
    }
    const HermitianBasis basis = un_basis(n);
    const auto size = static_cast<int>(basis.generators.size());
    if (size != n * n) r.failures.push_back(fmt::format("n={}: {} generators", n, size));
    for (int a = 0; a < size; ++a) {
      for (int b = 0; b < size; ++b) {
        const double expected = a == b ? 1.0 : 0.0;
        traces.add(std::abs((basis.generators[a] * basis.generators[b]).trace() - expected));
      }
    }
    for (int j = 0; j < n; ++j) {
      CMatrix unit = CMatrix::Zero(n, n);
      unit(j, j) = 1.0;
      definitions.add(max_abs(basis.generators[j] - unit));
    }
  }
  measure(r, "max commutator error", commutators.value, 1e-14);
  measure(r, "max trace pairing error", traces.value, 1e-14);
  measure(r, "max generator definition error", definitions.value, 1e-14);
  return r;
}

// --- 6: chart encode/decode -----------------------------------------------------

bool rejects(const std::function<void()>& f) {
  try {
    f();
  } catch (const OutsideChartError&) {
    return true;
  }
  return false;
}

CheckResult check_chart(const CheckOptions& o) {
  CheckResult r;
  const int per = o.reduced ? 25 : 100;
  Worst frames = max_of();
  Worst coords = max_of();
  int accepted_outside = 0;
  int attempted_outside = 0;
  SplitMix64 rng(o.seed + 6);
  for (int n : {3, 4}) {
    for (int i = 0; i < per; ++i) {
      guarded(r, fmt::format("n={} #{}", n, i), [&] {
        const Frame ref(random_frame_matrix(rng, n, 2));
        const CMatrix u = expm_skew(random_hermitian(rng, n), 0.5 / std::sqrt(2.0 * n));
        RVector alpha(2);
        alpha << 2 * pi * rng.uniform(), 2 * pi * rng.uniform();
        const Frame psi = Frame(u * ref.matrix()).with_phases(alpha);
        const Frame back = chart_decode(ref, chart_encode(ref, psi));
        frames.add(max_abs(back.matrix() - psi.matrix()));

        ChartCoords c;
        c.z = 0.7 * std::polar(std::sqrt(rng.uniform()), 2 * pi * rng.uniform());
        const CMatrix g = random_complex(rng, n, 2);
        const CMatrix chi = g - ref.matrix() * (ref.matrix().adjoint() * g);
        c.chi0 = 0.3 * chi / std::max(1.0, max_abs(chi) * std::sqrt(2.0 * n));
        c.alpha.resize(2);
        c.alpha << 2 * pi * rng.uniform(), 2 * pi * rng.uniform();
        const ChartCoords again = chart_encode(ref, chart_decode(ref, c));
        coords.add(std::abs(again.z - c.z));
        coords.add(max_abs(again.chi0 - c.chi0));
        for (int a = 0; a < 2; ++a) coords.add(std::abs(wrapped(again.alpha(a) - c.alpha(a))));
        r.instances += 2;
      });
    }
    // Out of the domain: singular overlap with the reference, swapped columns, |z| >= 1,
    // chi0 not orthogonal to the reference.
    const Frame ref(random_frame_matrix(rng, n, 2));
    const CMatrix g = random_complex(rng, n, 1);
    const CVector normal = (g - ref.matrix() * (ref.matrix().adjoint() * g)).col(0).normalized();
    CMatrix singular(n, 2);  // Psi0^dagger Psi has rank one
    singular << normal, ref.matrix().col(0);
    CMatrix swapped(n, 2);
    swapped << ref.matrix().col(1), ref.matrix().col(0);
    ChartCoords unit_z{std::polar(1.0, 0.3), CMatrix::Zero(n, 2), RVector::Zero(2)};
    ChartCoords leaning{0.1, ref.matrix() * 0.1, RVector::Zero(2)};
    const std::function<void()> cases[] = {
        [&] { chart_encode(ref, Frame(singular)); },
        [&] { chart_encode(ref, Frame(swapped)); },
        [&] { chart_decode(ref, unit_z); },
        [&] { chart_decode(ref, leaning); },
    };
    for (const auto& f : cases) {
      ++attempted_outside;
      if (!rejects(f)) ++accepted_outside;
    }
  }
  measure(r, "max |decode(encode(psi)) - psi|", frames.value, 1e-10);
  measure(r, "max |encode(decode(c)) - c|", coords.value, 1e-10);
  measure(r, fmt::format("out-of-domain inputs accepted (of {})", attempted_outside),
          accepted_outside, 1);
  return r;
}

// --- 7: closed-form dA against central differences ----------------------------

CheckResult check_dA(const CheckOptions& o) {
  CheckResult r;
  const std::pair<int, int> configs[] = {{3, 1}, {3, 2}, {4, 1}, {4, 2}, {4, 3}};
  const int count = o.reduced ? 10 : 50;
  constexpr double kDelta = 0.02;
  Worst ratio = min_of(1e300);
  Worst error = max_of();
  Worst chart = max_of();
  SplitMix64 rng(o.seed + 7);
  for (int i = 0; i < count; ++i) {
    const auto [n, k] = configs[i % 5];
    guarded(r, fmt::format("n={} k={} #{}", n, k, i), [&] {
      const Frame frame(random_frame_matrix(rng, n, k));
      const FrameTangent t1 = fixtures::random_tangent(rng, frame);
      const FrameTangent t2 = fixtures::random_tangent(rng, frame);
      const RVector exact = dA_closed_form(t1, t2);
      const double coarse =
          (oracles::fd_curvature(frame, t1, t2, kDelta) - exact).cwiseAbs().maxCoeff();
      const double fine =
          (oracles::fd_curvature(frame, t1, t2, 0.5 * kDelta) - exact).cwiseAbs().maxCoeff();
      // Below 1e-11 the difference quotient is exact to rounding; no rate to observe.
      if (coarse > 1e-11) ratio.add(coarse / fine);
      error.add(fine);
      if (k == 2) {
        const RVector via_chart = dA_chart_form(chart_differential(frame, t1),
                                                chart_differential(frame, t2));
        chart.add((via_chart - exact).cwiseAbs().maxCoeff());
      }
      ++r.instances;
    });
  }
  measure(r, "min error ratio under halving", ratio.value, 3.5, true);
  measure(r, "max FD error at eps/2", error.value, 1e-3);
  measure(r, "max |chart form - closed form|", chart.value, 1e-12);
  return r;
}

// --- 8: null phase curves, Pancharatnam lifts, non-additivity, patches ----------

CheckResult check_npc(const CheckOptions& o) {
  CheckResult r;
  const int per = o.reduced ? 4 : 10;
  SplitMix64 rng(o.seed + 8);
  Worst gp = max_of();
  int not_npc = 0;
  Worst lift_arg = max_of();
  Worst lift_re = min_of(1e300);
  Worst lift_a = max_of();
  Worst lift_back = max_of();

  auto check_lift = [&](const DiscretizedPath& path, bool null_phase) {
    const DiscretizedPath lift = pancharatnam_lift(path);
    const CMatrix& ref = lift[0].frame->matrix();
    for (const auto& p : lift.samples()) {
      for (int a = 0; a < path.k(); ++a) {
        const cplx z = ref.col(a).dot(p.frame->matrix().col(a));
        lift_arg.add(std::abs(std::arg(z)));
        lift_re.add(z.real());
      }
      lift_back.add(max_abs(project(*p.frame, path.weights()) - p.rho));
    }
    if (null_phase) lift_a.add(line_integral_A(lift).cwiseAbs().maxCoeff());
  };

  std::vector<DiscretizedPath> curves;
  for (int i = 0; i < per; ++i) {
    const int n = 2 + i % 3;
    const double angle = 0.3 + 0.9 * rng.uniform();
    curves.push_back(fixtures::strip_frames(
        fixtures::real_rotation(SpectralWeights{1.0}, n, angle, o.seed + 80 + i, true).sample(200)));
  }
  for (int i = 0; i < per; ++i) {
    const int k = 2 + i % 2;
    const SpectralWeights w(random_weights(rng, k));
    const double angle = 0.3 + 0.9 * rng.uniform();
    curves.push_back(fixtures::strip_frames(
        fixtures::real_rotation(w, k + 2, angle, o.seed + 180 + i).sample(200)));
  }
  for (std::size_t i = 0; i < curves.size(); ++i) {
    guarded(r, fmt::format("null phase curve #{}", i), [&] {
      if (classify_curve(curves[i]).kind != CurveKind::kNPC) ++not_npc;
      gp.add(std::abs(gp_open_curve(curves[i])));
      check_lift(curves[i], true);
      ++r.instances;
    });
  }

  const int triangles = o.reduced ? 5 : 20;
  Worst noadd = max_of();
  for (int i = 0; i < triangles; ++i) {
    const int n = 3 + i % 2;
    guarded(r, fmt::format("triangle n={} #{}", n, i), [&] {
      const SpectralWeights w(random_weights(rng, 2));
      const auto sides = fixtures::random_triangle(w, n, 0.8, o.seed + 280 + i, 400);
      noadd.add(nonadditivity_check(sides[0], sides[1], sides[2]).residual);
      // Generic open curves: the Pancharatnam lift still lines up with its reference.
      check_lift(fixtures::strip_frames(sides[0]), false);
      ++r.instances;
    });
  }

  int implication = 0;
  int expectation = 0;
  const std::pair<int, int> configs[] = {{3, 1}, {3, 2}, {4, 2}};
  const int patch_seeds = o.reduced ? 1 : 3;
  for (const auto& [n, k] : configs) {
    for (int s = 0; s < patch_seeds; ++s) {
      const std::uint64_t seed = o.seed + 380 + 10 * n + k + 100 * s;
      guarded(r, fmt::format("patches n={} k={} seed={}", n, k, seed), [&] {
        SplitMix64 wr(seed);
        const SpectralWeights w = draw_weights(wr, k);
        struct Expect {
          ParametrizedSurface patch;
          int isotropic;  // -1: no expectation
          int npm;
        };
        const Expect fixtures_[] = {
            {fixtures::real_patch(w, n, 0.5, seed), 1, 1},
            {fixtures::generic_patch(w, n, 0.5, seed), 0, 0},
            {fixtures::ruled_patch(w, n, 1.0, seed), 1, 0},
            {fixtures::constant_patch(w, n, seed), 1, 1},
        };
        for (const auto& f : fixtures_) {
          const NpmReport rep = npm_check(f.patch, 6);
          if (rep.npm && !rep.isotropic) ++implication;
          if (rep.isotropic != (f.isotropic == 1) || rep.npm != (f.npm == 1)) ++expectation;
          ++r.instances;
        }
      });
    }
  }

  measure(r, "curves not classified NPC", not_npc, 1);
  measure(r, "max |GP| on null phase curves", gp.value, 1e-6);
  measure(r, "max |int A| on their lifts", lift_a.value, 1e-6);
  measure(r, "max |arg overlap with reference|", lift_arg.value, 1e-12);
  measure(r, "min Re overlap with reference", lift_re.value, 0.0, true);
  measure(r, "max |project(lift) - rho|", lift_back.value, 1e-10);
  measure(r, "max non-additivity residual", noadd.value, 1e-5);
  measure(r, "patches with npm and not isotropic", implication, 1);
  measure(r, "patches off their expected class", expectation, 1);
  return r;
}

// --- 9: path-ordered exponentials and the abelian holonomy --------------------

CheckResult check_holonomy(const CheckOptions& o) {
  CheckResult r;
  const int per = o.reduced ? 3 : 10;
  SplitMix64 rng(o.seed + 9);
  Worst unitarity = max_of();
  Worst composition = max_of();
  Worst ratio = min_of(1e300);
  Worst abelian = max_of();
  for (int i = 0; i < per; ++i) {
    const int n = 3 + i % 2;
    guarded(r, fmt::format("coefficient n={} #{}", n, i), [&] {
      const CMatrix h0 = random_hermitian(rng, n);
      const CMatrix h1 = random_hermitian(rng, n);
      const CMatrix h2 = random_hermitian(rng, n);
      const auto a = [&](double s) {
        return CMatrix(0.5 * (h0 + std::cos(2 * pi * s) * h1 + std::sin(2 * pi * s) * h2));
      };
      const CMatrix id = CMatrix::Identity(n, n);
      for (auto method : {OrderingMethod::kMidpoint, OrderingMethod::kProduct}) {
        const CMatrix u = path_ordered_exp(a, 0.0, 1.0, 1000, method);
        unitarity.add(max_abs(u.adjoint() * u - id));
      }
      const CMatrix whole = path_ordered_exp(a, 0.0, 1.0, 400);
      const CMatrix split = path_ordered_exp(a, 0.5, 1.0, 200) * path_ordered_exp(a, 0.0, 0.5, 200);
      composition.add(max_abs(whole - split));

      std::vector<CoefficientSample> samples;
      for (int j = 0; j <= 300; ++j) samples.push_back({j / 300.0, a(j / 300.0)});
      const std::vector<CoefficientSample> first(samples.begin(), samples.begin() + 151);
      const std::vector<CoefficientSample> second(samples.begin() + 150, samples.end());
      const CMatrix sampled = path_ordered_exp(samples);
      unitarity.add(max_abs(sampled.adjoint() * sampled - id));
      composition.add(max_abs(sampled - path_ordered_exp(second) * path_ordered_exp(first)));

      const CMatrix reference = path_ordered_exp(a, 0.0, 1.0, 1 << 16);
      const double coarse =
          max_abs(path_ordered_exp(a, 0.0, 1.0, 64, OrderingMethod::kProduct) - reference);
      const double fine =
          max_abs(path_ordered_exp(a, 0.0, 1.0, 128, OrderingMethod::kProduct) - reference);
      ratio.add(coarse / fine);
      ++r.instances;
    });
  }
  for (int i = 0; i < per; ++i) {
    guarded(r, fmt::format("loop #{}", i), [&] {
      const SpectralWeights w(random_weights(rng, 2));
      const OrbitLoop loop = random_orbit_loop(w, 3, 3, o.seed + 90 + i);
      const PhaseReport phases = geometric_phases(loop.curve());
      const DiscretizedPath spectral = fixtures::strip_frames(loop.sample(20000));
      const CMatrix hol = holonomy_of_loop(spectral);
      const DiscretizedPath carried = loop.sample(2000);
      const CMatrix twice = holonomy_of_loop(concatenate({carried, carried}, true));
      const CMatrix once = holonomy_of_loop(carried);
      composition.add(max_abs(twice - once * once));
      for (int a = 0; a < 2; ++a) {
        abelian.add(std::abs(wrapped(std::arg(hol(a, a)) - phases.per_level(a))));
      }
      unitarity.add(max_abs(hol.adjoint() * hol - CMatrix::Identity(2, 2)));
      ++r.instances;
    });
  }
  measure(r, "max |U^dagger U - 1|", unitarity.value, 1e-12);
  measure(r, "max composition error", composition.value, 1e-10);
  measure(r, "min first-order convergence ratio", ratio.value, 1.9, true);
  measure(r, "max |holonomy phase - transport phase|", abelian.value, 1e-5);
  return r;
}

// --- 10: invariances ---------------------------------------------------------

CheckResult check_invariance(const CheckOptions& o) {
  CheckResult r;
  const int per = o.reduced ? 3 : 10;
  const double phase_tol = PhaseOptions{}.phase_tol;
  SplitMix64 rng(o.seed + 10);
  Worst gauge = max_of();
  Worst reparam = max_of();
  Worst orientation = max_of();
  Worst concat = max_of();
  Worst fiber = max_of();
  Worst convention = max_of();
  Worst determinant = max_of();
  for (int i = 0; i < per; ++i) {
    const int n = 2 + i % 3;
    const int k = 1 + i % 2;
    const std::uint64_t seed = o.seed + 100 + i;
    guarded(r, fmt::format("loop n={} k={} seed={}", n, k, seed), [&] {
      const SpectralWeights w = draw_weights(rng, k);
      const OrbitLoop loop = random_orbit_loop(w, n, 3, seed);

      RVector alpha(k);
      for (int a = 0; a < k; ++a) alpha(a) = 2 * pi * rng.uniform();
      const DiscretizedPath spectral = fixtures::strip_frames(loop.sample(2000));
      const Frame start = spectral_frame(spectral[0].rho, k).frame;
      gauge.add((geometric_phases(spectral, start.with_phases(alpha)).per_level -
                 geometric_phases(spectral).per_level)
                    .cwiseAbs()
                    .maxCoeff());
      const DiscretizedPath carried = loop.sample(2000);
      const PhaseReport base = geometric_phases(carried);
      gauge.add((geometric_phases(carried, carried[0].frame->with_phases(alpha)).per_level -
                 base.per_level)
                    .cwiseAbs()
                    .maxCoeff());

      const Curve curve = loop.curve();
      const PhaseReport smooth = geometric_phases(curve);
      const PhaseReport cubed = geometric_phases(curve.reparametrized([](double s) {
        return s * s * s;
      }));
      reparam.add((cubed.per_level - smooth.per_level).cwiseAbs().maxCoeff());

      orientation.add(
          (geometric_phases(reversed(carried)).per_level + base.per_level).cwiseAbs().maxCoeff());

      const OrbitLoop other(w, loop.base(), random_orbit_loop(w, n, 2, seed + 7).modes());
      const DiscretizedPath second = other.sample(2000);
      const double joined = geometric_phases(concatenate({carried, second}, true)).weighted;
      concat.add(std::abs(joined - base.weighted - geometric_phases(second).weighted));

      const Frame frame = loop.base();
      fiber.add(max_abs(project(frame.with_phases(alpha), w) - project(frame, w)));
      convention.add(max_abs(spectral_frame(project(frame, w), k).frame.matrix() -
                             apply_phase_convention(frame.matrix())));
      r.instances += 6;
    });
  }
  for (int i = 0; i < per; ++i) {
    const std::uint64_t seed = o.seed + 200 + i;
    guarded(r, fmt::format("n=2 k=2 seed={}", seed), [&] {
      const SpectralWeights w(random_weights(rng, 2));
      const PhaseReport p = geometric_phases(random_orbit_loop(w, 2, 3, seed).curve());
      determinant.add(std::abs(p.per_level(0) + p.per_level(1)));
      ++r.instances;
    });
  }
  measure(r, "gauge: max phase change", gauge.value, 1e-12);
  measure(r, "reparametrization s^3: max phase change", reparam.value, phase_tol);
  measure(r, "orientation: max |phi(reversed) + phi|", orientation.value, phase_tol);
  measure(r, "concatenation: max weighted defect", concat.value, phase_tol);
  measure(r, "fiber phases: max change of rho", fiber.value, 1e-15);
  measure(r, "spectral frame of projection vs convention", convention.value, 1e-10);
  measure(r, "n=k=2: max |phi_1 + phi_2|", determinant.value, phase_tol);
  return r;
}

struct Entry {
  CheckInfo info;
  double budget;
  CheckResult (*run)(const CheckOptions&);
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> e = {
      {{1, "area", "weighted phase equals minus the enclosed KKS area"}, 30, check_area},
      {{2, "pullback", "sum of kappa-weighted curvatures is the pulled-back KKS form"}, 5,
       check_pullback},
      {{3, "kks-dual", "trace and coordinate forms of the KKS form agree"}, 5, check_kks_dual},
      {{4, "bloch", "Bloch-circle phases against brute-force lifting"}, 20, check_bloch},
      {{5, "lie-algebra", "u(n) commutators and trace pairings"}, 2, check_lie_algebra},
      {{6, "chart", "chart round trips and domain rejection"}, 2, check_chart},
      {{7, "dA", "curvature closed forms against finite differences"}, 5, check_dA},
      {{8, "npc", "null phase curves, Pancharatnam lifts, non-additivity, patches"}, 30,
       check_npc},
      {{9, "holonomy", "path-ordered exponentials and abelian holonomy"}, 10, check_holonomy},
      {{10, "invariance", "gauge, reparametrization, orientation, fiber invariances"}, 20,
       check_invariance},
  };
  return e;
}

}  // namespace

bool CheckResult::passed() const {
  if (!failures.empty() || measurements.empty()) return false;
  return std::all_of(measurements.begin(), measurements.end(),
                     [](const Measurement& m) { return m.passed(); });
}

const std::vector<CheckInfo>& check_catalog() {
  static const std::vector<CheckInfo> catalog = [] {
    std::vector<CheckInfo> c;
    for (const auto& e : entries()) c.push_back(e.info);
    return c;
  }();
  return catalog;
}

CheckResult run_check(int id, const CheckOptions& options) {
  for (const auto& e : entries()) {
    if (e.info.id != id) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r = e.run(options);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.id = id;
    r.name = e.info.name;
    r.budget = e.budget;
    if (!options.reduced) measure(r, "runtime s", r.seconds, e.budget);
    return r;
  }
  throw ContractError(fmt::format("run_check: no check with id {}", id));
}

std::vector<CheckResult> run_checks(const std::string& filter, const CheckOptions& options) {
  std::vector<CheckResult> out;
  for (const auto& e : entries()) {
    if (!filter.empty() && std::string(e.info.name).find(filter) == std::string::npos) continue;
    out.push_back(run_check(e.info.id, options));
  }
  return out;
}

std::string format_result(const CheckResult& r) {
  std::string line = fmt::format("[{}] {:>2} {:<11} {} instances, {:.2f} s", r.passed() ? "PASS" : "FAIL",
                                 r.id, r.name, r.instances, r.seconds);
  for (const auto& m : r.measurements) {
    line += fmt::format(" | {}{} {:.3g} {} {:.3g}", m.passed() ? "" : "!", m.label, m.value,
                        m.at_least ? ">=" : "<", m.bound);
  }
  if (!r.failures.empty()) {
    line += fmt::format(" | {} instance error(s), first: {}", r.failures.size(), r.failures.front());
  }
  return line;
}

}  // namespace holonomy::validation
