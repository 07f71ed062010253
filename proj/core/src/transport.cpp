#include "holonomy/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "holonomy/errors.hpp"

namespace holonomy {

namespace {

constexpr double kMatchTol = 1e-10;
constexpr double kCyclicTol = 1e-10;

void check_fiber(const Frame& frame, const CMatrix& rho, const SpectralWeights& w,
                 const char* what) {
  if (frame.n() != rho.rows() || frame.k() != w.k()) {
    throw ContractError(std::string(what) + ": initial frame has the wrong shape");
  }
  if (max_abs(project(frame, w) - rho) > kMatchTol) {
    throw ContractError(std::string(what) + ": initial frame does not project onto the first sample");
  }
}

CMatrix spectral_columns(const CMatrix& rho, const SpectralWeights& w, double orbit_tol) {
  SpectralDecomposition d = spectral_frame(rho, w.k());
  const double off = (d.weights.values() - w.values()).cwiseAbs().maxCoeff();
  if (off > orbit_tol) {
    std::ostringstream os;
    os << "sample spectrum differs from the path weights by " << off;
    throw NotOnOrbitError(os.str());
  }
  return d.frame.matrix();
}

// Eigensolvers may permute columns near degeneracy; require that each column
// overlaps most with its own successor.
void check_pairing(const CMatrix& prev, const CMatrix& next, double s) {
  const CMatrix ov = (prev.adjoint() * next).cwiseAbs().cast<cplx>();
  for (Eigen::Index a = 0; a < ov.rows(); ++a) {
    Eigen::Index best = 0;
    ov.row(a).real().maxCoeff(&best);
    if (best != a) {
      throw StepTooLargeError("lift: spectral frame columns swapped between samples",
                              s, static_cast<int>(a) + 1);
    }
  }
}

// Streams the frames of a closed loop and accumulates
//   phi_a = -[sum_{i>=1} arg(psi_i, psi_{i+1}) + arg((psi_N, psi_0)(psi_0, psi_1))].
class PhaseAccumulator {
 public:
  PhaseAccumulator(int k, bool spectral) : sum_(RVector::Zero(k)), spectral_(spectral) {}

  void push(const CMatrix& psi, double s) {
    if (count_ > 0 && spectral_) check_pairing(prev_, psi, s);
    if (count_ == 0) {
      first_ = psi;
    } else if (count_ == 1) {
      second_ = psi;
      check_overlaps(first_, psi, s);
    } else {
      const CVector ov = check_overlaps(prev_, psi, s);
      for (Eigen::Index a = 0; a < ov.size(); ++a) sum_(a) += std::arg(ov(a));
    }
    prev_ = psi;
    ++count_;
  }

  RVector finish() const {
    const auto k = sum_.size();
    RVector phi = RVector::Zero(k);
    if (count_ < 2) return phi;
    for (Eigen::Index a = 0; a < k; ++a) {
      const cplx closure = prev_.col(a).dot(first_.col(a)) * first_.col(a).dot(second_.col(a));
      phi(a) = -(sum_(a) + std::arg(closure));
    }
    return phi;
  }

  int steps() const { return std::max(0, count_ - 1); }

 private:
  static CVector check_overlaps(const CMatrix& a, const CMatrix& b, double s) {
    CVector ov(a.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      ov(j) = a.col(j).dot(b.col(j));
      if (std::abs(ov(j)) < kMinStepOverlap) {
        std::ostringstream os;
        os << "lift: consecutive overlap " << std::abs(ov(j)) << " below " << kMinStepOverlap
           << " at s = " << s << ", level " << j + 1 << "; refine the path";
        throw StepTooLargeError(os.str(), s, static_cast<int>(j) + 1);
      }
    }
    return ov;
  }

  RVector sum_;
  bool spectral_;
  int count_ = 0;
  CMatrix first_, second_, prev_;
};

PhaseReport make_report(const RVector& phi, const SpectralWeights& w, int steps) {
  PhaseReport r;
  r.per_level = phi;
  r.weighted = w.values().dot(phi);
  r.dynamical_free = true;
  r.steps = steps;
  return r;
}

std::vector<CMatrix> path_frames(const DiscretizedPath& path, double orbit_tol) {
  std::vector<CMatrix> frames;
  frames.reserve(path.size());
  const bool carried = path.has_frames();
  for (std::size_t i = 0; i < path.size(); ++i) {
    frames.push_back(carried ? path[i].frame->matrix()
                             : spectral_columns(path[i].rho, path.weights(), orbit_tol));
    if (!carried && i > 0) check_pairing(frames[i - 1], frames[i], path[i].s);
  }
  return frames;
}

void check_boundary(const CMatrix& expected, const CMatrix& got, double t) {
  if (max_abs(expected - got) > 1e-9) {
    std::ostringstream os;
    os << "verify_area_identity: surface boundary differs from the loop at t = " << t;
    throw ContractError(os.str());
  }
}

}  // namespace

DiscretizedPath horizontal_lift(const DiscretizedPath& path, const std::optional<Frame>& initial) {
  const auto& w = path.weights();
  std::vector<PathSample> out;
  out.reserve(path.size());
  CMatrix prev;
  for (std::size_t i = 0; i < path.size(); ++i) {
    CMatrix psi = spectral_columns(path[i].rho, w, kOrbitTol);
    if (i == 0) {
      if (initial) {
        check_fiber(*initial, path[0].rho, w, "horizontal_lift");
        psi = initial->matrix();
      }
    } else {
      check_pairing(prev, psi, path[i].s);
      for (int a = 0; a < w.k(); ++a) {
        const cplx ov = prev.col(a).dot(psi.col(a));
        const double m = std::abs(ov);
        if (m < kMinStepOverlap) {
          std::ostringstream os;
          os << "horizontal_lift: overlap " << m << " at s = " << path[i].s << ", level " << a + 1;
          throw StepTooLargeError(os.str(), path[i].s, a + 1);
        }
        psi.col(a) *= std::conj(ov) / m;
      }
    }
    PathSample p;
    p.s = path[i].s;
    p.rho = path[i].rho;
    p.frame = Frame(psi);
    prev = std::move(psi);
    out.push_back(std::move(p));
  }
  return DiscretizedPath(w, std::move(out), path.closed());
}

PhaseReport geometric_phases(const DiscretizedPath& path, const std::optional<Frame>& initial,
                             double orbit_tol) {
  if (!path.closed()) throw ContractError("geometric_phases: path is not closed");
  const auto frames = path_frames(path, orbit_tol);
  PhaseAccumulator acc(path.k(), false);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (i == 0 && initial) {
      check_fiber(*initial, path[0].rho, path.weights(), "geometric_phases");
      acc.push(initial->matrix(), path[0].s);
    } else {
      acc.push(frames[i], path[i].s);
    }
  }
  return make_report(acc.finish(), path.weights(), acc.steps());
}

PhaseReport geometric_phases(const Curve& curve, const PhaseOptions& options) {
  if (!curve.closed) throw ContractError("geometric_phases: curve is not closed");
  if (options.initial_steps < 1) throw ContractError("geometric_phases: initial_steps < 1");
  const bool carried = static_cast<bool>(curve.frame);
  auto run = [&](int steps) {
    PhaseAccumulator acc(curve.weights.k(), !carried);
    const double h = (curve.s_end - curve.s_begin) / steps;
    CMatrix first;
    for (int i = 0; i <= steps; ++i) {
      const double s = i == steps ? curve.s_end : curve.s_begin + i * h;
      if (carried) {
        acc.push(curve.frame(s), s);
      } else if (i == steps) {
        acc.push(first, s);  // closed: the loop returns to its first density
      } else {
        CMatrix psi = spectral_columns(curve.rho_at(s), curve.weights, options.orbit_tol);
        if (i == 0) first = psi;
        acc.push(psi, s);
      }
    }
    return make_report(acc.finish(), curve.weights, steps);
  };

  int steps = options.initial_steps;
  std::optional<PhaseReport> prev;
  for (;;) {
    std::optional<PhaseReport> cur;
    try {
      cur = run(steps);
    } catch (const StepTooLargeError&) {
      if (steps * 2 > options.max_steps) throw;
    }
    if (cur && prev) {
      const double change = (cur->per_level - prev->per_level).cwiseAbs().maxCoeff();
      if (change < options.phase_tol) return *cur;
    }
    if (steps * 2 > options.max_steps) {
      throw ConvergenceError("geometric_phases: no convergence within max_steps",
                             prev ? prev->weighted : 0.0, cur ? cur->weighted : 0.0);
    }
    prev = cur;
    steps *= 2;
  }
}

AreaCheck verify_area_identity(const DiscretizedPath& path, const ParametrizedSurface& surface,
                               const QuadratureOptions& quad) {
  if (surface.n() != path.n() || surface.k() != path.k()) {
    throw ContractError("verify_area_identity: surface and path shapes differ");
  }
  const double s0 = path.samples().front().s;
  const double span = path.samples().back().s - s0;
  if (surface.is_grid()) {
    const int edge_nodes = surface.loop_edge() == LoopEdge::kTop ? surface.nu() : surface.nv();
    if (static_cast<int>(path.size()) != edge_nodes) {
      throw ContractError("verify_area_identity: path must sample the grid's loop edge nodes");
    }
    for (int i = 0; i < edge_nodes; ++i) {
      const double t = static_cast<double>(i) / (edge_nodes - 1);
      check_boundary(surface.boundary_at(t), path[static_cast<std::size_t>(i)].rho, t);
    }
  } else {
    const std::size_t stride = std::max<std::size_t>(1, path.size() / 256);
    for (std::size_t i = 0; i < path.size(); i += stride) {
      const double t = span > 0.0 ? (path[i].s - s0) / span : 0.0;
      check_boundary(surface.boundary_at(t), path[i].rho, t);
    }
  }
  AreaCheck r;
  const PhaseReport phases = geometric_phases(path);
  r.weighted_phase = phases.weighted;
  r.steps = phases.steps;
  r.area = surface_integral(surface, quad);
  r.minus_area = -r.area.value;
  r.residual = std::abs(r.weighted_phase + r.area.value);
  return r;
}

AreaCheck verify_area_identity(const Curve& curve, const ParametrizedSurface& surface,
                               const PhaseOptions& phase, const QuadratureOptions& quad) {
  if (surface.n() != curve.n || surface.k() != curve.weights.k()) {
    throw ContractError("verify_area_identity: surface and curve shapes differ");
  }
  // Grids are compared at their own edge nodes.
  const int checks = !surface.is_grid()                    ? 256
                     : surface.loop_edge() == LoopEdge::kTop ? surface.nu() - 1
                                                             : surface.nv() - 1;
  for (int i = 0; i <= checks; ++i) {
    const double t = static_cast<double>(i) / checks;
    check_boundary(surface.boundary_at(t),
                   curve.rho_at(curve.s_begin + t * (curve.s_end - curve.s_begin)), t);
  }
  AreaCheck r;
  const PhaseReport phases = geometric_phases(curve, phase);
  r.weighted_phase = phases.weighted;
  r.steps = phases.steps;
  r.area = surface_integral(surface, quad);
  r.minus_area = -r.area.value;
  r.residual = std::abs(r.weighted_phase + r.area.value);
  return r;
}

CMatrix path_ordered_exp(const std::vector<CoefficientSample>& samples, OrderingMethod method) {
  if (samples.empty()) throw ContractError("path_ordered_exp: no samples");
  const auto n = samples.front().a.rows();
  CMatrix u = CMatrix::Identity(n, n);
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const double ds = samples[i + 1].s - samples[i].s;
    if (!(ds > 0.0)) throw ContractError("path_ordered_exp: samples must be increasing in s");
    const CMatrix a = method == OrderingMethod::kProduct
                          ? samples[i].a
                          : CMatrix(0.5 * (samples[i].a + samples[i + 1].a));
    u = expm_skew(a, ds) * u;
  }
  return u;
}

CMatrix path_ordered_exp(const std::function<CMatrix(double)>& a, double s0, double s1, int steps,
                         OrderingMethod method) {
  if (steps < 1) throw ContractError("path_ordered_exp: steps must be >= 1");
  const double ds = (s1 - s0) / steps;
  const double offset = method == OrderingMethod::kMidpoint ? 0.5 : 0.0;
  CMatrix u;
  for (int i = 0; i < steps; ++i) {
    const CMatrix step = expm_skew(a(s0 + (i + offset) * ds), ds);
    u = i == 0 ? step : CMatrix(step * u);
  }
  return u;
}

LoopConnection abelian_connection(const DiscretizedPath& path) {
  if (!path.closed()) throw ContractError("abelian_connection: path is not closed");
  const auto frames = path_frames(path, kOrbitTol);
  const int k = path.k();
  LoopConnection c;
  c.samples.reserve(path.size());
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const double ds = path[i + 1].s - path[i].s;
    RVector d(k);
    for (int a = 0; a < k; ++a) {
      const cplx ov = frames[i].col(a).dot(frames[i + 1].col(a));
      if (std::abs(ov) < kMinStepOverlap) {
        throw StepTooLargeError("abelian_connection: consecutive overlap too small", path[i].s,
                                a + 1);
      }
      d(a) = std::arg(ov) / ds;
    }
    c.samples.push_back({path[i].s, d.cast<cplx>().asDiagonal()});
  }
  c.samples.push_back({path.samples().back().s, CMatrix::Zero(k, k)});
  CVector closure(k);
  for (int a = 0; a < k; ++a) {
    const cplx ov = frames.front().col(a).dot(frames.back().col(a));
    closure(a) = ov / std::abs(ov);
  }
  c.closure = closure.asDiagonal();
  return c;
}

CMatrix holonomy_of_loop(const DiscretizedPath& path, const ConnectionSampler& sampler) {
  const LoopConnection c = sampler(path);
  return c.closure * path_ordered_exp(c.samples, OrderingMethod::kProduct);
}

DiscretizedPath hamiltonian_loop(const CMatrix& h, const CMatrix& rho0,
                                 const SpectralWeights& weights, double period, int steps) {
  if (steps < 1) throw ContractError("hamiltonian_loop: steps must be >= 1");
  if (!(period > 0.0)) throw ContractError("hamiltonian_loop: period must be positive");
  const CMatrix psi0 = spectral_columns(rho0, weights, kOrbitTol);
  const CMatrix ut = expm_skew(h, period);
  const double comm = max_abs(ut * rho0 - rho0 * ut);
  if (comm > kCyclicTol) {
    std::ostringstream os;
    os << "hamiltonian_loop: evolution is not cyclic (|[U(T), rho0]| = " << comm << ")";
    throw ContractError(os.str());
  }
  std::vector<PathSample> samples;
  samples.reserve(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) {
    const double s = i == steps ? period : period * i / steps;
    PathSample p;
    p.s = s;
    p.frame = Frame(expm_skew(h, s) * psi0);
    p.rho = project(*p.frame, weights);
    samples.push_back(std::move(p));
  }
  return DiscretizedPath(weights, std::move(samples), true);
}

namespace {

CMatrix bloch_frame(double theta, double phi, int k) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const cplx e = std::polar(1.0, phi);
  CMatrix psi(2, k);
  psi(0, 0) = c;
  psi(1, 0) = e * s;
  if (k == 2) {
    psi(0, 1) = -s;
    psi(1, 1) = e * c;
  }
  return psi;
}

void require_bloch_weights(const SpectralWeights& w) {
  if (w.k() < 1 || w.k() > 2) throw ContractError("bloch: need k = 1 or k = 2");
}

}  // namespace

Curve bloch_circle(double theta, const SpectralWeights& weights) {
  require_bloch_weights(weights);
  Curve c;
  c.weights = weights;
  c.n = 2;
  c.closed = true;
  const int k = weights.k();
  c.frame = [theta, k](double s) { return bloch_frame(theta, 2.0 * std::numbers::pi * s, k); };
  return c;
}

ParametrizedSurface bloch_cap(double theta, const SpectralWeights& weights) {
  require_bloch_weights(weights);
  const RVector kappa = weights.values();
  const int k = weights.k();
  auto map = [theta, kappa, k](double u, double v) {
    const CMatrix psi = bloch_frame(v * theta, 2.0 * std::numbers::pi * u, k);
    return CMatrix(psi * kappa.cast<cplx>().asDiagonal() * psi.adjoint());
  };
  return ParametrizedSurface::from_map(weights, 2, std::move(map), LoopEdge::kTop);
}

}  // namespace holonomy
