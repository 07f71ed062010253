#include "holonomy/npc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "holonomy/errors.hpp"
#include "holonomy/transport.hpp"

namespace holonomy {

namespace {

constexpr double kProjectorTol = 1e-10;
constexpr double kJoinTol = 1e-10;

void check_projector(const CMatrix& p, const char* what) {
  if (p.rows() != p.cols()) throw ContractError(std::string(what) + ": not square");
  if (!is_hermitian(p, kProjectorTol) || max_abs(p * p - p) > kProjectorTol ||
      std::abs(p.trace() - 1.0) > kProjectorTol) {
    throw ContractError(std::string(what) + ": input is not a rank-one projector");
  }
}

// Frames along the path: its own if it carries them, else spectral frames.
std::vector<CMatrix> frames_of(const DiscretizedPath& path) {
  std::vector<CMatrix> out;
  out.reserve(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) {
    out.push_back(path[i].frame ? path[i].frame->matrix()
                                : spectral_frame(path[i].rho, path.k()).frame.matrix());
  }
  return out;
}

CMatrix column_projector(const CMatrix& psi, int a) {
  return psi.col(a) * psi.col(a).adjoint();
}

}  // namespace

cplx bargmann3(const CMatrix& p1, const CMatrix& p2, const CMatrix& p3) {
  check_projector(p1, "bargmann3");
  check_projector(p2, "bargmann3");
  check_projector(p3, "bargmann3");
  return (p1 * p2 * p3).trace();
}

const char* to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::kInvalid: return "invalid";
    case CurveKind::kClassI: return "classI";
    case CurveKind::kClassII: return "classII";
    case CurveKind::kNPC: return "NPC";
  }
  return "invalid";
}

bool real_positive(cplx z, const NpcOptions& o) {
  return z.real() > o.re_tol && std::abs(z.imag()) / std::max(z.real(), o.re_tol) < o.im_rel_tol;
}

std::vector<std::size_t> stride_subsample(std::size_t count, int max_points) {
  std::vector<std::size_t> idx;
  if (count == 0) return idx;
  const std::size_t m = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(2, max_points)));
  if (m == 1 || count == 1) return {0};
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t i = (j * (count - 1) + (m - 1) / 2) / (m - 1);
    if (idx.empty() || idx.back() != i) idx.push_back(i);
  }
  return idx;
}

std::vector<std::vector<CMatrix>> level_projectors(const DiscretizedPath& path) {
  const auto frames = frames_of(path);
  std::vector<std::vector<CMatrix>> out(static_cast<std::size_t>(path.k()));
  for (int a = 0; a < path.k(); ++a) {
    out[static_cast<std::size_t>(a)].reserve(frames.size());
    for (const auto& f : frames) out[static_cast<std::size_t>(a)].push_back(column_projector(f, a));
  }
  return out;
}

CurveClass classify_curve(const DiscretizedPath& path, const NpcOptions& options) {
  const auto frames = frames_of(path);
  const int k = path.k();
  const auto idx = stride_subsample(frames.size(), options.max_points);
  auto overlap = [&](std::size_t i, std::size_t j, int a) {
    return frames[i].col(a).dot(frames[j].col(a));
  };
  CurveClass result;
  // Class I: end points not orthogonal on any level.
  for (int a = 0; a < k; ++a) {
    const cplx ov = overlap(0, frames.size() - 1, a);
    if (std::abs(ov) <= options.overlap_tol) {
      result.kind = CurveKind::kInvalid;
      result.witness = Witness{"pair", a + 1, {path[0].s, path.samples().back().s}, ov};
      return result;
    }
  }
  // Class II: no sampled pair orthogonal.
  for (int a = 0; a < k; ++a) {
    for (std::size_t x = 0; x < idx.size(); ++x) {
      for (std::size_t y = x + 1; y < idx.size(); ++y) {
        const cplx ov = overlap(idx[x], idx[y], a);
        if (std::abs(ov) <= options.overlap_tol) {
          result.kind = CurveKind::kClassI;
          result.witness = Witness{"pair", a + 1, {path[idx[x]].s, path[idx[y]].s}, ov};
          return result;
        }
      }
    }
  }
  // NPC: every sampled triple real positive.
  for (int a = 0; a < k; ++a) {
    for (std::size_t x = 0; x < idx.size(); ++x) {
      for (std::size_t y = x + 1; y < idx.size(); ++y) {
        for (std::size_t z = y + 1; z < idx.size(); ++z) {
          // Tr(P_x P_y P_z) = (psi_x, psi_y)(psi_y, psi_z)(psi_z, psi_x).
          const cplx t = overlap(idx[x], idx[y], a) * overlap(idx[y], idx[z], a) *
                         overlap(idx[z], idx[x], a);
          if (!real_positive(t, options)) {
            result.kind = CurveKind::kClassII;
            result.witness =
                Witness{"triple", a + 1, {path[idx[x]].s, path[idx[y]].s, path[idx[z]].s}, t};
            return result;
          }
        }
      }
    }
  }
  result.kind = CurveKind::kNPC;
  return result;
}

DiscretizedPath pancharatnam_lift(const DiscretizedPath& path, const std::optional<Frame>& reference,
                                  double tol) {
  const auto& w = path.weights();
  const CMatrix ref = reference ? reference->matrix()
                                : spectral_frame(path[0].rho, path.k()).frame.matrix();
  if (reference) {
    if (reference->n() != path.n() || reference->k() != path.k() ||
        max_abs(project(*reference, w) - path[0].rho) > kJoinTol) {
      throw ContractError("pancharatnam_lift: reference does not lie over the first sample");
    }
  }
  std::vector<PathSample> out;
  out.reserve(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) {
    const CMatrix psi = path[i].frame ? path[i].frame->matrix()
                                      : spectral_frame(path[i].rho, path.k()).frame.matrix();
    CMatrix lifted(path.n(), path.k());
    for (int a = 0; a < path.k(); ++a) {
      // rho_a(s) psi0_a = psi_a (psi_a, psi0_a); Tr(rho0_a rho_a) = |(psi_a, psi0_a)|^2.
      const cplx ov = psi.col(a).dot(ref.col(a));
      if (std::norm(ov) < tol * tol) {
        std::ostringstream os;
        os << "pancharatnam_lift: level " << a + 1 << " is orthogonal to the reference at s = "
           << path[i].s;
        throw LiftUndefinedError(os.str(), path[i].s, a + 1);
      }
      lifted.col(a) = psi.col(a) * (ov / std::abs(ov));
    }
    PathSample p;
    p.s = path[i].s;
    p.rho = path[i].rho;
    p.frame = Frame(std::move(lifted));
    out.push_back(std::move(p));
  }
  return DiscretizedPath(w, std::move(out), path.closed());
}

RVector line_integral_A(const DiscretizedPath& lifted) {
  if (!lifted.has_frames()) throw ContractError("line_integral_A: path carries no frames");
  const int k = lifted.k();
  RVector total = RVector::Zero(k);
  for (std::size_t i = 0; i + 1 < lifted.size(); ++i) {
    for (int a = 0; a < k; ++a) {
      const cplx ov = lifted[i].frame->column(a).dot(lifted[i + 1].frame->column(a));
      if (std::abs(ov) < kMinStepOverlap) {
        throw StepTooLargeError("line_integral_A: consecutive overlap too small", lifted[i].s, a + 1);
      }
      total(a) += std::arg(ov);
    }
  }
  return total;
}

RVector gp_open_levels(const DiscretizedPath& path, const NpcOptions& options) {
  const int k = path.k();
  std::optional<DiscretizedPath> lift;
  if (!path.has_frames()) {
    try {
      lift = pancharatnam_lift(path, std::nullopt, options.overlap_tol);
    } catch (const LiftUndefinedError&) {
      // Fall back to spectral frames; any smooth lift gives the same phase.
      std::vector<PathSample> samples = path.samples();
      const auto frames = frames_of(path);
      for (std::size_t i = 0; i < samples.size(); ++i) samples[i].frame = Frame(frames[i]);
      lift = DiscretizedPath(path.weights(), std::move(samples), path.closed());
    }
  }
  const DiscretizedPath& p = lift ? *lift : path;
  const RVector integral = line_integral_A(p);
  RVector g(k);
  for (int a = 0; a < k; ++a) {
    const cplx ends = p[0].frame->column(a).dot(p.samples().back().frame->column(a));
    if (std::abs(ends) <= options.overlap_tol) {
      throw ContractError("gp_open_curve: end points are orthogonal on level " +
                          std::to_string(a + 1) + " (not class I)");
    }
    g(a) = std::arg(ends) - integral(a);
  }
  return g;
}

double gp_open_curve(const DiscretizedPath& path, const NpcOptions& options) {
  return path.weights().values().dot(gp_open_levels(path, options));
}

std::optional<DiscretizedPath> geodesic_closure(const DiscretizedPath& path, int steps) {
  if (steps < 1) throw ContractError("geodesic_closure: steps must be >= 1");
  const auto frames = frames_of(path);
  const CMatrix& end = frames.back();
  const CMatrix& start = frames.front();
  const int k = path.k();
  const CMatrix cross = end.adjoint() * start;
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      if (a != b && std::abs(cross(a, b)) > kJoinTol) return std::nullopt;
    }
    if (std::abs(cross(a, a)) <= 1e-6) return std::nullopt;
  }
  // Per-level great circle from end to a phase-matched copy of start.
  CMatrix target = start;
  RVector angle(k);
  for (int a = 0; a < k; ++a) {
    const cplx c = cross(a, a);
    target.col(a) *= std::conj(c) / std::abs(c);
    angle(a) = std::acos(std::min(1.0, std::abs(c)));
  }
  std::vector<PathSample> samples;
  const double s_last = path.samples().back().s;
  const double span = s_last - path[0].s;
  const double length = span > 0.0 ? span : 1.0;
  for (int i = 1; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    CMatrix psi(path.n(), k);
    for (int a = 0; a < k; ++a) {
      const double d = angle(a);
      if (d < 1e-12) {
        psi.col(a) = (1.0 - t) * end.col(a) + t * target.col(a);
        psi.col(a).normalize();
      } else {
        psi.col(a) = (std::sin((1.0 - t) * d) * end.col(a) + std::sin(t * d) * target.col(a)) /
                     std::sin(d);
      }
    }
    PathSample p;
    p.s = s_last + t * length;
    p.frame = Frame::orthonormalize(psi);
    p.rho = project(*p.frame, path.weights());
    samples.push_back(std::move(p));
  }
  // The last closure sample lies over the first density; reuse it for exact closure.
  samples.back().rho = path[0].rho;
  return DiscretizedPath(path.weights(), std::move(samples), false);
}

ClosureResult gp_via_npc_closure(const DiscretizedPath& path, int closure_steps) {
  ClosureResult r;
  const auto closure = geodesic_closure(path, closure_steps);
  if (!closure) {
    r.reason = "closure unavailable: end frames have nonvanishing cross-level overlaps";
    return r;
  }
  std::vector<PathSample> samples = path.samples();
  const auto frames = frames_of(path);
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i].frame = Frame(frames[i]);
  for (const auto& p : closure->samples()) samples.push_back(p);
  DiscretizedPath loop(path.weights(), std::move(samples), true);
  r.available = true;
  r.value = geometric_phases(loop).weighted;
  r.closed_loop = std::move(loop);
  return r;
}

NonAdditivity nonadditivity_check(const DiscretizedPath& p1, const DiscretizedPath& p2,
                                  const DiscretizedPath& p3, const NpcOptions& options) {
  const DiscretizedPath* parts[3] = {&p1, &p2, &p3};
  for (int i = 0; i < 3; ++i) {
    const auto& tail = parts[i]->samples().back().rho;
    const auto& head = parts[(i + 1) % 3]->samples().front().rho;
    if (max_abs(tail - head) > kJoinTol) {
      throw ContractError("nonadditivity_check: segment " + std::to_string(i + 1) +
                          " does not end where the next one starts");
    }
  }
  NonAdditivity r;
  const DiscretizedPath loop = concatenate({p1, p2, p3}, true);
  r.lhs = gp_open_curve(loop, options);
  double rhs = gp_open_curve(p1, options) + gp_open_curve(p2, options) + gp_open_curve(p3, options);
  const CMatrix f1 = frames_of(p1).front();
  const CMatrix f2 = frames_of(p2).front();
  const CMatrix f3 = frames_of(p3).front();
  for (int a = 0; a < p1.k(); ++a) {
    const cplx b = bargmann3(column_projector(f1, a), column_projector(f2, a),
                             column_projector(f3, a));
    rhs -= p1.weights()[a] * std::arg(b);
  }
  r.rhs = rhs;
  r.residual = std::abs(r.lhs - r.rhs);
  return r;
}

NpmReport npm_check(const ParametrizedSurface& patch, int samples, const NpmOptions& options) {
  const int k = patch.k();
  // Nodes of the patch.
  std::vector<CMatrix> rhos;
  int m_u = 0;
  int m_v = 0;
  if (patch.is_grid()) {
    rhos = patch.nodes();
    m_u = patch.nu();
    m_v = patch.nv();
  } else {
    if (samples < 1) throw ContractError("npm_check: samples must be >= 1");
    m_u = m_v = samples;
    for (int i = 0; i < samples; ++i) {
      for (int j = 0; j < samples; ++j) {
        const double u = samples == 1 ? 0.0 : static_cast<double>(i) / (samples - 1);
        const double v = samples == 1 ? 0.0 : static_cast<double>(j) / (samples - 1);
        rhos.push_back(patch.at(u, v));
      }
    }
  }
  std::vector<CMatrix> frames;
  frames.reserve(rhos.size());
  for (const auto& r : rhos) frames.push_back(spectral_frame(r, k).frame.matrix());

  const CMatrix& fid = frames.front();
  std::vector<CMatrix> lifted;
  lifted.reserve(frames.size());
  for (const auto& f : frames) {
    CMatrix l = f;
    for (int a = 0; a < k; ++a) {
      const cplx ov = f.col(a).dot(fid.col(a));
      if (std::abs(ov) <= options.npc.overlap_tol) {
        throw ContractError("npm_check: a level is orthogonal to the fiducial point");
      }
      l.col(a) *= ov / std::abs(ov);
    }
    lifted.push_back(std::move(l));
  }

  NpmReport report;
  // Isotropy: pullback of Omega at every cell.
  double worst = 0.0;
  for (int i = 0; i + 1 < m_u; ++i) {
    for (int j = 0; j + 1 < m_v; ++j) {
      double w = 0.0;
      if (patch.is_grid()) {
        w = grid_cell_omega(patch, i, j);
      } else {
        const double h = 1.0 / (samples - 1);
        w = omega_density(patch, (i + 0.5) * h, (j + 0.5) * h, options.fd_step);
      }
      worst = std::max(worst, std::abs(w));
    }
  }
  report.max_omega = worst;
  report.isotropic = worst < options.omega_tol;

  const auto idx = stride_subsample(frames.size(), options.npc.max_points);
  bool npm = true;
  bool exact = true;
  for (int a = 0; a < k && (npm || exact); ++a) {
    for (std::size_t x = 0; x < idx.size(); ++x) {
      for (std::size_t y = x; y < idx.size(); ++y) {
        exact = exact && real_positive(lifted[idx[x]].col(a).dot(lifted[idx[y]].col(a)), options.npc);
        for (std::size_t z = y; z < idx.size() && npm; ++z) {
          const auto& f1 = frames[idx[x]];
          const auto& f2 = frames[idx[y]];
          const auto& f3 = frames[idx[z]];
          const cplx t = f1.col(a).dot(f2.col(a)) * f2.col(a).dot(f3.col(a)) *
                         f3.col(a).dot(f1.col(a));
          npm = real_positive(t, options.npc);
        }
      }
    }
  }
  report.npm = npm;
  report.pancharatnam_exact = exact;
  return report;
}

}  // namespace holonomy
