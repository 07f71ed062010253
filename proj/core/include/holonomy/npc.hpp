#pragma once

#include <optional>
#include <string>
#include <vector>

#include "holonomy/algebra.hpp"
#include "holonomy/states.hpp"
#include "holonomy/surface.hpp"

namespace holonomy {

// Tr(P1 P2 P3) for rank-one projectors (checked to 1e-10).
cplx bargmann3(const CMatrix& p1, const CMatrix& p2, const CMatrix& p3);

struct BargmannTriple {
  cplx value;
  int level = 0;  // 1-based
  double s[3] = {0.0, 0.0, 0.0};
};

enum class CurveKind { kInvalid, kClassI, kClassII, kNPC };

const char* to_string(CurveKind kind);

struct Witness {
  std::string kind;  // "pair" or "triple"
  int level = 0;     // 1-based
  std::vector<double> s;
  cplx value;
};

struct CurveClass {
  CurveKind kind = CurveKind::kInvalid;
  std::optional<Witness> witness;
};

struct NpcOptions {
  double overlap_tol = 1e-6;    // |(psi_a(s), psi_a(s'))| must exceed this
  double re_tol = 1e-10;        // Re Tr(...) > re_tol
  double im_rel_tol = 1e-8;     // |Im| / max(Re, re_tol) < im_rel_tol
  int max_points = 30;          // triples and pairs use an evenly strided subsample
};

// True if z counts as real positive under the options' thresholds.
bool real_positive(cplx z, const NpcOptions& options = {});

// Evenly spaced indices into [0, count), first and last included, at most max_points.
std::vector<std::size_t> stride_subsample(std::size_t count, int max_points);

// Rank-one projectors psi_a psi_a^dagger of every level at every sample.
std::vector<std::vector<CMatrix>> level_projectors(const DiscretizedPath& path);

// invalid (end points orthogonal on some level), class I, class II (no vanishing
// pair overlap) or NPC (every sampled triple real positive). The witness is the
// first failing pair or triple in (level, index) order.
CurveClass classify_curve(const DiscretizedPath& path, const NpcOptions& options = {});

// psi_a(s) = rho_a(s) psi_a^0 / sqrt(Tr(rho_a^0 rho_a(s))), where psi^0 =
// `reference` (default: spectral frame of the first sample). Throws
// LiftUndefinedError when some Tr(rho_a^0 rho_a(s)) < tol^2.
DiscretizedPath pancharatnam_lift(const DiscretizedPath& path,
                                  const std::optional<Frame>& reference = std::nullopt,
                                  double tol = 1e-6);

// Per-level sum of arg(psi_a(i), psi_a(i+1)) along a path carrying frames: the
// discrete integral of A^(a), accumulated rather than reduced mod 2 pi.
RVector line_integral_A(const DiscretizedPath& lifted);

// sum_a kappa_a [arg(psi_a(s1), psi_a(s2)) - int A^(a)] along the path's own
// frames, or along its Pancharatnam lift when it carries none.
double gp_open_curve(const DiscretizedPath& path, const NpcOptions& options = {});
// Per-level terms of the above.
RVector gp_open_levels(const DiscretizedPath& path, const NpcOptions& options = {});

struct ClosureResult {
  bool available = false;
  std::string reason;
  double value = 0.0;  // weighted phase of the path closed by the geodesic
  std::optional<DiscretizedPath> closed_loop;
};

// Closes the path with the per-level great-circle geodesic from its end back to
// its start. Only attempted when the geodesics stay orthonormal, i.e. all
// cross-level overlaps between the two end frames vanish (to 1e-10).
std::optional<DiscretizedPath> geodesic_closure(const DiscretizedPath& path, int steps = 64);
ClosureResult gp_via_npc_closure(const DiscretizedPath& path, int closure_steps = 64);

struct NonAdditivity {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

// lhs: phase of p1 + p2 + p3 as one loop; rhs: sum of open-curve phases minus
// sum_a kappa_a arg Tr(rho_a(s1) rho_a(s2) rho_a(s3)) at the three corners.
NonAdditivity nonadditivity_check(const DiscretizedPath& p1, const DiscretizedPath& p2,
                                  const DiscretizedPath& p3, const NpcOptions& options = {});

struct NpmReport {
  bool isotropic = false;
  bool npm = false;
  bool pancharatnam_exact = false;
  double max_omega = 0.0;
};

struct NpmOptions {
  NpcOptions npc;
  double omega_tol = 1e-7;
  double fd_step = 1e-5;
};

// Checks a patch sampled on a samples x samples grid (grid surfaces use their
// own nodes). Requires every level overlap with the first point to be positive.
NpmReport npm_check(const ParametrizedSurface& patch, int samples,
                    const NpmOptions& options = {});

}  // namespace holonomy
