#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "holonomy/algebra.hpp"
#include "holonomy/states.hpp"
#include "holonomy/surface.hpp"

namespace holonomy {

struct PhaseOptions {
  double phase_tol = 1e-6;
  int initial_steps = 2000;
  int max_steps = 1 << 21;
  double orbit_tol = kOrbitTol;
};

struct PhaseReport {
  RVector per_level;  // accumulated, not reduced mod 2 pi
  double weighted = 0.0;
  bool dynamical_free = true;
  int steps = 0;
};

// Consecutive frame columns with |overlap| below this are rejected.
inline constexpr double kMinStepOverlap = 0.1;

// Discrete horizontal lift: spectral frame at every sample, each column rotated
// so that its overlap with the previous lifted column is real positive.
// `initial` (default: spectral frame of the first sample) must project onto it.
DiscretizedPath horizontal_lift(const DiscretizedPath& path,
                                const std::optional<Frame>& initial = std::nullopt);

// Per-level phases of a closed path,
//   phi_a = arg(psi_a(0), psi_a(N)) - sum_i arg(psi_a(i), psi_a(i+1)),
// accumulated along the path's own frames when it carries them (a smooth lift
// of the loop), otherwise along spectral frames. The first step and the
// closure overlap are combined so the result does not depend on the phases
// of the initial frame; `initial` replaces the frame at the first sample.
PhaseReport geometric_phases(const DiscretizedPath& path,
                             const std::optional<Frame>& initial = std::nullopt,
                             double orbit_tol = kOrbitTol);

// Refines the sampling of a closed curve from options.initial_steps, doubling
// until every per-level phase changes by less than phase_tol.
PhaseReport geometric_phases(const Curve& curve, const PhaseOptions& options = {});

struct AreaCheck {
  double weighted_phase = 0.0;
  double minus_area = 0.0;
  double residual = 0.0;
  SurfaceIntegral area;
  int steps = 0;
};

// |weighted phase + integral of Omega| for a surface whose loop edge traces the path.
AreaCheck verify_area_identity(const DiscretizedPath& path, const ParametrizedSurface& surface,
                               const QuadratureOptions& quad = {});
AreaCheck verify_area_identity(const Curve& curve, const ParametrizedSurface& surface,
                               const PhaseOptions& phase = {}, const QuadratureOptions& quad = {});

enum class OrderingMethod { kProduct, kMidpoint };

struct CoefficientSample {
  double s = 0.0;
  CMatrix a;  // Hermitian
};

// P exp(-i int A ds) as an ordered product of step exponentials, later
// parameters to the left. kProduct uses A at the left end of each step,
// kMidpoint the average of the two ends.
CMatrix path_ordered_exp(const std::vector<CoefficientSample>& samples,
                         OrderingMethod method = OrderingMethod::kMidpoint);
// Callable coefficient on [s0, s1] with `steps` equal steps; kMidpoint samples
// A at step midpoints.
CMatrix path_ordered_exp(const std::function<CMatrix(double)>& a, double s0, double s1, int steps,
                         OrderingMethod method = OrderingMethod::kMidpoint);

// Discrete U(1)^k connection along a closed path: step coefficients
// diag(arg(psi_a(i), psi_a(i+1))) / ds and the fiber closure diag(e^{i arg(psi_a(0), psi_a(N))}).
struct LoopConnection {
  std::vector<CoefficientSample> samples;
  CMatrix closure;
};

LoopConnection abelian_connection(const DiscretizedPath& path);

using ConnectionSampler = std::function<LoopConnection(const DiscretizedPath&)>;

// closure * P exp(-i int A); for the abelian connection a diagonal phase matrix.
CMatrix holonomy_of_loop(const DiscretizedPath& path,
                         const ConnectionSampler& sampler = abelian_connection);

// rho(s) = U(s) rho0 U(s)^dagger, U(s) = exp(-i s H), s in [0, T], carrying
// frames U(s) Psi0. Requires |[U(T), rho0]| <= 1e-10.
DiscretizedPath hamiltonian_loop(const CMatrix& h, const CMatrix& rho0,
                                 const SpectralWeights& weights, double period, int steps);

// Circle at polar angle theta on the Bloch sphere (n = 2), traversed with
// increasing azimuth. k = 1 follows psi_1 = (cos theta/2, e^{i phi} sin theta/2);
// k = 2 adds the antipodal psi_2 = (-sin theta/2, e^{i phi} cos theta/2).
Curve bloch_circle(double theta, const SpectralWeights& weights);
// Cap rho(u, v) = circle at polar angle v theta, azimuth 2 pi u; loop on v = 1.
ParametrizedSurface bloch_cap(double theta, const SpectralWeights& weights);

}  // namespace holonomy
