#pragma once

#include <functional>

#include "holonomy/algebra.hpp"
#include "holonomy/states.hpp"

namespace holonomy {

// Tangent vector Phi = i Psi h + chi at a frame Psi: h is k x k Hermitian, chi is
// n x k with Psi^dagger chi = 0.
struct FrameTangent {
  CMatrix h;
  CMatrix chi;

  // Decomposes a velocity Phi (with Psi^dagger Phi anti-Hermitian).
  static FrameTangent from_velocity(const Frame& frame, const CMatrix& phi);
  CMatrix velocity(const Frame& frame) const;
};

// Throws ContractError unless `t` is a valid tangent at `frame` (tolerance 1e-12).
void check_tangent(const Frame& frame, const FrameTangent& t);

// Values of the connection one-forms A^(a) = -i psi_a^dagger d psi_a on t: the
// diagonal of h.
RVector connection_eval(const Frame& frame, const FrameTangent& t);

// Drops the vertical (diagonal-h) part.
FrameTangent horizontal_project(const Frame& frame, const FrameTangent& t);

// Tangent to the orbit at rho = Psi kappa Psi^dagger, stored by the data that
// survive projection: the strictly upper triangle of h and the block chi.
struct OrbitTangent {
  CMatrix h_upper;
  CMatrix chi;
  Frame base;
  SpectralWeights weights;

  // Full Hermitian h with zero diagonal.
  CMatrix h_offdiag() const;
  // X = i Psi [h, kappa] Psi^dagger + Psi kappa chi^dagger + chi kappa Psi^dagger.
  CMatrix matrix() const;
  // Inverse of matrix(): lifts a Hermitian tangent X at rho(base) to (h, chi).
  static OrbitTangent from_matrix(const Frame& base, const SpectralWeights& weights,
                                  const CMatrix& x);
};

OrbitTangent tangent_to_orbit(const Frame& frame, const SpectralWeights& weights,
                              const FrameTangent& t);

// K with -i [K, rho] = X: K = i(chi Psi^dagger - Psi chi^dagger) - Psi offdiag(h) Psi^dagger.
CMatrix generator_for(const OrbitTangent& t);

// -i Tr(rho [K1, K2]); real for Hermitian arguments.
cplx kks_trace(const CMatrix& rho, const CMatrix& k1, const CMatrix& k2);
double kks_eval(const CMatrix& rho, const CMatrix& k1, const CMatrix& k2);

// Omega in (h, chi) coordinates:
//   -i sum_{a<b} (kappa_a - kappa_b)(h'_ab h''_ba - h'_ba h''_ab)
//   -i sum_a kappa_a [(chi'_a, chi''_a) - (chi''_a, chi'_a)].
// Both tangents must share base frame and weights.
double kks_closed_form(const OrbitTangent& t1, const OrbitTangent& t2);

// Lower-level form used by quadrature loops: tangents given as (h, chi) pairs in
// the same frame with the given weights.
double kks_coordinates(const RVector& kappa, const CMatrix& h1, const CMatrix& chi1,
                       const CMatrix& h2, const CMatrix& chi2);

// dA^(a)(t1, t2) = -i sum_b (h'_ab h''_ba - h''_ab h'_ba) - i (chi'_a^dagger chi''_a - chi''_a^dagger chi'_a),
// evaluated at the tangents' own base frame (the chart center).
RVector dA_closed_form(const FrameTangent& t1, const FrameTangent& t2);

// Local chart around a reference frame (k = 2):
//   Psi = [Psi0 U(z) (1 - chi0^dagger chi0)^{1/2} + chi0] diag(e^{i alpha_1}, e^{i alpha_2}),
// U(z) = [[c, z], [-z*, c]], c = sqrt(1 - |z|^2).
struct ChartCoords {
  cplx z{0.0, 0.0};
  CMatrix chi0;  // n x 2, orthogonal to the reference frame
  RVector alpha;  // two phases in [0, 2 pi)
};

CMatrix chart_unitary(cplx z);

// Throws OutsideChartError if psi is not in the chart domain; never re-centers.
ChartCoords chart_encode(const Frame& reference, const Frame& psi);
Frame chart_decode(const Frame& reference, const ChartCoords& coords);

// Differentials of the chart coordinates at the chart center along a tangent.
struct ChartDifferential {
  RVector dalpha;
  cplx dz;
  CMatrix dchi0;
};

ChartDifferential chart_differential(const Frame& reference, const FrameTangent& t);

// dA^(1), dA^(2) at the chart center from the coordinate two-forms
//   dA^(1) = -i dz ^ dz* - i dchi01^dagger ^ dchi01,
//   dA^(2) = +i dz ^ dz* - i dchi02^dagger ^ dchi02.
RVector dA_chart_form(const ChartDifferential& d1, const ChartDifferential& d2);

struct PullbackResult {
  double lhs = 0.0;  // sum_a kappa_a dA^(a)(t1, t2)
  double rhs = 0.0;  // Omega(pi_* t1, pi_* t2)
};

using KksFormula = std::function<double(const OrbitTangent&, const OrbitTangent&)>;

// lhs through the chart differentials (k = 2) or the closed dA form (other k);
// rhs through the pushed-forward orbit tangents and `omega` (kks_closed_form by default).
PullbackResult pullback_check(const Frame& frame, const SpectralWeights& weights,
                              const FrameTangent& t1, const FrameTangent& t2,
                              const KksFormula& omega = kks_closed_form);

}  // namespace holonomy
