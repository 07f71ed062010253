#include "holonomy/surface.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "holonomy/errors.hpp"
#include "holonomy/geometry.hpp"

namespace holonomy {

namespace {

// Leading k eigenvectors of a Hermitian matrix that may sit slightly off the
// orbit (cell averages of grid nodes); no rank or spectrum checks.
CMatrix top_eigenvectors(const CMatrix& rho, int k) {
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (rho + rho.adjoint()));
  const auto n = rho.rows();
  CMatrix psi(n, k);
  for (int a = 0; a < k; ++a) psi.col(a) = eig.eigenvectors().col(n - 1 - a);
  return psi;
}

double omega_from_jet(const SurfaceJet& jet, const SpectralWeights& weights, bool on_orbit) {
  const int k = weights.k();
  const Frame frame = on_orbit ? spectral_frame(jet.rho, k).frame
                               : Frame(top_eigenvectors(jet.rho, k));
  const OrbitTangent tu = OrbitTangent::from_matrix(frame, weights, jet.du);
  const OrbitTangent tv = OrbitTangent::from_matrix(frame, weights, jet.dv);
  return kks_coordinates(weights.values(), tu.h_offdiag(), tu.chi, tv.h_offdiag(), tv.chi);
}

double grid_integral(const ParametrizedSurface& s) {
  double total = 0.0;
  for (int i = 0; i + 1 < s.nu(); ++i) {
    for (int j = 0; j + 1 < s.nv(); ++j) total += grid_cell_omega(s, i, j);
  }
  return total / ((s.nu() - 1.0) * (s.nv() - 1.0));
}

}  // namespace

double edge_orientation(LoopEdge edge) { return edge == LoopEdge::kTop ? -1.0 : 1.0; }

ParametrizedSurface ParametrizedSurface::from_map(SpectralWeights weights, int n, Map map,
                                                  LoopEdge edge) {
  if (!map) throw ContractError("surface: empty map");
  if (weights.k() > n) throw ContractError("surface: more levels than the dimension");
  ParametrizedSurface s;
  s.weights_ = std::move(weights);
  s.n_ = n;
  s.map_ = std::move(map);
  s.edge_ = edge;
  return s;
}

ParametrizedSurface ParametrizedSurface::from_jet(SpectralWeights weights, int n, Map map,
                                                  Jet jet, LoopEdge edge) {
  ParametrizedSurface s = from_map(std::move(weights), n, std::move(map), edge);
  s.jet_ = std::move(jet);
  return s;
}

ParametrizedSurface ParametrizedSurface::from_grid(SpectralWeights weights, int nu, int nv,
                                                   std::vector<CMatrix> nodes, LoopEdge edge) {
  if (nu < 2 || nv < 2) throw ContractError("surface grid: need at least 2 x 2 nodes");
  if (nodes.size() != static_cast<std::size_t>(nu) * static_cast<std::size_t>(nv)) {
    throw ContractError("surface grid: expected nu * nv density matrices");
  }
  const auto n = nodes.front().rows();
  for (const auto& m : nodes) {
    if (m.rows() != n || m.cols() != n) throw ContractError("surface grid: inconsistent shapes");
  }
  if (weights.k() > n) throw ContractError("surface grid: more levels than the dimension");
  ParametrizedSurface s;
  s.weights_ = std::move(weights);
  s.n_ = static_cast<int>(n);
  s.edge_ = edge;
  s.nu_ = nu;
  s.nv_ = nv;
  s.nodes_ = std::move(nodes);
  return s;
}

CMatrix ParametrizedSurface::at(double u, double v) const {
  if (!map_) throw ContractError("surface: grid surfaces have no callable map");
  return map_(u, v);
}

SurfaceJet ParametrizedSurface::jet(double u, double v, double fd_step) const {
  if (jet_) return jet_(u, v);
  const double h = fd_step;
  return {at(u, v), (at(u + h, v) - at(u - h, v)) / (2.0 * h),
          (at(u, v + h) - at(u, v - h)) / (2.0 * h)};
}

CMatrix ParametrizedSurface::boundary_at(double t) const {
  if (is_grid()) {
    const int last = edge_ == LoopEdge::kTop ? nu_ - 1 : nv_ - 1;
    const double x = t * last;
    const int i = static_cast<int>(std::lround(x));
    if (std::abs(x - i) > 1e-12) throw ContractError("surface grid: boundary off the node set");
    return edge_ == LoopEdge::kTop ? node(i, nv_ - 1) : node(nu_ - 1, i);
  }
  return edge_ == LoopEdge::kTop ? at(t, 1.0) : at(1.0, t);
}

Curve ParametrizedSurface::boundary_curve() const {
  Curve c;
  c.weights = weights_;
  c.n = n_;
  c.closed = true;
  c.rho = [self = *this](double t) { return self.boundary_at(t); };
  return c;
}

ParametrizedSurface cone_surface(const OrbitLoop& loop) {
  const CMatrix rho0 = project(loop.base(), loop.weights());
  const int n = loop.n();
  auto map = [loop, rho0](double u, double v) {
    const CMatrix e = expm_skew(loop.generator(u), -v);
    return CMatrix(e * rho0 * e.adjoint());
  };
  auto jet = [loop, rho0, n](double u, double v) {
    const CMatrix x = loop.generator(u);
    CMatrix xdot = CMatrix::Zero(n, n);
    for (std::size_t m = 0; m < loop.modes().size(); ++m) {
      const double w = std::numbers::pi * static_cast<double>(m + 1);
      xdot += w * std::cos(w * u) * loop.modes()[m];
    }
    const Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (x + x.adjoint()));
    const RVector& lam = eig.eigenvalues();
    const CMatrix& vec = eig.eigenvectors();
    CVector ph(n);
    for (int j = 0; j < n; ++j) ph(j) = std::polar(1.0, v * lam(j));
    const CMatrix e = vec * ph.asDiagonal() * vec.adjoint();
    // Derivative of exp(i v X) along Xdot, in the eigenbasis of X.
    CMatrix g = vec.adjoint() * xdot * vec;
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l) {
        const double gap = lam(j) - lam(l);
        const cplx f = std::abs(gap) > 1e-9
                           ? (ph(j) - ph(l)) / gap
                           : kI * v * std::polar(1.0, 0.5 * v * (lam(j) + lam(l)));
        g(j, l) *= f;
      }
    }
    const CMatrix edot = vec * g * vec.adjoint();
    SurfaceJet out;
    out.rho = e * rho0 * e.adjoint();
    const CMatrix a = edot * rho0 * e.adjoint();
    out.du = a + a.adjoint();
    out.dv = kI * (x * out.rho - out.rho * x);
    return out;
  };
  return ParametrizedSurface::from_jet(loop.weights(), n, std::move(map), std::move(jet),
                                       LoopEdge::kTop);
}

double omega_density(const ParametrizedSurface& surface, double u, double v, double fd_step) {
  return omega_from_jet(surface.jet(u, v, fd_step), surface.weights(), true);
}

double grid_cell_omega(const ParametrizedSurface& s, int i, int j) {
  if (!s.is_grid() || i < 0 || j < 0 || i + 1 >= s.nu() || j + 1 >= s.nv()) {
    throw ContractError("grid_cell_omega: not a grid cell");
  }
  const double du = 1.0 / (s.nu() - 1);
  const double dv = 1.0 / (s.nv() - 1);
  const CMatrix& a = s.node(i, j);
  const CMatrix& b = s.node(i + 1, j);
  const CMatrix& c = s.node(i, j + 1);
  const CMatrix& d = s.node(i + 1, j + 1);
  const SurfaceJet jet{0.25 * (a + b + c + d), 0.5 * ((b - a) + (d - c)) / du,
                       0.5 * ((c - a) + (d - b)) / dv};
  return omega_from_jet(jet, s.weights(), false);
}

double surface_integral_fixed(const ParametrizedSurface& surface, double u0, double u1,
                              double v0, double v1, int res_u, int res_v, double fd_step) {
  if (res_u < 1 || res_v < 1) throw ContractError("surface_integral: resolution must be >= 1");
  const double hu = (u1 - u0) / res_u;
  const double hv = (v1 - v0) / res_v;
  // Fixed summation order keeps results reproducible bit for bit.
  double total = 0.0;
  for (int i = 0; i < res_u; ++i) {
    const double u = u0 + (i + 0.5) * hu;
    double column = 0.0;
    for (int j = 0; j < res_v; ++j) {
      column += omega_density(surface, u, v0 + (j + 0.5) * hv, fd_step);
    }
    total += column;
  }
  return total * hu * hv;
}

SurfaceIntegral surface_integral_region(const ParametrizedSurface& surface, double u0,
                                        double u1, double v0, double v1,
                                        const QuadratureOptions& options) {
  if (surface.is_grid()) {
    throw ContractError("surface_integral_region: grid surfaces integrate only as a whole");
  }
  if (options.initial_resolution < 1 || options.max_resolution < options.initial_resolution) {
    throw ContractError("surface_integral: bad resolution bounds");
  }
  int res = options.initial_resolution;
  double mid = surface_integral_fixed(surface, u0, u1, v0, v1, res, res, options.fd_step);
  bool have_estimate = !options.extrapolate;
  double estimate = mid;
  while (res * 2 <= options.max_resolution) {
    res *= 2;
    const double finer = surface_integral_fixed(surface, u0, u1, v0, v1, res, res, options.fd_step);
    const double next = options.extrapolate ? (4.0 * finer - mid) / 3.0 : finer;
    mid = finer;
    if (have_estimate && std::abs(next - estimate) < options.quad_tol) {
      return {next, estimate, res};
    }
    const double prev = estimate;
    estimate = next;
    have_estimate = true;
    if (res * 2 > options.max_resolution) {
      throw QuadratureError("surface_integral: no convergence at resolution " +
                                std::to_string(res),
                            prev, next);
    }
  }
  throw QuadratureError("surface_integral: max resolution below two refinement levels", estimate,
                        estimate);
}

SurfaceIntegral surface_integral(const ParametrizedSurface& surface,
                                 const QuadratureOptions& options) {
  const double sign = edge_orientation(surface.loop_edge());
  if (surface.is_grid()) {
    const double v = sign * grid_integral(surface);
    return {v, v, std::max(surface.nu(), surface.nv()) - 1};
  }
  SurfaceIntegral r = surface_integral_region(surface, 0.0, 1.0, 0.0, 1.0, options);
  r.value *= sign;
  r.previous *= sign;
  return r;
}

}  // namespace holonomy
