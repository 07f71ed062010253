#pragma once

#include <functional>
#include <vector>

#include "holonomy/algebra.hpp"
#include "holonomy/states.hpp"

namespace holonomy {

// Which edge of [0,1]^2 carries the loop, and in which direction it is traversed.
enum class LoopEdge {
  kTop,    // v = 1, u increasing: opposite to the boundary orientation
  kRight,  // u = 1, v increasing: along the boundary orientation
};

double edge_orientation(LoopEdge edge);

// rho and its parameter derivatives at one point.
struct SurfaceJet {
  CMatrix rho;
  CMatrix du;
  CMatrix dv;
};

// A two-parameter family of orbit points over [0,1]^2, given either as a callable
// (optionally with analytic derivatives) or as a dense node grid.
class ParametrizedSurface {
 public:
  using Map = std::function<CMatrix(double, double)>;
  using Jet = std::function<SurfaceJet(double, double)>;

  static ParametrizedSurface from_map(SpectralWeights weights, int n, Map map, LoopEdge edge);
  static ParametrizedSurface from_jet(SpectralWeights weights, int n, Map map, Jet jet,
                                      LoopEdge edge);
  // nodes[i * nv + j] = rho(u_i, v_j) with u_i = i / (nu - 1), v_j = j / (nv - 1).
  static ParametrizedSurface from_grid(SpectralWeights weights, int nu, int nv,
                                       std::vector<CMatrix> nodes, LoopEdge edge);

  const SpectralWeights& weights() const { return weights_; }
  int n() const { return n_; }
  int k() const { return weights_.k(); }
  LoopEdge loop_edge() const { return edge_; }
  bool is_grid() const { return !nodes_.empty(); }
  int nu() const { return nu_; }
  int nv() const { return nv_; }
  const std::vector<CMatrix>& nodes() const { return nodes_; }
  const CMatrix& node(int i, int j) const { return nodes_[static_cast<std::size_t>(i * nv_ + j)]; }

  // Callable surfaces only.
  CMatrix at(double u, double v) const;
  // Analytic if available, otherwise central differences with step `fd_step`.
  SurfaceJet jet(double u, double v, double fd_step) const;

  // rho along the loop edge as a function of the edge parameter t in [0,1].
  CMatrix boundary_at(double t) const;
  // The loop edge as a closed curve (callable surfaces).
  Curve boundary_curve() const;

 private:
  SpectralWeights weights_;
  int n_ = 0;
  LoopEdge edge_ = LoopEdge::kTop;
  Map map_;
  Jet jet_;
  int nu_ = 0;
  int nv_ = 0;
  std::vector<CMatrix> nodes_;
};

// rho(u, v) = exp(i v X(u)) rho0 exp(-i v X(u)) over an orbit loop generated by X(u).
// Derivatives are analytic.
ParametrizedSurface cone_surface(const OrbitLoop& loop);

struct QuadratureOptions {
  double quad_tol = 1e-6;
  int initial_resolution = 8;
  int max_resolution = 1024;
  double fd_step = 1e-5;
  // Richardson step on successive midpoint estimates (error h^2 -> h^4).
  bool extrapolate = true;
};

struct SurfaceIntegral {
  double value = 0.0;
  double previous = 0.0;
  int resolution = 0;
};

// Integral of Omega over the surface, oriented so that its boundary is the loop
// as traversed. Callable surfaces are refined dyadically until successive
// estimates differ by less than quad_tol (QuadratureError past max_resolution);
// grids are integrated once at their own resolution.
SurfaceIntegral surface_integral(const ParametrizedSurface& surface,
                                 const QuadratureOptions& options = {});

// Unoriented integral of Omega(d_u rho, d_v rho) du dv over a sub-rectangle with
// a fixed res_u x res_v midpoint grid (callable surfaces).
double surface_integral_fixed(const ParametrizedSurface& surface, double u0, double u1,
                              double v0, double v1, int res_u, int res_v, double fd_step = 1e-5);

// Same with refinement, for a sub-rectangle; unoriented.
SurfaceIntegral surface_integral_region(const ParametrizedSurface& surface, double u0,
                                        double u1, double v0, double v1,
                                        const QuadratureOptions& options = {});

// Omega(d_u rho, d_v rho) at a single point.
double omega_density(const ParametrizedSurface& surface, double u, double v, double fd_step = 1e-5);
// Same at the center of grid cell (i, j), from node differences.
double grid_cell_omega(const ParametrizedSurface& surface, int i, int j);

}  // namespace holonomy
