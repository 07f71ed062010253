#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "holonomy/algebra.hpp"

namespace holonomy {

inline constexpr double kFrameTol = 1e-12;
inline constexpr double kDegeneracyGap = 1e-8;
inline constexpr double kRankTol = 1e-10;
inline constexpr double kOrbitTol = 1e-9;

// An ordered k-tuple of orthonormal vectors in C^n, stored as the columns of an
// n x k matrix. Construction checks Psi^dagger Psi = I_k to 1e-12.
class Frame {
 public:
  Frame() = default;
  explicit Frame(CMatrix columns);

  // Gram-Schmidt of arbitrary independent columns.
  static Frame orthonormalize(const CMatrix& columns);
  // First k canonical basis vectors of C^n.
  static Frame canonical(int n, int k);

  int n() const { return static_cast<int>(psi_.rows()); }
  int k() const { return static_cast<int>(psi_.cols()); }
  const CMatrix& matrix() const { return psi_; }
  CVector column(int a) const { return psi_.col(a); }

  // Psi diag(e^{i alpha_1}, ..., e^{i alpha_k}).
  Frame with_phases(const RVector& alpha) const;

 private:
  CMatrix psi_;
};

class SpectralWeights {
 public:
  SpectralWeights() = default;
  // Strictly decreasing, each in (0, 1), summing to one within 1e-12. The
  // single-level case k = 1 accepts exactly {1}.
  explicit SpectralWeights(RVector values);
  SpectralWeights(std::initializer_list<double> values);

  int k() const { return static_cast<int>(kappa_.size()); }
  double operator[](int a) const { return kappa_(a); }
  const RVector& values() const { return kappa_; }

 private:
  RVector kappa_;
};

class DensityMatrix {
 public:
  DensityMatrix() = default;
  // Hermitian to 1e-12, eigenvalues >= -1e-12, unit trace to 1e-12.
  explicit DensityMatrix(CMatrix rho);

  int n() const { return static_cast<int>(rho_.rows()); }
  const CMatrix& matrix() const { return rho_; }

 private:
  CMatrix rho_;
};

// A density matrix together with the orbit it is certified to lie on.
class OrbitPoint {
 public:
  OrbitPoint(DensityMatrix density, SpectralWeights weights, double orbit_tol = kOrbitTol);

  const DensityMatrix& density() const { return density_; }
  const SpectralWeights& weights() const { return weights_; }
  const CMatrix& matrix() const { return density_.matrix(); }

 private:
  DensityMatrix density_;
  SpectralWeights weights_;
};

// rho = sum_a kappa_a psi_a psi_a^dagger.
CMatrix project(const Frame& frame, const SpectralWeights& weights);

struct SpectralDecomposition {
  Frame frame;
  SpectralWeights weights;
};

// Eigenvectors of the k largest eigenvalues in decreasing order. In every column
// the entry of largest modulus (lowest index on ties) is made real positive.
// The weights are the top-k eigenvalues renormalized to unit sum.
//
// Throws DegeneracyError if two of the top-k eigenvalues (or the k-th and the
// largest discarded one) are within 1e-8, and NotOnOrbitError if a discarded
// eigenvalue exceeds 1e-10 or a kept one is not positive.
SpectralDecomposition spectral_frame(const CMatrix& rho, int k);
inline SpectralDecomposition spectral_frame(const DensityMatrix& rho, int k) {
  return spectral_frame(rho.matrix(), k);
}

// Applies the eigenvector phase convention above to every column.
CMatrix apply_phase_convention(CMatrix columns);

// Real dimensions (dim B, dim R) = (k(2n-k), k(2n-k-1)).
std::pair<int, int> dims(int n, int k);

struct PathSample {
  double s = 0.0;
  CMatrix rho;
  // A frame over rho carried along by whoever generated the path (a smooth lift).
  std::optional<Frame> frame;
};

// A sampled curve of density matrices (optionally with frames) on one orbit.
class DiscretizedPath {
 public:
  DiscretizedPath() = default;
  // Checks: at least one sample, strictly increasing s, uniform shapes, frames
  // projecting onto their rho to 1e-10 and, if closed, end densities agreeing to 1e-10.
  DiscretizedPath(SpectralWeights weights, std::vector<PathSample> samples, bool closed);

  int n() const { return n_; }
  int k() const { return weights_.k(); }
  const SpectralWeights& weights() const { return weights_; }
  const std::vector<PathSample>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  const PathSample& operator[](std::size_t i) const { return samples_[i]; }
  bool closed() const { return closed_; }
  bool has_frames() const;

 private:
  SpectralWeights weights_;
  std::vector<PathSample> samples_;
  bool closed_ = false;
  int n_ = 0;
};

// Same points in reverse order, parameter s -> s_first + s_last - s.
DiscretizedPath reversed(const DiscretizedPath& path);

// Joins paths end to start. Later paths are shifted in s, their frames are
// re-phased column by column to agree at each junction, and the duplicated
// junction sample is dropped. Endpoints must agree to 1e-10.
DiscretizedPath concatenate(const std::vector<DiscretizedPath>& parts, bool closed);

// A curve given by a callable. `frame`, if set, is a smooth lift Psi(s) and
// then rho(s) defaults to its projection.
struct Curve {
  SpectralWeights weights;
  int n = 0;
  double s_begin = 0.0;
  double s_end = 1.0;
  bool closed = true;
  std::function<CMatrix(double)> rho;
  std::function<CMatrix(double)> frame;

  CMatrix rho_at(double s) const;
  // steps + 1 equally spaced samples. A closed curve reuses its first sample
  // at s_end so closure is exact.
  DiscretizedPath sample(int steps) const;
  // Same geometric curve traversed as s -> f(s); f must map [s_begin, s_end]
  // monotonically onto itself.
  Curve reparametrized(std::function<double(double)> f) const;
};

// sin(pi x) that is exactly zero at integer x.
double sin_pi(double x);

// Closed loop rho(s) = V(s) rho0 V(s)^dagger on the orbit through rho0, with
// V(s) = exp(i X(s)) and X(s) = sum_m sin(pi m s) X_m.
class OrbitLoop {
 public:
  OrbitLoop(SpectralWeights weights, Frame base, std::vector<CMatrix> modes);

  const SpectralWeights& weights() const { return weights_; }
  const Frame& base() const { return base_; }
  const std::vector<CMatrix>& modes() const { return modes_; }
  int n() const { return base_.n(); }

  CMatrix generator(double s) const;
  CMatrix unitary(double s) const;
  CMatrix frame_at(double s) const;
  CMatrix rho_at(double s) const;
  Curve curve() const;
  DiscretizedPath sample(int steps) const { return curve().sample(steps); }

 private:
  SpectralWeights weights_;
  Frame base_;
  std::vector<CMatrix> modes_;
};

// Random traceless Hermitian modes X_m with entries of size amplitude / m and a
// random base frame, all drawn from SplitMix64(seed).
OrbitLoop random_orbit_loop(const SpectralWeights& weights, int n, int modes,
                            std::uint64_t seed, double amplitude = 0.6);

}  // namespace holonomy
