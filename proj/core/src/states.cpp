#include "holonomy/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "holonomy/errors.hpp"
#include "holonomy/random.hpp"

namespace holonomy {

namespace {

constexpr double kMatchTol = 1e-10;

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

Frame::Frame(CMatrix columns) : psi_(std::move(columns)) {
  const auto n = psi_.rows();
  const auto k = psi_.cols();
  if (k < 1 || n < k) {
    throw ContractError("Frame: need 1 <= k <= n, got n=" + std::to_string(n) +
                        ", k=" + std::to_string(k));
  }
  if (!psi_.allFinite()) throw ContractError("Frame: non-finite entries");
  const double err = max_abs(psi_.adjoint() * psi_ - CMatrix::Identity(k, k));
  if (err > kFrameTol) {
    throw ContractError("Frame: columns not orthonormal (|Psi^H Psi - I| = " + fmt(err) + ")");
  }
}

Frame Frame::orthonormalize(const CMatrix& columns) { return Frame(gram_schmidt(columns)); }

Frame Frame::canonical(int n, int k) { return Frame(CMatrix::Identity(n, k)); }

Frame Frame::with_phases(const RVector& alpha) const {
  if (alpha.size() != k()) throw ContractError("Frame::with_phases: expected k phases");
  CMatrix out = psi_;
  for (int a = 0; a < k(); ++a) out.col(a) *= std::polar(1.0, alpha(a));
  return Frame(std::move(out));
}

SpectralWeights::SpectralWeights(RVector values) : kappa_(std::move(values)) {
  const auto k = kappa_.size();
  if (k < 1) throw ContractError("weights: need at least one value");
  if (!kappa_.allFinite()) throw ContractError("weights: non-finite value");
  if (std::abs(kappa_.sum() - 1.0) > 1e-12) {
    throw ContractError("weights: must sum to 1 (sum = " + fmt(kappa_.sum()) + ")");
  }
  if (k == 1) {
    if (kappa_(0) != 1.0 && std::abs(kappa_(0) - 1.0) > 1e-12) {
      throw ContractError("weights: single level must be 1");
    }
    kappa_(0) = 1.0;
    return;
  }
  for (Eigen::Index a = 0; a < k; ++a) {
    if (!(kappa_(a) > 0.0 && kappa_(a) < 1.0)) {
      throw ContractError("weights: each value must lie in (0, 1)");
    }
    if (a > 0 && !(kappa_(a) < kappa_(a - 1))) {
      throw ContractError("weights: must be strictly decreasing");
    }
  }
}

SpectralWeights::SpectralWeights(std::initializer_list<double> values)
    : SpectralWeights(RVector(Eigen::Map<const RVector>(values.begin(),
                                                        static_cast<Eigen::Index>(values.size())))) {}

DensityMatrix::DensityMatrix(CMatrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() == 0) {
    throw ContractError("DensityMatrix: expected a non-empty square matrix");
  }
  if (!rho_.allFinite()) throw ContractError("DensityMatrix: non-finite entries");
  if (!is_hermitian(rho_, 1e-12)) throw ContractError("DensityMatrix: not Hermitian");
  const cplx tr = rho_.trace();
  if (std::abs(tr - 1.0) > 1e-12) {
    throw ContractError("DensityMatrix: trace " + fmt(tr.real()) + " != 1");
  }
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(rho_, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues()(0) < -1e-12) {
    throw ContractError("DensityMatrix: negative eigenvalue " + fmt(eig.eigenvalues()(0)));
  }
}

OrbitPoint::OrbitPoint(DensityMatrix density, SpectralWeights weights, double orbit_tol)
    : density_(std::move(density)), weights_(std::move(weights)) {
  const int n = density_.n();
  const int k = weights_.k();
  if (k > n) throw ContractError("OrbitPoint: more levels than the dimension");
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(density_.matrix(), Eigen::EigenvaluesOnly);
  const RVector& lambda = eig.eigenvalues();  // ascending
  for (int a = 0; a < n; ++a) {
    const double expected = a < k ? weights_[a] : 0.0;
    const double got = lambda(n - 1 - a);
    if (std::abs(got - expected) > orbit_tol) {
      throw NotOnOrbitError("OrbitPoint: eigenvalue " + std::to_string(a + 1) + " is " + fmt(got) +
                            ", expected " + fmt(expected));
    }
  }
}

CMatrix project(const Frame& frame, const SpectralWeights& weights) {
  if (frame.k() != weights.k()) {
    throw ContractError("project: frame has " + std::to_string(frame.k()) + " columns but " +
                        std::to_string(weights.k()) + " weights");
  }
  const CMatrix& psi = frame.matrix();
  return psi * weights.values().cast<cplx>().asDiagonal() * psi.adjoint();
}

CMatrix apply_phase_convention(CMatrix columns) {
  for (Eigen::Index a = 0; a < columns.cols(); ++a) {
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < columns.rows(); ++i) {
      // Strict comparison keeps the lowest index on exact ties.
      const double m = std::abs(columns(i, a));
      if (m > best) {
        best = m;
        pivot = i;
      }
    }
    if (best > 0.0) columns.col(a) *= std::conj(columns(pivot, a)) / best;
  }
  return columns;
}

SpectralDecomposition spectral_frame(const CMatrix& rho, int k) {
  const auto n = rho.rows();
  if (rho.cols() != n || k < 1 || k > n) {
    throw ContractError("spectral_frame: need a square matrix and 1 <= k <= n");
  }
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (rho + rho.adjoint()));
  if (eig.info() != Eigen::Success) throw ContractError("spectral_frame: eigensolver failed");
  const RVector& lambda = eig.eigenvalues();  // ascending
  RVector kept(k);
  CMatrix columns(n, k);
  for (int a = 0; a < k; ++a) {
    kept(a) = lambda(n - 1 - a);
    columns.col(a) = eig.eigenvectors().col(n - 1 - a);
  }
  for (int a = 0; a + 1 < k; ++a) {
    if (kept(a) - kept(a + 1) < kDegeneracyGap) {
      throw DegeneracyError("spectral_frame: eigenvalues " + fmt(kept(a)) + " and " +
                            fmt(kept(a + 1)) + " are degenerate");
    }
  }
  if (k < n) {
    const double next = lambda(n - 1 - k);
    if (kept(k - 1) - next < kDegeneracyGap) {
      throw DegeneracyError("spectral_frame: level " + std::to_string(k) +
                            " is degenerate with a discarded eigenvalue");
    }
    if (next >= kRankTol) {
      throw NotOnOrbitError("spectral_frame: rank exceeds " + std::to_string(k) +
                            " (next eigenvalue " + fmt(next) + ")");
    }
  }
  if (kept(k - 1) < kRankTol) {
    throw NotOnOrbitError("spectral_frame: rank is below " + std::to_string(k));
  }
  if (k == 1) {
    kept(0) = 1.0;
  } else {
    kept /= kept.sum();
  }
  return {Frame(apply_phase_convention(std::move(columns))), SpectralWeights(std::move(kept))};
}

std::pair<int, int> dims(int n, int k) {
  if (k < 1 || k > n) {
    throw ContractError("dims: need 1 <= k <= n, got n=" + std::to_string(n) +
                        ", k=" + std::to_string(k));
  }
  return {k * (2 * n - k), k * (2 * n - k - 1)};
}

DiscretizedPath::DiscretizedPath(SpectralWeights weights, std::vector<PathSample> samples,
                                 bool closed)
    : weights_(std::move(weights)), samples_(std::move(samples)), closed_(closed) {
  if (samples_.empty()) throw ContractError("path: no samples");
  n_ = static_cast<int>(samples_.front().rho.rows());
  if (weights_.k() > n_) throw ContractError("path: more levels than the dimension");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& p = samples_[i];
    if (p.rho.rows() != n_ || p.rho.cols() != n_) {
      throw ContractError("path: sample " + std::to_string(i) + " has inconsistent shape");
    }
    if (i > 0 && !(p.s > samples_[i - 1].s)) {
      throw ContractError("path: parameter values must be strictly increasing (sample " +
                          std::to_string(i) + ")");
    }
    if (p.frame) {
      if (p.frame->n() != n_ || p.frame->k() != weights_.k()) {
        throw ContractError("path: frame shape mismatch at sample " + std::to_string(i));
      }
      if (max_abs(project(*p.frame, weights_) - p.rho) > kMatchTol) {
        throw ContractError("path: frame does not project onto rho at sample " +
                            std::to_string(i));
      }
    }
  }
  if (closed_ && max_abs(samples_.front().rho - samples_.back().rho) > kMatchTol) {
    throw ContractError("path: marked closed but end points differ");
  }
}

bool DiscretizedPath::has_frames() const {
  return std::all_of(samples_.begin(), samples_.end(),
                     [](const PathSample& p) { return p.frame.has_value(); });
}

DiscretizedPath reversed(const DiscretizedPath& path) {
  const double a = path.samples().front().s;
  const double b = path.samples().back().s;
  std::vector<PathSample> out(path.samples().rbegin(), path.samples().rend());
  for (auto& p : out) p.s = a + b - p.s;
  return DiscretizedPath(path.weights(), std::move(out), path.closed());
}

DiscretizedPath concatenate(const std::vector<DiscretizedPath>& parts, bool closed) {
  if (parts.empty()) throw ContractError("concatenate: nothing to join");
  std::vector<PathSample> out = parts.front().samples();
  for (std::size_t j = 1; j < parts.size(); ++j) {
    const auto& next = parts[j].samples();
    const PathSample& tail = out.back();
    if (parts[j].k() != parts.front().k() ||
        max_abs(parts[j].weights().values().cast<cplx>() -
                parts.front().weights().values().cast<cplx>()) > 1e-12) {
      throw ContractError("concatenate: parts lie on different orbits");
    }
    if (max_abs(next.front().rho - tail.rho) > kMatchTol) {
      throw ContractError("concatenate: part " + std::to_string(j) + " does not start where " +
                          "the previous one ends");
    }
    RVector align = RVector::Zero(parts[j].k());
    const bool rephase = tail.frame && next.front().frame;
    if (rephase) {
      for (int a = 0; a < parts[j].k(); ++a) {
        align(a) = std::arg(next.front().frame->column(a).dot(tail.frame->column(a)));
      }
    }
    const double shift = tail.s - next.front().s;
    for (std::size_t i = 1; i < next.size(); ++i) {
      PathSample p = next[i];
      p.s += shift;
      if (p.frame) {
        p.frame = rephase ? p.frame->with_phases(align) : p.frame;
      }
      out.push_back(std::move(p));
    }
  }
  return DiscretizedPath(parts.front().weights(), std::move(out), closed);
}

CMatrix Curve::rho_at(double s) const {
  if (rho) return rho(s);
  if (frame) {
    const CMatrix psi = frame(s);
    return psi * weights.values().cast<cplx>().asDiagonal() * psi.adjoint();
  }
  throw ContractError("Curve: neither rho nor frame is set");
}

DiscretizedPath Curve::sample(int steps) const {
  if (steps < 1) throw ContractError("Curve::sample: need at least one step");
  std::vector<PathSample> samples;
  samples.reserve(static_cast<std::size_t>(steps) + 1);
  const double h = (s_end - s_begin) / steps;
  for (int i = 0; i <= steps; ++i) {
    const double s = i == steps ? s_end : s_begin + i * h;
    if (closed && i == steps) {
      PathSample last = samples.front();
      last.s = s;
      if (frame) last.frame = Frame(frame(s));
      samples.push_back(std::move(last));
      continue;
    }
    PathSample p;
    p.s = s;
    if (frame) {
      p.frame = Frame(frame(s));
      p.rho = rho ? rho(s) : project(*p.frame, weights);
    } else {
      p.rho = rho(s);
    }
    samples.push_back(std::move(p));
  }
  return DiscretizedPath(weights, std::move(samples), closed);
}

Curve Curve::reparametrized(std::function<double(double)> f) const {
  Curve out = *this;
  if (rho) out.rho = [g = rho, f](double s) { return g(f(s)); };
  if (frame) out.frame = [g = frame, f](double s) { return g(f(s)); };
  return out;
}

double sin_pi(double x) {
  if (x == std::nearbyint(x)) return 0.0;
  return std::sin(std::numbers::pi * x);
}

OrbitLoop::OrbitLoop(SpectralWeights weights, Frame base, std::vector<CMatrix> modes)
    : weights_(std::move(weights)), base_(std::move(base)), modes_(std::move(modes)) {
  if (base_.k() != weights_.k()) throw ContractError("OrbitLoop: frame/weights mismatch");
  for (const auto& x : modes_) {
    if (x.rows() != base_.n() || !is_hermitian(x)) {
      throw ContractError("OrbitLoop: modes must be Hermitian n x n");
    }
  }
}

CMatrix OrbitLoop::generator(double s) const {
  CMatrix x = CMatrix::Zero(n(), n());
  for (std::size_t m = 0; m < modes_.size(); ++m) {
    x += sin_pi(static_cast<double>(m + 1) * s) * modes_[m];
  }
  return x;
}

CMatrix OrbitLoop::unitary(double s) const { return expm_skew(generator(s), -1.0); }

CMatrix OrbitLoop::frame_at(double s) const { return unitary(s) * base_.matrix(); }

CMatrix OrbitLoop::rho_at(double s) const {
  const CMatrix psi = frame_at(s);
  return psi * weights_.values().cast<cplx>().asDiagonal() * psi.adjoint();
}

Curve OrbitLoop::curve() const {
  Curve c;
  c.weights = weights_;
  c.n = n();
  c.closed = true;
  c.frame = [self = *this](double s) { return self.frame_at(s); };
  return c;
}

OrbitLoop random_orbit_loop(const SpectralWeights& weights, int n, int modes, std::uint64_t seed,
                            double amplitude) {
  if (modes < 1) throw ContractError("random_orbit_loop: modes must be >= 1");
  if (weights.k() > n) throw ContractError("random_orbit_loop: k > n");
  SplitMix64 rng(seed);
  Frame base(random_frame_matrix(rng, n, weights.k()));
  std::vector<CMatrix> xs;
  xs.reserve(static_cast<std::size_t>(modes));
  for (int m = 1; m <= modes; ++m) {
    CMatrix x = random_hermitian(rng, n);
    x -= (x.trace() / static_cast<double>(n)) * CMatrix::Identity(n, n);
    xs.push_back((amplitude / (m * std::sqrt(2.0 * n))) * x);
  }
  return OrbitLoop(weights, std::move(base), std::move(xs));
}

}  // namespace holonomy
