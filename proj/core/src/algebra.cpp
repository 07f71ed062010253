#include "holonomy/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "holonomy/errors.hpp"

namespace holonomy {

namespace {

constexpr double kRankTol = 1e-10;
constexpr double kSingularTol = 1e-10;

}  // namespace

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tol * std::max(1.0, max_abs(m));
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

CMatrix gram_schmidt(const CMatrix& columns) {
  const auto k = columns.cols();
  if (k == 0 || columns.rows() < k) {
    throw DegenerateInputError("gram_schmidt: need 1 <= k <= n columns");
  }
  CMatrix q = columns;
  for (Eigen::Index j = 0; j < k; ++j) {
    const double norm = q.col(j).norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw DegenerateInputError("gram_schmidt: zero or non-finite column");
    }
    q.col(j) /= norm;
  }
  const Eigen::SelfAdjointEigenSolver<CMatrix> gram(q.adjoint() * q, Eigen::EigenvaluesOnly);
  if (gram.eigenvalues()(0) < kRankTol) {
    std::ostringstream os;
    os << "gram_schmidt: columns are linearly dependent (smallest Gram eigenvalue "
       << gram.eigenvalues()(0) << ")";
    throw DegenerateInputError(os.str());
  }
  for (Eigen::Index j = 0; j < k; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < j; ++i) {
        const cplx proj = q.col(i).dot(q.col(j));
        q.col(j) -= proj * q.col(i);
      }
    }
    q.col(j).normalize();
  }
  return q;
}

PolarDecomposition polar_decompose(const CMatrix& s) {
  if (s.rows() != s.cols() || s.rows() == 0) {
    throw ContractError("polar_decompose: expected a non-empty square matrix");
  }
  const CMatrix gram = s.adjoint() * s;
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (gram + gram.adjoint()));
  const RVector lambda = eig.eigenvalues();
  const double smallest = std::sqrt(std::max(lambda(0), 0.0));
  if (smallest <= kSingularTol) {
    std::ostringstream os;
    os << "polar_decompose: matrix is singular (smallest singular value " << smallest << ")";
    throw OutsideChartError(os.str());
  }
  const RVector sigma = lambda.cwiseMax(0.0).cwiseSqrt();
  const CMatrix& v = eig.eigenvectors();
  PolarDecomposition out;
  out.positive = v * sigma.cast<cplx>().asDiagonal() * v.adjoint();
  out.unitary = s * v * sigma.cwiseInverse().cast<cplx>().asDiagonal() * v.adjoint();
  return out;
}

CMatrix expm_skew(const CMatrix& k, double t) {
  if (!is_hermitian(k)) {
    throw ContractError("expm_skew: generator is not Hermitian");
  }
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (k + k.adjoint()));
  const RVector& lambda = eig.eigenvalues();
  CVector phases(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    phases(i) = std::polar(1.0, -t * lambda(i));
  }
  const CMatrix& v = eig.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

CMatrix hermitian_sqrt(const CMatrix& psd) {
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (psd + psd.adjoint()));
  const RVector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const CMatrix& v = eig.eigenvectors();
  return v * root.cast<cplx>().asDiagonal() * v.adjoint();
}

CMatrix generator_j(int n, int j, int k) {
  CMatrix m = CMatrix::Zero(n, n);
  const cplx c = kI / std::sqrt(2.0);
  m(j, k) += c;
  m(k, j) -= c;
  return m;
}

CMatrix generator_q(int n, int j, int k) {
  CMatrix m = CMatrix::Zero(n, n);
  const double c = 1.0 / std::sqrt(2.0);
  m(j, k) += c;
  m(k, j) += c;
  return m;
}

CMatrix generator_diag(int n, int j) {
  CMatrix m = CMatrix::Zero(n, n);
  m(j, j) = 1.0;
  return m;
}

HermitianBasis un_basis(int n) {
  if (n < 1) throw ContractError("un_basis: n must be >= 1");
  HermitianBasis basis;
  basis.n = n;
  basis.generators.reserve(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    basis.generators.push_back(generator_diag(n, j));
    basis.labels.push_back("Q_" + std::to_string(j + 1));
  }
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      basis.generators.push_back(generator_j(n, j, k));
      basis.labels.push_back("J_" + std::to_string(j + 1) + std::to_string(k + 1));
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      basis.generators.push_back(generator_q(n, j, k));
      basis.labels.push_back("Q_" + std::to_string(j + 1) + std::to_string(k + 1));
    }
  }
  return basis;
}

RVector basis_coefficients(const HermitianBasis& basis, const CMatrix& x) {
  RVector out(static_cast<Eigen::Index>(basis.generators.size()));
  for (std::size_t i = 0; i < basis.generators.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = (x * basis.generators[i]).trace().real();
  }
  return out;
}

CMatrix from_coefficients(const HermitianBasis& basis, const RVector& coefficients) {
  if (coefficients.size() != static_cast<Eigen::Index>(basis.generators.size())) {
    throw ContractError("from_coefficients: coefficient count does not match basis");
  }
  CMatrix x = CMatrix::Zero(basis.n, basis.n);
  for (std::size_t i = 0; i < basis.generators.size(); ++i) {
    x += coefficients(static_cast<Eigen::Index>(i)) * basis.generators[i];
  }
  return x;
}

}  // namespace holonomy
