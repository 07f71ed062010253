#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace holonomy {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

/// Largest absolute entry; the norm used for every tolerance check in the library.
double max_abs(const CMatrix& m);

bool is_hermitian(const CMatrix& m, double tol = 1e-12);

CMatrix commutator(const CMatrix& a, const CMatrix& b);

/// Orthonormalizes the columns of `columns` (modified Gram-Schmidt, two passes).
///
/// Each output column q_j satisfies (q_j, a_j) > 0, so no phase is introduced
/// relative to the input. Throws DegenerateInputError when the Gram matrix of the
/// normalized inputs has an eigenvalue below 1e-10.
CMatrix gram_schmidt(const CMatrix& columns);

struct PolarDecomposition {
  CMatrix unitary;   // W
  CMatrix positive;  // P = (S^dagger S)^{1/2}
};

/// S = W P with W unitary and P the Hermitian positive square root of S^dagger S.
/// Throws OutsideChartError when the smallest singular value is <= 1e-10.
PolarDecomposition polar_decompose(const CMatrix& s);

/// exp(-i t K) for Hermitian K, via the eigendecomposition of K.
CMatrix expm_skew(const CMatrix& k, double t);

/// Positive square root of a Hermitian positive semidefinite matrix.
CMatrix hermitian_sqrt(const CMatrix& psd);

/// Raw u(n) generators (0-based indices). J is antisymmetric imaginary,
/// Q symmetric real; both carry the 1/sqrt(2) normalization.
CMatrix generator_j(int n, int j, int k);
CMatrix generator_q(int n, int j, int k);
/// Diagonal generator with a single unit entry at (j, j).
CMatrix generator_diag(int n, int j);

struct HermitianBasis {
  int n = 0;
  /// Q_1..Q_n, then J_jk for j<k in lexicographic order, then Q_jk likewise.
  std::vector<CMatrix> generators;
  std::vector<std::string> labels;
};

HermitianBasis un_basis(int n);

/// Real coordinates x_i = Tr(X G_i) of a Hermitian X in a trace-orthonormal basis.
RVector basis_coefficients(const HermitianBasis& basis, const CMatrix& x);
CMatrix from_coefficients(const HermitianBasis& basis, const RVector& coefficients);

}  // namespace holonomy
