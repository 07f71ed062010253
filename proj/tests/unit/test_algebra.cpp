#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "test_util.hpp"

namespace holonomy {
namespace {

using test::diag;
using test::near;

TEST(ExpmSkew, MatchesGeneralMatrixExponential) {
  SplitMix64 rng(11);
  for (int n : {1, 2, 3, 5}) {
    const CMatrix k = random_hermitian(rng, n);
    const CMatrix reference = (cplx(0.0, -0.7) * k).exp();
    EXPECT_TRUE(near(expm_skew(k, 0.7), reference, 1e-12)) << "n = " << n;
  }
}

TEST(ExpmSkew, DiagonalAtPi) {
  EXPECT_TRUE(near(expm_skew(diag({1.0, 2.0}), std::numbers::pi), diag({-1.0, 1.0}), 1e-15));
}

TEST(ExpmSkew, IsUnitaryAndAGroupInT) {
  SplitMix64 rng(3);
  const CMatrix k = random_hermitian(rng, 4);
  const CMatrix u = expm_skew(k, 1.3);
  EXPECT_TRUE(near(u.adjoint() * u, CMatrix::Identity(4, 4), 1e-13));
  EXPECT_TRUE(near(expm_skew(k, 0.5) * expm_skew(k, 0.8), u, 1e-13));
  EXPECT_TRUE(near(expm_skew(k, 0.0), CMatrix::Identity(4, 4), 1e-14));
}

TEST(ExpmSkew, RejectsNonHermitian) {
  CMatrix k = diag({1.0, 2.0});
  k(0, 1) = 1.0;
  EXPECT_THROW(expm_skew(k, 1.0), ContractError);
}

TEST(Polar, ReconstructsAndIsIdempotent) {
  SplitMix64 rng(5);
  const CMatrix s = random_complex(rng, 3, 3);
  const PolarDecomposition p = polar_decompose(s);
  EXPECT_TRUE(near(p.unitary * p.positive, s, 1e-12));
  EXPECT_TRUE(near(p.unitary.adjoint() * p.unitary, CMatrix::Identity(3, 3), 1e-12));
  EXPECT_TRUE(near(p.positive, p.positive.adjoint(), 1e-12));
  const PolarDecomposition again = polar_decompose(p.unitary);
  EXPECT_TRUE(near(again.unitary, p.unitary, 1e-12));
  EXPECT_TRUE(near(again.positive, CMatrix::Identity(3, 3), 1e-12));
}

TEST(Polar, RejectsSingular) {
  EXPECT_THROW(polar_decompose(diag({1.0, 0.0})), OutsideChartError);
}

TEST(GramSchmidt, OrthonormalWithoutPhaseChange) {
  SplitMix64 rng(9);
  const CMatrix a = random_complex(rng, 5, 3);
  const CMatrix q = gram_schmidt(a);
  EXPECT_TRUE(near(q.adjoint() * q, CMatrix::Identity(3, 3), 1e-13));
  for (int j = 0; j < 3; ++j) {
    const cplx overlap = q.col(j).dot(a.col(j));
    EXPECT_GT(overlap.real(), 0.0);
    EXPECT_NEAR(overlap.imag(), 0.0, 1e-13);
  }
  // Triangular: span of the first j columns is preserved.
  const CMatrix r = q.adjoint() * a;
  EXPECT_NEAR(std::abs(r(1, 0)), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(r(2, 1)), 0.0, 1e-13);
}

TEST(GramSchmidt, RejectsDependentColumns) {
  CMatrix a(3, 2);
  a << 1.0, 2.0, kI, 2.0 * kI, 0.0, 0.0;
  EXPECT_THROW(gram_schmidt(a), DegenerateInputError);
}

TEST(Generators, EqualIndexConventions) {
  EXPECT_TRUE(near(generator_j(3, 1, 1), CMatrix::Zero(3, 3), 0.0));
  CMatrix expected = CMatrix::Zero(3, 3);
  expected(1, 1) = std::sqrt(2.0);
  EXPECT_TRUE(near(generator_q(3, 1, 1), expected, 1e-15));
}

TEST(Generators, PauliLikeForNTwo) {
  // J_12 = sigma_y / sqrt(2) up to sign, Q_12 = sigma_x / sqrt(2).
  CMatrix j(2, 2), q(2, 2);
  j << 0.0, kI, -kI, 0.0;
  q << 0.0, 1.0, 1.0, 0.0;
  EXPECT_TRUE(near(generator_j(2, 0, 1), j / std::sqrt(2.0), 1e-15));
  EXPECT_TRUE(near(generator_q(2, 0, 1), q / std::sqrt(2.0), 1e-15));
}

TEST(UnBasis, CountLabelsAndTraceOrthonormality) {
  for (int n : {1, 2, 3, 4}) {
    const HermitianBasis b = un_basis(n);
    ASSERT_EQ(b.generators.size(), static_cast<std::size_t>(n * n));
    for (std::size_t a = 0; a < b.generators.size(); ++a) {
      EXPECT_TRUE(is_hermitian(b.generators[a]));
      for (std::size_t c = 0; c < b.generators.size(); ++c) {
        const cplx tr = (b.generators[a] * b.generators[c]).trace();
        EXPECT_NEAR(std::abs(tr - cplx(a == c ? 1.0 : 0.0)), 0.0, 1e-15);
      }
    }
  }
  const HermitianBasis b3 = un_basis(3);
  EXPECT_EQ(b3.labels.front(), "Q_1");
  EXPECT_EQ(b3.labels[3], "J_12");
  EXPECT_EQ(b3.labels.back(), "Q_23");
  EXPECT_TRUE(near(b3.generators[1], diag({0.0, 1.0, 0.0}), 0.0));
}

TEST(UnBasis, CoefficientRoundTrip) {
  SplitMix64 rng(17);
  for (int n : {2, 3, 5}) {
    const HermitianBasis b = un_basis(n);
    const CMatrix x = random_hermitian(rng, n);
    const RVector c = basis_coefficients(b, x);
    EXPECT_TRUE(near(from_coefficients(b, c), x, 1e-13));
    // Tr(X^2) = |c|^2 in a trace-orthonormal basis.
    EXPECT_NEAR((x * x).trace().real(), c.squaredNorm(), 1e-12);
  }
}

TEST(UnBasis, RejectsEmpty) { EXPECT_THROW(un_basis(0), ContractError); }

TEST(HermitianSqrt, SquaresBack) {
  SplitMix64 rng(21);
  const CMatrix a = random_complex(rng, 4, 4);
  const CMatrix psd = a.adjoint() * a;
  const CMatrix r = hermitian_sqrt(psd);
  EXPECT_TRUE(near(r * r, psd, 1e-12));
  EXPECT_TRUE(near(r, r.adjoint(), 1e-13));
}

TEST(Commutator, Antisymmetric) {
  SplitMix64 rng(2);
  const CMatrix a = random_hermitian(rng, 3);
  const CMatrix b = random_hermitian(rng, 3);
  EXPECT_TRUE(near(commutator(a, b), -commutator(b, a), 0.0));
  EXPECT_TRUE(near(commutator(a, a), CMatrix::Zero(3, 3), 0.0));
}

}  // namespace
}  // namespace holonomy
