#pragma once

#include <holonomy/holonomy.hpp>

// Reference computations that avoid the library code paths they are used to check.
namespace holonomy::oracles {

// Accumulated phase of one Bloch-circle eigenvector (level 0: the state at polar
// angle theta, level 1: its antipode) by brute-force discrete lifting over
// `steps` azimuth steps, in plain std::complex arithmetic.
double bloch_lift_phase(double theta, int level, long steps);

// Right-hand sides of the u(n) commutation relations, generators built from
// their matrix-element definitions; 0-based indices, j == k allowed.
CMatrix j_generator(int n, int j, int k);
CMatrix q_generator(int n, int j, int k);
CMatrix commutator_jj(int n, int j, int k, int l, int m);
CMatrix commutator_jq(int n, int j, int k, int l, int m);
CMatrix commutator_qq(int n, int j, int k, int l, int m);

// Central-difference curvature of A^(a) on the coordinate square
// Psi(e1, e2) = exp(-i e1 G1) exp(-i e2 G2) Psi0, whose coordinate vectors at the
// origin are t1 and t2. Exponentials come from Eigen's MatrixExponential.
RVector fd_curvature(const Frame& frame, const FrameTangent& t1, const FrameTangent& t2,
                     double delta);

}  // namespace holonomy::oracles
