#pragma once

#include <utility>

#include "qperm/core.hpp"

namespace qperm::linalg {

struct HermitianEigen {
    RealVector values;  // ascending
    Matrix vectors;     // columns, matching values
};

// Max entrywise |A - A^*|.
double hermiticity_defect(const Matrix& a);

// Eigendecomposition of the Hermitian part of `a`. Throws NotHermitian if the
// defect exceeds `herm_tol`.
HermitianEigen eigh(const Matrix& a, double herm_tol);

// Largest singular value.
double spectral_norm(const Matrix& a);

double max_abs_entry(const Matrix& a);

Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);
Vector kron_power(const Vector& v, int power);

// Reduced states of a bipartite pure state with row-major layout
// index = left * right_dim + right.
Matrix reduce_to_left(const Vector& psi, Eigen::Index left_dim, Eigen::Index right_dim);
Matrix reduce_to_right(const Vector& psi, Eigen::Index left_dim, Eigen::Index right_dim);

// Zero-padded copy of `v` in dimension `dim` (>= v.size()).
Vector pad(const Vector& v, Eigen::Index dim);

// Multiplies `v` by a global phase so that its largest-modulus entry (first
// one on ties) is real and positive.
Vector canonical_phase(const Vector& v);

// Deterministic unitary whose first columns span the same space as the
// orthonormal columns of `basis`; returns the orthogonal complement columns.
Matrix orthogonal_complement(const Matrix& basis, Eigen::Index dim);

}  // namespace qperm::linalg
