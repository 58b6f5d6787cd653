#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qms/errors.hpp"
#include "qms/tolerance.hpp"

namespace qms {

using Complex = std::complex<double>;
using Cmat = Eigen::MatrixXcd;
using Cvec = Eigen::VectorXcd;
using Rvec = Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Vectorization (column stacking): vec(AXB) = (B^T (x) A) vec(X).
// ---------------------------------------------------------------------------

inline Cvec vec(const Cmat& x) {
  return Eigen::Map<const Cvec>(x.data(), x.size());
}

inline Cmat unvec(const Cvec& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Cmat>(v.data(), rows, cols);
}

Cmat kron(const Cmat& a, const Cmat& b);

/// d^2 x d^2 matrix acting on column-stacked vectorizations of d x d operators.
struct Superoperator {
  Eigen::Index dim = 0;  // underlying Hilbert-space dimension d
  Cmat matrix;           // d^2 x d^2

  Cmat apply(const Cmat& x) const {
    return unvec(matrix * vec(x), dim, dim);
  }
};

/// Superoperator for x -> a x b.
Superoperator sandwich_superop(const Cmat& a, const Cmat& b);
/// Superoperator for x -> a x.
Superoperator left_mult_superop(const Cmat& a);
/// Superoperator for x -> x b.
Superoperator right_mult_superop(const Cmat& b);

// ---------------------------------------------------------------------------
// Inner products and structural predicates
// ---------------------------------------------------------------------------

/// tr(A* B); conjugate-linear in A.
Complex frobenius_inner(const Cmat& a, const Cmat& b);

inline double fro(const Cmat& a) { return a.norm(); }

bool is_hermitian(const Cmat& a, double tol_rel);
bool is_unitary(const Cmat& u, double tol_abs);

// ---------------------------------------------------------------------------
// Decompositions
// ---------------------------------------------------------------------------

struct HermitianEig {
  Rvec eigenvalues;  // ascending
  Cmat eigenvectors; // unitary, canonicalized
};

/// Eigendecomposition of a Hermitian matrix with a deterministic basis inside
/// degenerate clusters: re-orthonormalize by modified Gram-Schmidt against
/// identity columns in index order, then make the largest-modulus entry of
/// each vector real positive. Throws NotHermitian.
HermitianEig eig_hermitian(const Cmat& a, const TolerancePolicy& tol);

struct SchurDecomposition {
  Cmat Q;  // unitary
  Cmat T;  // upper triangular, A = Q T Q*
};

SchurDecomposition schur(const Cmat& a);

/// Reorder a Schur form so that the eigenvalues at positions `select` (indices
/// into the current diagonal of T) are moved to the leading positions,
/// preserving A = Q T Q*. Returns the number of selected eigenvalues.
Eigen::Index schur_select(SchurDecomposition& s, const std::vector<bool>& select);

/// Orthonormal basis of the nullspace via SVD. Singular values at or below
/// tol.rank_rel * max(sigma_max, scale) count as zero; a nonzero `scale`
/// keeps a numerically-zero matrix from treating its own noise as full rank.
/// Columns of the returned matrix are the basis (possibly 0 columns).
Cmat nullspace(const Cmat& a, const TolerancePolicy& tol, double scale = 0.0);

/// Basis of the invariant subspace spanned by the `count` smallest singular
/// directions, regardless of threshold. Used where the dimension is known.
Cmat smallest_singular_subspace(const Cmat& a, Eigen::Index count);

/// Dense matrix exponential (scaling and squaring).
Cmat expm_dense(const Cmat& a);

/// e^{t S} as a superoperator.
Superoperator expm(const Superoperator& s, double t);

// ---------------------------------------------------------------------------
// Span utilities (matrices viewed as vectors in C^{d^2})
// ---------------------------------------------------------------------------

/// Frobenius-orthonormal basis of span{ms} via SVD; rank decided at
/// tol.rank_rel relative threshold. Deterministic for fixed input.
std::vector<Cmat> orthonormal_span(const std::vector<Cmat>& ms,
                                   const TolerancePolicy& tol);

/// Frobenius distance from x to span{basis}; basis must be orthonormal.
double span_residual(const std::vector<Cmat>& basis, const Cmat& x);

/// True when x lies in span{basis} within tol.residual * (1 + |x|_F).
bool in_span(const std::vector<Cmat>& basis, const Cmat& x,
             const TolerancePolicy& tol);

}  // namespace qms
