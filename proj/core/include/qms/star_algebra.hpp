#pragma once

#include <vector>

#include "qms/matrix_core.hpp"
#include "qms/rng.hpp"

namespace qms {

/// *-closed unital subalgebra of M_d, stored by a Frobenius-orthonormal basis.
struct OperatorAlgebra {
  Eigen::Index dim = 0;         // ambient d
  std::vector<Cmat> basis;      // orthonormal, spans the algebra

  Eigen::Index size() const { return static_cast<Eigen::Index>(basis.size()); }
};

/// Spatial realization of an algebra as (+)_i B(k_i) (x) 1_{m_i}.
struct BlockDecomposition {
  Cmat U;                                          // unitary change of basis
  std::vector<std::pair<Eigen::Index, Eigen::Index>> blocks;  // (k_i, m_i)
  std::vector<Cmat> central_projections;           // p_i, same order as blocks

  Eigen::Index block_offset(std::size_t i) const {
    Eigen::Index off = 0;
    for (std::size_t j = 0; j < i; ++j) off += blocks[j].first * blocks[j].second;
    return off;
  }
};

/// Smallest *-closed unital algebra containing the generators.
OperatorAlgebra generate_algebra(const std::vector<Cmat>& generators,
                                 Eigen::Index dim, const TolerancePolicy& tol);

/// Commutant of a *-closed set: {x : [x,a] = [x,a*] = 0 for all a}.
OperatorAlgebra commutant(const std::vector<Cmat>& elements, Eigen::Index dim,
                          const TolerancePolicy& tol);
OperatorAlgebra commutant(const OperatorAlgebra& a, const TolerancePolicy& tol);

/// A intersected with its commutant.
OperatorAlgebra center(const OperatorAlgebra& a, const TolerancePolicy& tol);

bool algebra_equal(const OperatorAlgebra& a, const OperatorAlgebra& b,
                   const TolerancePolicy& tol);

/// A'' = A (always true in finite dimension; kept as a self-test).
bool double_commutant_check(const OperatorAlgebra& a, const TolerancePolicy& tol);

/// Z(M) = Z(Z(M)') as an executable predicate.
bool center_of_commutant_identity(const OperatorAlgebra& m,
                                  const TolerancePolicy& tol);

/// Validate the OperatorAlgebra invariants (unital, *-closed, multiplicatively
/// closed, orthonormal basis). Returns the worst violation residual.
double algebra_invariant_residual(const OperatorAlgebra& a,
                                  const TolerancePolicy& tol);

/// Orthonormal basis of the range of a (near-)projection p, deterministic.
Cmat range_basis(const Cmat& p, const TolerancePolicy& tol);

/// Compression V* A V of an algebra to the range of an isometry V.
OperatorAlgebra compress(const OperatorAlgebra& a, const Cmat& v,
                         const TolerancePolicy& tol);

bool is_factor(const OperatorAlgebra& a, const TolerancePolicy& tol);

/// Pairwise-orthogonal minimal projections of Z(A) summing to 1, ordered by
/// rank descending then diagonal lexicographically. Throws DegenerateCenter
/// when generic-element eigenvalue clusters stay ambiguous after retries.
std::vector<Cmat> minimal_central_projections(const OperatorAlgebra& a,
                                              const TolerancePolicy& tol,
                                              Rng& rng);

/// Constructive Wedderburn decomposition: U*.a.U is block diagonal with
/// blocks b_i (x) 1_{m_i} for every a in the algebra.
BlockDecomposition wedderburn(const OperatorAlgebra& a,
                              const TolerancePolicy& tol, Rng& rng);

/// Hermitian generic element of span{basis} (used for central projections and
/// the Wedderburn construction).
Cmat random_hermitian_element(const std::vector<Cmat>& basis, Rng& rng);

/// Orthonormal basis of Hermitian matrices spanning the Hermitian part of a
/// *-closed span. Real combinations only, so Hermiticity is preserved.
std::vector<Cmat> hermitian_span_basis(const std::vector<Cmat>& ms,
                                       const TolerancePolicy& tol);

}  // namespace qms
