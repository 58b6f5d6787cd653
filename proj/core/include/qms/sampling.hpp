#pragma once

#include "qms/qms_generator.hpp"
#include "qms/rng.hpp"

namespace qms {

/// Gaussian-ensemble model: H GUE scaled to |H| ~ 1, Lindblad operators with
/// independent complex Gaussian entries scaled to |L| ~ 1.
QmsModel sample_gue_model(Eigen::Index dim, int n_lindblads, Rng& rng);

/// Detailed-balance model with a prescribed faithful invariant state: jump
/// operators come in rate-balanced pairs between eigenvectors of a random
/// faithful density, so the density is invariant by construction. With some
/// probability the density has repeated eigenvalues, which produces
/// higher-dimensional decoherence-free blocks.
struct DetailedBalanceSample {
  QmsModel model;
  Cmat invariant_state;  // faithful by construction
};

DetailedBalanceSample sample_detailed_balance_model(Eigen::Index dim, Rng& rng);

/// Random block model for the structure-theorem round trip: a block signature
/// with sum k_i * m_i <= max_dim, random per-block data with trivial internal
/// commutant (resampled until so), scrambled by a Haar-ish unitary.
struct BlockModelSample {
  QmsModel model;
  Cmat unitary;  // scrambling U
  std::vector<std::pair<Eigen::Index, Eigen::Index>> blocks;
  std::vector<Cmat> hamiltonian_blocks;    // H_i (traceless)
  std::vector<Cmat> internal_hamiltonians; // N0_i
  std::vector<std::vector<Cmat>> lindblad_blocks;
};

BlockModelSample sample_block_model(Eigen::Index max_dim, int n_lindblads,
                                    Rng& rng, const TolerancePolicy& tol);

/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
Cmat random_unitary(Eigen::Index dim, Rng& rng);

Cmat random_complex_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng);

}  // namespace qms
