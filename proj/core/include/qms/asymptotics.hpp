#pragma once

#include <optional>
#include <vector>

#include "qms/qms_generator.hpp"

namespace qms {

/// One Liouvillian eigenvalue cluster with its (generalized) eigenspace.
struct SpectralCluster {
  Complex eigenvalue;                  // cluster centroid
  Eigen::Index algebraic_multiplicity = 0;
  std::vector<Cmat> generalized_space; // invariant-subspace basis, as operators
  std::vector<Cmat> eigenvectors;      // proper eigenvectors
  bool semisimple = false;             // geometric == algebraic
};

struct SpectralSplit {
  Eigen::Index dim = 0;                       // Hilbert-space d
  std::vector<SpectralCluster> clusters;
  std::vector<std::size_t> peripheral_indices; // |Re| <= eig_cluster_abs
  std::vector<std::size_t> stable_indices;     // Re < -eig_cluster_abs
  Cmat stable_subspace;      // orthonormal vectorized basis of the stable part
  Cmat peripheral_subspace;  // likewise for the peripheral part

  bool peripheral_semisimple() const {
    for (auto i : peripheral_indices)
      if (!clusters[i].semisimple) return false;
    return true;
  }
};

/// Cluster the Liouvillian spectrum and split it into the peripheral
/// (imaginary-axis) and stable (open left half-plane) parts.
SpectralSplit spectral_split(const GeneratorPair& g, const TolerancePolicy& tol);

struct InvariantStateSet {
  std::vector<Cmat> basis;          // orthonormal basis of ker L_* (Hermitian)
  std::optional<Cmat> distinguished; // normalized invariant state
  bool faithful = false;
  double min_eigenvalue = 0.0;      // of the distinguished state
};

/// Kernel of the predual generator plus a faithfulness decision. The
/// distinguished state is the ergodic average of the maximally mixed state,
/// which is faithful exactly when any faithful invariant state exists.
InvariantStateSet invariant_states(const GeneratorPair& g,
                                   const TolerancePolicy& tol);

/// Algebra generated by the peripheral eigenvectors. `closure_was_noop` is
/// set when the eigenvector span was already an algebra (guaranteed under a
/// faithful invariant state).
struct ReversibleAlgebra {
  OperatorAlgebra algebra;
  Eigen::Index span_dim = 0;     // dimension before algebra closure
  bool closure_was_noop = false;
  bool peripheral_semisimple = false;
};

ReversibleAlgebra reversible_algebra(const SpectralSplit& s,
                                     const TolerancePolicy& tol);

/// Basis of the sum of stable generalized eigenspaces.
std::vector<Cmat> stable_space(const SpectralSplit& s, const TolerancePolicy& tol);

/// Spectral gap: min |Re lambda| over stable clusters (0 when none).
double spectral_gap(const SpectralSplit& s);

/// Decay-certification horizon.
inline double decay_check_time(double gap) {
  return gap > 0.0 ? std::max(10.0, 20.0 / gap) : 10.0;
}

/// Spectral projection of L onto the eigenvalue-0 cluster along every other
/// generalized eigenspace (the conditional expectation onto F(T)).
Superoperator ergodic_projection(const GeneratorPair& g, const TolerancePolicy& tol);
/// Same projection for the predual generator (onto invariant states).
Superoperator ergodic_projection_predual(const GeneratorPair& g,
                                         const TolerancePolicy& tol);

/// Verdict record for the headline comparison of the decoherence-free and
/// reversible algebras.
struct NtMrVerdict {
  bool faithful = false;
  bool nt_equals_mr = false;       // asserted only when faithful
  bool mr_subset_nt = false;       // always reported
  bool peripheral_semisimple = false;
  OperatorAlgebra nt;
  OperatorAlgebra mr;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> blocks; // of N(T)
  std::vector<bool> block_is_factor;
};

NtMrVerdict verify_nt_equals_mr(const QmsModel& m, const TolerancePolicy& tol,
                                Rng& rng);

/// Central block structure of an invariant state: sigma = sum_i p_i sigma p_i
/// with normalized block states and weights.
struct InvariantBlock {
  Cmat projection;
  double weight = 0.0;
  Cmat state;  // normalized p sigma p / weight on the full space
};

std::vector<InvariantBlock> invariant_state_block_structure(
    const QmsModel& m, const Cmat& sigma, const TolerancePolicy& tol, Rng& rng);

}  // namespace qms
