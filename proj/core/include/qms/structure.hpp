#pragma once

#include <vector>

#include "qms/asymptotics.hpp"
#include "qms/qms_generator.hpp"

namespace qms {

/// Per-block components of H and the Lindblad operators relative to a block
/// decomposition of the decoherence-free subalgebra:
///   U* Lk U |_i = 1_{k_i} (x) Nk_i,   U* H U |_i = H_i (x) 1 + 1 (x) N0_i,
/// with the gauge tr(H_i) = 0.
struct BlockLindbladData {
  BlockDecomposition decomposition;
  std::vector<Cmat> hamiltonian_blocks;         // H_i, k_i x k_i, traceless
  std::vector<Cmat> internal_hamiltonians;      // N0_i, m_i x m_i
  std::vector<std::vector<Cmat>> lindblad_blocks; // Nk_i[l], m_i x m_i
  double max_residual = 0.0;    // worst reconstruction/off-block residual
  bool verified = false;        // max_residual <= tol.residual
};

/// Extract the block components; throws BlockMismatch when off-block mass
/// exceeds tolerance.
BlockLindbladData extract_block_data(const QmsModel& m,
                                     const BlockDecomposition& dec,
                                     const TolerancePolicy& tol);

/// The commuting split L = L^df + L^da: L^df = i[(+) H_i (x) 1, .], L^da the
/// GKSL generator of the internal data. Checks commutation and the sum
/// identity; throws CommutationFailure.
struct DfDaPair {
  Superoperator df;
  Superoperator da;
  double commutation_residual = 0.0;
  double sum_residual = 0.0;
};

DfDaPair build_df_da_generators(const QmsModel& m, const BlockLindbladData& data,
                                const TolerancePolicy& tol);

/// T^df_t(x) = e^{itH~} x e^{-itH~} and the product-observable factorization
/// T_t(x (x) y) = e^{itH_i} x e^{-itH_i} (x) T^{m_i}_t(y), verified on a
/// spanning family at each sampled t.
bool verify_df_action(const QmsModel& m, const BlockLindbladData& data,
                      const std::vector<double>& ts, const TolerancePolicy& tol);

/// N(T^{m_i}) = C 1 for the internal model of each block.
std::vector<bool> verify_component_triviality(const BlockLindbladData& data,
                                              const TolerancePolicy& tol);

/// Per minimal central projection p of Z(N(T)): decomposability of {H, Lk}
/// ([p, H] = [p, Lk] = 0) and equality of the compressed decoherence-free
/// subalgebra with p N(T) p.
struct CentralRestrictionVerdict {
  Cmat projection;
  double decomposability_residual = 0.0;
  bool restriction_matches = false;
};

std::vector<CentralRestrictionVerdict> verify_central_block_restriction(
    const QmsModel& m, const TolerancePolicy& tol, Rng& rng);

/// Block data of the reversible algebra; under a faithful invariant state it
/// must coincide with the decoherence-free data. Throws NoFaithfulState.
struct ReversibleBlockResult {
  BlockLindbladData data;
  bool matches_df_blocks = false;  // same block multiset as N(T)
  bool pure_point_hamiltonians = true;  // Hermitian H_i (recorded, trivially so)
};

ReversibleBlockResult reversible_block_structure(const QmsModel& m,
                                                 const TolerancePolicy& tol,
                                                 Rng& rng);

}  // namespace qms
