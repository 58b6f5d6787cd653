#pragma once

#include <string>
#include <vector>

#include "qms/matrix_core.hpp"
#include "qms/star_algebra.hpp"

namespace qms {

/// Lindblad model data {H, L_k}. All structural outputs downstream are
/// representation-independent; the model is kept verbatim.
struct QmsModel {
  Eigen::Index dim = 0;
  Cmat hamiltonian;            // Hermitian
  std::vector<Cmat> lindblads; // non-empty
  std::string label;

  void validate(const TolerancePolicy& tol) const;
};

/// Heisenberg generator, its predual, and the Hamiltonian/dissipative split
/// L = i delta_H + L_0.
struct GeneratorPair {
  Superoperator heisenberg;       // L
  Superoperator predual;          // L_*
  Superoperator hamiltonian_part; // i delta_H
  Superoperator dissipative_part; // L_0
};

/// L(x) = i[H,x] - (1/2) sum_k (Lk* Lk x - 2 Lk* x Lk + x Lk* Lk) and its
/// predual, assembled under the column-stacking vec contract.
GeneratorPair build_generator(const QmsModel& m, const TolerancePolicy& tol);

/// T_t(x) = e^{tL} x.
Cmat evolve_observable(const GeneratorPair& g, const Cmat& x, double t);

/// T_{*t}(rho); checks rho is a state.
Cmat evolve_state(const GeneratorPair& g, const Cmat& rho, double t,
                  const TolerancePolicy& tol);

/// Decoherence-free subalgebra: commutant of the iterated commutators
/// {delta_H^n(Lk), delta_H^n(Lk*)}, with the iteration stopped when the span
/// stabilizes.
OperatorAlgebra df_subalgebra(const QmsModel& m, const TolerancePolicy& tol);

/// Dynamical membership test: T_t(x*x) = T_t(x)*T_t(x) and the xx* twin at
/// each sampled t.
bool df_membership_check(const QmsModel& m, const Cmat& x,
                         const std::vector<double>& ts,
                         const TolerancePolicy& tol);

/// Kernel of L, plus the algebraic cross-check commutant({H, Lk, Lk*}).
struct FixedPointResult {
  std::vector<Cmat> space;        // orthonormal basis of ker L
  OperatorAlgebra commutant_form; // commutant of {H, Lk, Lk*}
  bool is_algebra = false;        // span closed under products and adjoints
  bool matches_commutant = false; // ker L == commutant as subspaces
};

FixedPointResult fixed_point_algebra(const QmsModel& m, bool faithful_state_known,
                                     const TolerancePolicy& tol);

/// T_t(x) = e^{itH} x e^{-itH} for x in the decoherence-free subalgebra.
bool automorphism_check(const QmsModel& m, const GeneratorPair& g,
                        const OperatorAlgebra& a, const std::vector<double>& ts,
                        const TolerancePolicy& tol);

/// Default sampled time grid for dynamical checks.
inline std::vector<double> default_time_grid() { return {0.1, 0.5, 1.0, 5.0}; }

}  // namespace qms
