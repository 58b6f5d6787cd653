#include "qms/qms_generator.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace qms {

void QmsModel::validate(const TolerancePolicy& tol) const {
  if (dim <= 0) throw ModelInvalid("model: dimension must be positive");
  if (hamiltonian.rows() != dim || hamiltonian.cols() != dim)
    throw ModelInvalid("model: H has wrong shape");
  if (!is_hermitian(hamiltonian, tol.hermitian))
    throw ModelInvalid("model: H is not Hermitian within tolerance");
  if (lindblads.empty())
    throw ModelInvalid("model: at least one Lindblad operator required");
  for (const auto& l : lindblads)
    if (l.rows() != dim || l.cols() != dim)
      throw ModelInvalid("model: Lindblad operator has wrong shape");
}

GeneratorPair build_generator(const QmsModel& m, const TolerancePolicy& tol) {
  m.validate(tol);
  const Eigen::Index d = m.dim, n = d * d;
  const Cmat id = Cmat::Identity(d, d);
  const Cmat& h = m.hamiltonian;
  const Complex i_unit(0.0, 1.0);

  // i delta_H : x -> i (H x - x H)
  const Cmat ad_h = kron(id, h) - kron(h.transpose(), id);
  Cmat heis = i_unit * ad_h;
  Cmat diss = Cmat::Zero(n, n);
  Cmat pred = -i_unit * ad_h;
  for (const auto& l : m.lindblads) {
    const Cmat ll = l.adjoint() * l;
    const Cmat anti = 0.5 * (kron(id, ll) + kron(ll.transpose(), id));
    diss += kron(l.transpose(), l.adjoint()) - anti;  // vec(L* x L) term
    pred += kron(l.conjugate(), l) - anti;            // vec(L rho L*) term
  }
  heis += diss;
  return {{d, heis}, {d, pred}, {d, i_unit * ad_h}, {d, diss}};
}

Cmat evolve_observable(const GeneratorPair& g, const Cmat& x, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw Error("evolve: t must be finite and >= 0");
  if (t == 0.0) return x;
  return unvec(Cmat((t * g.heisenberg.matrix).exp()) * vec(x),
               g.heisenberg.dim, g.heisenberg.dim);
}

Cmat evolve_state(const GeneratorPair& g, const Cmat& rho, double t,
                  const TolerancePolicy& tol) {
  if (!is_hermitian(rho, tol.hermitian))
    throw NotAState("evolve_state: rho is not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-6 || std::abs(rho.trace().imag()) > 1e-6)
    throw NotAState("evolve_state: rho does not have unit trace");
  Eigen::SelfAdjointEigenSolver<Cmat> es(0.5 * (rho + rho.adjoint()));
  if (es.eigenvalues().minCoeff() < -1e-8)
    throw NotAState("evolve_state: rho is not positive semidefinite");
  if (!(t >= 0.0) || !std::isfinite(t)) throw Error("evolve_state: bad t");
  if (t == 0.0) return rho;
  return unvec(Cmat((t * g.predual.matrix).exp()) * vec(rho),
               g.predual.dim, g.predual.dim);
}

namespace {

// Span of {delta_H^j(Lk), delta_H^j(Lk*)}, iterated until stable (at most d^2
// steps; growth is strictly monotone so stabilization is structural).
std::vector<Cmat> iterated_commutator_span(const QmsModel& m,
                                           const TolerancePolicy& tol) {
  std::vector<Cmat> current;
  for (const auto& l : m.lindblads) {
    current.push_back(l);
    current.push_back(l.adjoint());
  }
  std::vector<Cmat> span = orthonormal_span(current, tol);
  const Eigen::Index cap = m.dim * m.dim;
  for (Eigen::Index n = 0; n < cap; ++n) {
    std::vector<Cmat> next_layer;
    for (const auto& x : current)
      next_layer.push_back(m.hamiltonian * x - x * m.hamiltonian);
    std::vector<Cmat> cand = span;
    cand.insert(cand.end(), next_layer.begin(), next_layer.end());
    std::vector<Cmat> grown = orthonormal_span(cand, tol);
    if (grown.size() == span.size()) break;
    span = std::move(grown);
    current = std::move(next_layer);
  }
  return span;
}

}  // namespace

OperatorAlgebra df_subalgebra(const QmsModel& m, const TolerancePolicy& tol) {
  m.validate(tol);
  return commutant(iterated_commutator_span(m, tol), m.dim, tol);
}

bool df_membership_check(const QmsModel& m, const Cmat& x,
                         const std::vector<double>& ts,
                         const TolerancePolicy& tol) {
  const GeneratorPair g = build_generator(m, tol);
  for (double t : ts) {
    const Cmat tx = evolve_observable(g, x, t);
    const Cmat lhs1 = evolve_observable(g, Cmat(x.adjoint() * x), t);
    const Cmat lhs2 = evolve_observable(g, Cmat(x * x.adjoint()), t);
    const double scale = 1.0 + x.norm() * x.norm();
    if ((lhs1 - tx.adjoint() * tx).norm() > tol.residual * scale) return false;
    if ((lhs2 - tx * tx.adjoint()).norm() > tol.residual * scale) return false;
  }
  return true;
}

FixedPointResult fixed_point_algebra(const QmsModel& m, bool faithful_state_known,
                                     const TolerancePolicy& tol) {
  const GeneratorPair g = build_generator(m, tol);
  FixedPointResult out;
  const Cmat null = nullspace(g.heisenberg.matrix, tol, 1.0);
  for (Eigen::Index j = 0; j < null.cols(); ++j)
    out.space.push_back(unvec(null.col(j), m.dim, m.dim));

  std::vector<Cmat> gens = m.lindblads;
  gens.push_back(m.hamiltonian);
  out.commutant_form = commutant(gens, m.dim, tol);

  out.matches_commutant =
      out.space.size() == out.commutant_form.basis.size() &&
      [&] {
        for (const auto& b : out.commutant_form.basis)
          if (!in_span(out.space, b, tol)) return false;
        return true;
      }();

  out.is_algebra = [&] {
    for (const auto& x : out.space) {
      if (!in_span(out.space, Cmat(x.adjoint()), tol)) return false;
      for (const auto& y : out.space)
        if (!in_span(out.space, Cmat(x * y), tol)) return false;
    }
    return true;
  }();

  if (faithful_state_known && !out.matches_commutant)
    throw Error("fixed_point_algebra: ker L does not match the commutant "
                "despite a faithful invariant state");
  return out;
}

bool automorphism_check(const QmsModel& m, const GeneratorPair& g,
                        const OperatorAlgebra& a, const std::vector<double>& ts,
                        const TolerancePolicy& tol) {
  const Complex i_unit(0.0, 1.0);
  for (double t : ts) {
    const Cmat u = expm_dense(i_unit * t * m.hamiltonian);
    for (const auto& x : a.basis) {
      const Cmat lhs = evolve_observable(g, x, t);
      const Cmat rhs = u * x * u.adjoint();
      if ((lhs - rhs).norm() > tol.residual * (1.0 + x.norm())) return false;
    }
  }
  return true;
}

}  // namespace qms
