#include "qms/sampling.hpp"

#include <cmath>

namespace qms {

Cmat random_complex_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Cmat out(rows, cols);
  const double s = 1.0 / std::sqrt(2.0);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = s * rng.complex_gaussian();
  return out;
}

Cmat random_unitary(Eigen::Index dim, Rng& rng) {
  const Cmat g = random_complex_matrix(dim, dim, rng);
  Eigen::HouseholderQR<Cmat> qr(g);
  Cmat q = qr.householderQ();
  const Cmat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Complex z = r(j, j);
    if (std::abs(z) > 0) q.col(j) *= z / std::abs(z);
  }
  return q;
}

QmsModel sample_gue_model(Eigen::Index dim, int n_lindblads, Rng& rng) {
  QmsModel m;
  m.dim = dim;
  const Cmat g = random_complex_matrix(dim, dim, rng);
  Cmat h = 0.5 * (g + g.adjoint());
  h /= std::max(1e-12, h.norm());
  m.hamiltonian = h;
  for (int k = 0; k < n_lindblads; ++k) {
    Cmat l = random_complex_matrix(dim, dim, rng);
    l /= std::max(1e-12, l.norm());
    m.lindblads.push_back(std::move(l));
  }
  m.label = "gue";
  return m;
}

DetailedBalanceSample sample_detailed_balance_model(Eigen::Index dim, Rng& rng) {
  // Spectrum of the invariant state; repeated values with probability 1/2 to
  // exercise higher-dimensional decoherence-free blocks.
  Rvec r(dim);
  if (rng.uniform() < 0.5 && dim >= 3) {
    const Eigen::Index distinct = 1 + static_cast<Eigen::Index>(rng.below(dim - 1));
    Rvec values(distinct);
    for (Eigen::Index i = 0; i < distinct; ++i)
      values(i) = std::exp(0.8 * rng.gaussian());
    for (Eigen::Index i = 0; i < dim; ++i)
      r(i) = values(static_cast<Eigen::Index>(rng.below(distinct)));
  } else {
    for (Eigen::Index i = 0; i < dim; ++i) r(i) = std::exp(0.8 * rng.gaussian());
  }
  r = (r.array() + 0.05 * r.maxCoeff()).matrix();
  r /= r.sum();

  const Cmat u = random_unitary(dim, rng);

  DetailedBalanceSample out;
  out.model.dim = dim;
  out.model.label = "detailed-balance";
  // H commuting with the invariant state.
  Rvec h(dim);
  for (Eigen::Index i = 0; i < dim; ++i) h(i) = rng.gaussian();
  out.model.hamiltonian = u * h.asDiagonal() * u.adjoint();
  out.model.hamiltonian =
      0.5 * (out.model.hamiltonian + out.model.hamiltonian.adjoint());

  // Rate-balanced jump pairs between eigenvectors of the invariant state:
  // (sqrt(g) |i><j|, sqrt(g r_j / r_i) |j><i|) leaves diag(r) invariant.
  const auto n_pairs = static_cast<Eigen::Index>(1 + rng.below(dim));
  for (Eigen::Index p = 0; p < n_pairs; ++p) {
    const auto i = static_cast<Eigen::Index>(rng.below(dim));
    auto j = static_cast<Eigen::Index>(rng.below(dim));
    if (j == i) j = (j + 1) % dim;
    const double gamma = std::exp(0.5 * rng.gaussian());
    Cmat up = Cmat::Zero(dim, dim), down = Cmat::Zero(dim, dim);
    up(i, j) = std::sqrt(gamma);
    down(j, i) = std::sqrt(gamma * r(j) / r(i));
    out.model.lindblads.push_back(u * up * u.adjoint());
    out.model.lindblads.push_back(u * down * u.adjoint());
  }
  out.invariant_state = u * r.asDiagonal() * u.adjoint();
  out.invariant_state = 0.5 * (out.invariant_state + out.invariant_state.adjoint());
  return out;
}

BlockModelSample sample_block_model(Eigen::Index max_dim, int n_lindblads,
                                    Rng& rng, const TolerancePolicy& tol) {
  BlockModelSample out;
  for (int attempt = 0; attempt < 100; ++attempt) {
    out.blocks.clear();
    const auto nb = static_cast<Eigen::Index>(1 + rng.below(3));
    Eigen::Index total = 0;
    for (Eigen::Index b = 0; b < nb; ++b) {
      const auto k = static_cast<Eigen::Index>(1 + rng.below(3));
      const auto m = static_cast<Eigen::Index>(1 + rng.below(3));
      out.blocks.emplace_back(k, m);
      total += k * m;
    }
    if (total >= 2 && total <= max_dim) break;
  }
  Eigen::Index d = 0;
  for (const auto& [k, m] : out.blocks) d += k * m;

  out.hamiltonian_blocks.clear();
  out.internal_hamiltonians.clear();
  out.lindblad_blocks.clear();
  for (const auto& [k, m] : out.blocks) {
    Cmat g = random_complex_matrix(k, k, rng);
    Cmat hi = 0.5 * (g + g.adjoint());
    hi -= (hi.trace() / static_cast<double>(k)) * Cmat::Identity(k, k);
    out.hamiltonian_blocks.push_back(hi);

    // Internal data resampled until its own decoherence-free subalgebra is
    // trivial, so the constructed signature is exactly the one recovered.
    for (int attempt = 0;; ++attempt) {
      Cmat gn = random_complex_matrix(m, m, rng);
      Cmat n0 = 0.5 * (gn + gn.adjoint());
      std::vector<Cmat> nks;
      for (int l = 0; l < n_lindblads; ++l)
        nks.push_back(random_complex_matrix(m, m, rng) / std::sqrt(double(m)));
      if (m > 1) {
        QmsModel comp;
        comp.dim = m;
        comp.hamiltonian = n0;
        comp.lindblads = nks;
        if (df_subalgebra(comp, tol).size() != 1 && attempt < 20) continue;
      }
      out.internal_hamiltonians.push_back(std::move(n0));
      out.lindblad_blocks.push_back(std::move(nks));
      break;
    }
  }

  Cmat hfull = Cmat::Zero(d, d);
  std::vector<Cmat> lfull(static_cast<std::size_t>(n_lindblads), Cmat::Zero(d, d));
  Eigen::Index off = 0;
  for (std::size_t b = 0; b < out.blocks.size(); ++b) {
    const auto [k, m] = out.blocks[b];
    hfull.block(off, off, k * m, k * m) =
        kron(out.hamiltonian_blocks[b], Cmat::Identity(m, m)) +
        kron(Cmat::Identity(k, k), out.internal_hamiltonians[b]);
    for (int l = 0; l < n_lindblads; ++l)
      lfull[static_cast<std::size_t>(l)].block(off, off, k * m, k * m) =
          kron(Cmat::Identity(k, k), out.lindblad_blocks[b][static_cast<std::size_t>(l)]);
    off += k * m;
  }

  out.unitary = random_unitary(d, rng);
  out.model.dim = d;
  out.model.hamiltonian = out.unitary * hfull * out.unitary.adjoint();
  out.model.hamiltonian =
      0.5 * (out.model.hamiltonian + out.model.hamiltonian.adjoint());
  for (int l = 0; l < n_lindblads; ++l)
    out.model.lindblads.push_back(out.unitary * lfull[static_cast<std::size_t>(l)] *
                                  out.unitary.adjoint());
  out.model.label = "constructed-block";
  return out;
}

}  // namespace qms
