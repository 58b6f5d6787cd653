#include "qms/structure.hpp"

#include <algorithm>
#include <cmath>

namespace qms {

namespace {

// Partial traces for a (k*m) x (k*m) block indexed (j, s) -> j*m + s.
Cmat partial_trace_first(const Cmat& b, Eigen::Index k, Eigen::Index m) {
  Cmat out = Cmat::Zero(m, m);
  for (Eigen::Index j = 0; j < k; ++j)
    out += b.block(j * m, j * m, m, m);
  return out;
}

Cmat partial_trace_second(const Cmat& b, Eigen::Index k, Eigen::Index m) {
  Cmat out = Cmat::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      for (Eigen::Index s = 0; s < m; ++s)
        out(i, j) += b(i * m + s, j * m + s);
  return out;
}

double off_block_mass(const Cmat& a, const BlockDecomposition& dec) {
  Cmat rest = a;
  Eigen::Index off = 0;
  for (const auto& [k, m] : dec.blocks) {
    rest.block(off, off, k * m, k * m).setZero();
    off += k * m;
  }
  return rest.norm();
}

// Assemble (+)_i blocks[i] into a full d x d matrix in the decomposed frame.
Cmat direct_sum(const std::vector<Cmat>& blocks) {
  Eigen::Index d = 0;
  for (const auto& b : blocks) d += b.rows();
  Cmat out = Cmat::Zero(d, d);
  Eigen::Index off = 0;
  for (const auto& b : blocks) {
    out.block(off, off, b.rows(), b.cols()) = b;
    off += b.rows();
  }
  return out;
}

}  // namespace

BlockLindbladData extract_block_data(const QmsModel& m,
                                     const BlockDecomposition& dec,
                                     const TolerancePolicy& tol) {
  const Eigen::Index d = m.dim;
  const Cmat& u = dec.U;
  const Cmat hc = u.adjoint() * m.hamiltonian * u;
  std::vector<Cmat> lc;
  for (const auto& l : m.lindblads) lc.push_back(u.adjoint() * l * u);

  BlockLindbladData out;
  out.decomposition = dec;
  double worst = off_block_mass(hc, dec);
  for (const auto& l : lc) worst = std::max(worst, off_block_mass(l, dec));
  const double scale = 1.0 + m.hamiltonian.norm();
  if (worst > tol.residual * scale)
    throw BlockMismatch(
        "extract_block_data: off-block mass " + std::to_string(worst) +
        "; the decomposition does not reduce the Lindblad data");

  Eigen::Index off = 0;
  for (const auto& [k, mm] : dec.blocks) {
    const Cmat bh = hc.block(off, off, k * mm, k * mm);
    // Kronecker-sum split with the gauge tr(H_i) = 0.
    Cmat hi = partial_trace_second(bh, k, mm);
    hi -= (hi.trace() / static_cast<double>(k)) * Cmat::Identity(k, k);
    hi /= static_cast<double>(mm);
    const Cmat n0 = partial_trace_first(bh, k, mm) / static_cast<double>(k);
    worst = std::max(worst, (bh - kron(hi, Cmat::Identity(mm, mm)) -
                             kron(Cmat::Identity(k, k), n0)).norm());
    std::vector<Cmat> nks;
    for (const auto& l : lc) {
      const Cmat bl = l.block(off, off, k * mm, k * mm);
      const Cmat nk = partial_trace_first(bl, k, mm) / static_cast<double>(k);
      worst = std::max(worst, (bl - kron(Cmat::Identity(k, k), nk)).norm());
      nks.push_back(nk);
    }
    out.hamiltonian_blocks.push_back(0.5 * (hi + hi.adjoint()));
    out.internal_hamiltonians.push_back(0.5 * (n0 + n0.adjoint()));
    out.lindblad_blocks.push_back(std::move(nks));
    off += k * mm;
  }
  (void)d;
  out.max_residual = worst;
  out.verified = worst <= tol.residual * scale;
  return out;
}

namespace {

Cmat df_hamiltonian(const BlockLindbladData& data) {
  std::vector<Cmat> blocks;
  for (std::size_t i = 0; i < data.decomposition.blocks.size(); ++i) {
    const auto [k, m] = data.decomposition.blocks[i];
    blocks.push_back(kron(data.hamiltonian_blocks[i], Cmat::Identity(m, m)));
  }
  const Cmat& u = data.decomposition.U;
  return u * direct_sum(blocks) * u.adjoint();
}

QmsModel da_model(const QmsModel& m, const BlockLindbladData& data) {
  std::vector<Cmat> hb, lbs;
  const std::size_t nl = m.lindblads.size();
  for (std::size_t i = 0; i < data.decomposition.blocks.size(); ++i) {
    const auto [k, mm] = data.decomposition.blocks[i];
    hb.push_back(kron(Cmat::Identity(k, k), data.internal_hamiltonians[i]));
  }
  const Cmat& u = data.decomposition.U;
  QmsModel da;
  da.dim = m.dim;
  da.hamiltonian = u * direct_sum(hb) * u.adjoint();
  for (std::size_t l = 0; l < nl; ++l) {
    std::vector<Cmat> parts;
    for (std::size_t i = 0; i < data.decomposition.blocks.size(); ++i) {
      const auto [k, mm] = data.decomposition.blocks[i];
      parts.push_back(kron(Cmat::Identity(k, k), data.lindblad_blocks[i][l]));
    }
    da.lindblads.push_back(u * direct_sum(parts) * u.adjoint());
  }
  da.label = m.label + " [decoherence-affected part]";
  return da;
}

}  // namespace

DfDaPair build_df_da_generators(const QmsModel& m, const BlockLindbladData& data,
                                const TolerancePolicy& tol) {
  const Eigen::Index d = m.dim;
  const Cmat hdf = df_hamiltonian(data);
  const Complex i_unit(0.0, 1.0);
  const Cmat id = Cmat::Identity(d, d);
  DfDaPair out;
  out.df = {d, i_unit * (kron(id, hdf) - kron(hdf.transpose(), id))};
  out.da = build_generator(da_model(m, data), tol).heisenberg;

  const Cmat full = build_generator(m, tol).heisenberg.matrix;
  out.commutation_residual =
      (out.df.matrix * out.da.matrix - out.da.matrix * out.df.matrix).norm();
  out.sum_residual = (full - out.df.matrix - out.da.matrix).norm();
  const double scale = 1.0 + out.df.matrix.norm() * (1.0 + out.da.matrix.norm());
  if (out.commutation_residual > tol.residual * scale ||
      out.sum_residual > tol.residual * (1.0 + full.norm()))
    throw CommutationFailure(
        "build_df_da_generators: split does not commute or does not sum to L");
  return out;
}

bool verify_df_action(const QmsModel& m, const BlockLindbladData& data,
                      const std::vector<double>& ts, const TolerancePolicy& tol) {
  const GeneratorPair g = build_generator(m, tol);
  const Cmat hdf = df_hamiltonian(data);
  const Complex i_unit(0.0, 1.0);
  const Eigen::Index d = m.dim;
  const Cmat& u = data.decomposition.U;

  // Component semigroups per block.
  std::vector<GeneratorPair> comps;
  for (std::size_t i = 0; i < data.decomposition.blocks.size(); ++i) {
    QmsModel c;
    c.dim = data.decomposition.blocks[i].second;
    c.hamiltonian = data.internal_hamiltonians[i];
    c.lindblads = data.lindblad_blocks[i];
    comps.push_back(build_generator(c, tol));
  }

  for (double t : ts) {
    const Cmat udf = expm_dense(i_unit * t * hdf);
    const Cmat full_exp = expm_dense(t * g.heisenberg.matrix);
    Eigen::Index off = 0;
    for (std::size_t i = 0; i < data.decomposition.blocks.size(); ++i) {
      const auto [k, mm] = data.decomposition.blocks[i];
      const Cmat uh = expm_dense(i_unit * t * data.hamiltonian_blocks[i]);
      const Cmat comp_exp = expm_dense(t * comps[i].heisenberg.matrix);
      // Spanning family of product matrix units, strided down to <= 64 pairs.
      const Eigen::Index total = k * k * mm * mm;
      const Eigen::Index stride = total <= 64 ? 1 : (total + 63) / 64;
      for (Eigen::Index idx = 0; idx < total; idx += stride) {
        const Eigen::Index ab = idx / (mm * mm), cd = idx % (mm * mm);
        Cmat x = Cmat::Zero(k, k);
        x(ab / k, ab % k) = 1.0;
        Cmat y = Cmat::Zero(mm, mm);
        y(cd / mm, cd % mm) = 1.0;
        Cmat emb = Cmat::Zero(d, d);
        emb.block(off, off, k * mm, k * mm) = kron(x, y);
        const Cmat obs = u * emb * u.adjoint();

        const Cmat lhs = unvec(full_exp * vec(obs), d, d);
        Cmat emb_rhs = Cmat::Zero(d, d);
        emb_rhs.block(off, off, k * mm, k * mm) =
            kron(Cmat(uh * x * uh.adjoint()), unvec(comp_exp * vec(y), mm, mm));
        const Cmat rhs = u * emb_rhs * u.adjoint();
        if ((lhs - rhs).norm() > tol.residual * (1.0 + obs.norm())) return false;

        // T^df as conjugation by e^{itH~}.
        const Cmat df_conj = udf * obs * udf.adjoint();
        Cmat emb_df = Cmat::Zero(d, d);
        emb_df.block(off, off, k * mm, k * mm) = kron(Cmat(uh * x * uh.adjoint()), y);
        const Cmat df_expect = u * emb_df * u.adjoint();
        if ((df_conj - df_expect).norm() > tol.residual * (1.0 + obs.norm()))
          return false;
      }
      off += k * mm;
    }
  }
  return true;
}

std::vector<bool> verify_component_triviality(const BlockLindbladData& data,
                                              const TolerancePolicy& tol) {
  std::vector<bool> out;
  for (std::size_t i = 0; i < data.decomposition.blocks.size(); ++i) {
    const Eigen::Index mm = data.decomposition.blocks[i].second;
    if (mm == 1) {
      out.push_back(true);
      continue;
    }
    QmsModel c;
    c.dim = mm;
    c.hamiltonian = data.internal_hamiltonians[i];
    c.lindblads = data.lindblad_blocks[i];
    const OperatorAlgebra nt = df_subalgebra(c, tol);
    out.push_back(nt.size() == 1 &&
                  in_span(nt.basis, Cmat(Cmat::Identity(mm, mm)), tol));
  }
  return out;
}

std::vector<CentralRestrictionVerdict> verify_central_block_restriction(
    const QmsModel& m, const TolerancePolicy& tol, Rng& rng) {
  const OperatorAlgebra nt = df_subalgebra(m, tol);
  const std::vector<Cmat> ps = minimal_central_projections(nt, tol, rng);
  std::vector<CentralRestrictionVerdict> out;
  for (const auto& p : ps) {
    CentralRestrictionVerdict v;
    v.projection = p;
    double worst = (p * m.hamiltonian - m.hamiltonian * p).norm();
    for (const auto& l : m.lindblads)
      worst = std::max(worst, (p * l - l * p).norm());
    v.decomposability_residual = worst;

    const Cmat vb = range_basis(p, tol);
    QmsModel comp;
    comp.dim = vb.cols();
    const Cmat hcomp = vb.adjoint() * m.hamiltonian * vb;
    comp.hamiltonian = 0.5 * (hcomp + hcomp.adjoint());
    for (const auto& l : m.lindblads) comp.lindblads.push_back(vb.adjoint() * l * vb);
    const OperatorAlgebra restricted = df_subalgebra(comp, tol);
    v.restriction_matches = algebra_equal(restricted, compress(nt, vb, tol), tol);
    out.push_back(std::move(v));
  }
  return out;
}

ReversibleBlockResult reversible_block_structure(const QmsModel& m,
                                                 const TolerancePolicy& tol,
                                                 Rng& rng) {
  const GeneratorPair g = build_generator(m, tol);
  const InvariantStateSet inv = invariant_states(g, tol);
  if (!inv.faithful)
    throw NoFaithfulState("reversible_block_structure: no faithful invariant state");
  const SpectralSplit split = spectral_split(g, tol);
  const ReversibleAlgebra rev = reversible_algebra(split, tol);
  const BlockDecomposition dec = wedderburn(rev.algebra, tol, rng);

  ReversibleBlockResult out;
  out.data = extract_block_data(m, dec, tol);
  for (const auto& h : out.data.hamiltonian_blocks)
    if (!is_hermitian(h, tol.hermitian * 100)) out.pure_point_hamiltonians = false;

  const OperatorAlgebra nt = df_subalgebra(m, tol);
  const BlockDecomposition nt_dec = wedderburn(nt, tol, rng);
  auto key = [](std::vector<std::pair<Eigen::Index, Eigen::Index>> b) {
    std::sort(b.begin(), b.end());
    return b;
  };
  out.matches_df_blocks = key(dec.blocks) == key(nt_dec.blocks) &&
                          algebra_equal(rev.algebra, nt, tol);
  return out;
}

}  // namespace qms
