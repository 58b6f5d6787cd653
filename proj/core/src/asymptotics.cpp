#include "qms/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

namespace qms {

namespace {

std::vector<std::vector<Eigen::Index>> cluster_complex(const Cvec& vals,
                                                       double radius) {
  const Eigen::Index n = vals.size();
  std::vector<Eigen::Index> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<Eigen::Index(Eigen::Index)> find = [&](Eigen::Index i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (std::abs(vals(i) - vals(j)) <= radius) parent[find(i)] = find(j);
  std::map<Eigen::Index, std::vector<Eigen::Index>> groups;
  for (Eigen::Index i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<Eigen::Index>> out;
  for (auto& [root, idx] : groups) out.push_back(std::move(idx));
  return out;
}

// Orthonormal basis of the invariant subspace for the selected eigenvalue
// positions, via Schur reordering.
Cmat invariant_subspace(const SchurDecomposition& base,
                        const std::vector<bool>& select) {
  SchurDecomposition s = base;
  const Eigen::Index m = schur_select(s, select);
  return s.Q.leftCols(m);
}

}  // namespace

SpectralSplit spectral_split(const GeneratorPair& g, const TolerancePolicy& tol) {
  const Eigen::Index d = g.heisenberg.dim;
  const Cmat& L = g.heisenberg.matrix;
  const Eigen::Index n = d * d;
  const SchurDecomposition base = schur(L);
  const Cvec diag = base.T.diagonal();

  auto groups = cluster_complex(diag, tol.eig_cluster_abs);
  // Deterministic order: peripheral first (Re descending), then Im ascending.
  std::vector<Complex> centroids(groups.size());
  for (std::size_t c = 0; c < groups.size(); ++c) {
    Complex sum = 0.0;
    for (auto i : groups[c]) sum += diag(i);
    centroids[c] = sum / static_cast<double>(groups[c].size());
  }
  std::vector<std::size_t> order(groups.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (std::abs(centroids[a].real() - centroids[b].real()) > 1e-14)
      return centroids[a].real() > centroids[b].real();
    return centroids[a].imag() < centroids[b].imag();
  });

  SpectralSplit out;
  out.dim = d;
  const double smax_L = L.norm();
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const auto& idx = groups[order[oi]];
    SpectralCluster cl;
    cl.eigenvalue = centroids[order[oi]];
    cl.algebraic_multiplicity = static_cast<Eigen::Index>(idx.size());
    if (cl.eigenvalue.real() > 100.0 * tol.eig_cluster_abs)
      throw Error("spectral_split: eigenvalue with positive real part; "
                  "input is not a valid Liouvillian");
    std::vector<bool> select(n, false);
    for (auto i : idx) select[i] = true;
    const Cmat sub = invariant_subspace(base, select);
    for (Eigen::Index j = 0; j < sub.cols(); ++j)
      cl.generalized_space.push_back(unvec(sub.col(j), d, d));
    // Proper eigenvectors; the cutoff tolerates intra-cluster splitting.
    Eigen::JacobiSVD<Cmat> svd(Cmat(L - cl.eigenvalue * Cmat::Identity(n, n)),
                               Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double thresh =
        std::max(tol.rank_rel * std::max(sv(0), smax_L), 3.0 * tol.eig_cluster_abs);
    Eigen::Index geo = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) <= thresh) ++geo;
    geo = std::min<Eigen::Index>(geo, cl.algebraic_multiplicity);
    for (Eigen::Index j = 0; j < geo; ++j)
      cl.eigenvectors.push_back(unvec(svd.matrixV().col(n - 1 - j), d, d));
    cl.semisimple =
        static_cast<Eigen::Index>(cl.eigenvectors.size()) == cl.algebraic_multiplicity;

    const bool peripheral = std::abs(cl.eigenvalue.real()) <= tol.eig_cluster_abs;
    if (peripheral)
      out.peripheral_indices.push_back(out.clusters.size());
    else
      out.stable_indices.push_back(out.clusters.size());
    out.clusters.push_back(std::move(cl));
  }

  std::vector<bool> stable_sel(n, false), periph_sel(n, false);
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool peripheral = std::abs(diag(i).real()) <= tol.eig_cluster_abs;
    (peripheral ? periph_sel : stable_sel)[i] = true;
  }
  out.stable_subspace = invariant_subspace(base, stable_sel);
  out.peripheral_subspace = invariant_subspace(base, periph_sel);
  return out;
}

double spectral_gap(const SpectralSplit& s) {
  double gap = 0.0;
  bool first = true;
  for (auto i : s.stable_indices) {
    const double re = -s.clusters[i].eigenvalue.real();
    gap = first ? re : std::min(gap, re);
    first = false;
  }
  return gap;
}

namespace {

// Projection onto the eigenvalue-0 generalized eigenspace along all others.
Cmat zero_spectral_projection(const Cmat& mat, const TolerancePolicy& tol) {
  const Eigen::Index n = mat.rows();
  const SchurDecomposition base = schur(mat);
  const Cvec diag = base.T.diagonal();
  std::vector<bool> zero_sel(n, false);
  Eigen::Index count = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(diag(i)) <= tol.eig_cluster_abs) {
      zero_sel[i] = true;
      ++count;
    }
  if (count == 0)
    throw ConvergenceFailure("ergodic_projection: no zero eigenvalue found");
  SchurDecomposition s = base;
  schur_select(s, zero_sel);
  // Columns of Q: invariant basis with the zero block leading. In that basis
  // the map is block upper triangular; the spectral projection is
  // M [I 0; 0 0] M^{-1} with M = [V0 | W], W a basis of the complementary
  // invariant subspace (leading columns after selecting the complement).
  const Cmat v0 = s.Q.leftCols(count);
  std::vector<bool> other(n, false);
  for (Eigen::Index i = 0; i < n; ++i) other[i] = !zero_sel[i];
  SchurDecomposition sc = base;
  const Eigen::Index mc = schur_select(sc, other);
  Cmat m(n, n);
  m.leftCols(count) = v0;
  m.rightCols(mc) = sc.Q.leftCols(mc);
  Cmat sel = Cmat::Zero(n, n);
  sel.topLeftCorner(count, count).setIdentity();
  return m * sel * m.inverse();
}

}  // namespace

Superoperator ergodic_projection(const GeneratorPair& g, const TolerancePolicy& tol) {
  return {g.heisenberg.dim, zero_spectral_projection(g.heisenberg.matrix, tol)};
}

Superoperator ergodic_projection_predual(const GeneratorPair& g,
                                         const TolerancePolicy& tol) {
  return {g.predual.dim, zero_spectral_projection(g.predual.matrix, tol)};
}

InvariantStateSet invariant_states(const GeneratorPair& g,
                                   const TolerancePolicy& tol) {
  const Eigen::Index d = g.predual.dim;
  InvariantStateSet out;
  const Cmat null = nullspace(g.predual.matrix, tol, 1.0);
  std::vector<Cmat> raw;
  for (Eigen::Index j = 0; j < null.cols(); ++j)
    raw.push_back(unvec(null.col(j), d, d));
  out.basis = hermitian_span_basis(raw, tol);

  // Ergodic average of the maximally mixed state. If any faithful invariant
  // state sigma exists then sigma <= d |sigma| (1/d), so positivity of the
  // average is equivalent to the existence of a faithful invariant state.
  const Superoperator e = ergodic_projection_predual(g, tol);
  Cmat sigma = e.apply(Cmat::Identity(d, d) / static_cast<double>(d));
  sigma = 0.5 * (sigma + sigma.adjoint());
  const double tr = sigma.trace().real();
  if (std::abs(tr - 1.0) > 1e-6)
    throw ConvergenceFailure("invariant_states: ergodic average lost trace");
  sigma /= tr;
  Eigen::SelfAdjointEigenSolver<Cmat> es(sigma);
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  out.faithful = out.min_eigenvalue >= tol.faithful_min_eig;
  out.distinguished = sigma;
  return out;
}

ReversibleAlgebra reversible_algebra(const SpectralSplit& s,
                                     const TolerancePolicy& tol) {
  std::vector<Cmat> eigvecs;
  for (auto i : s.peripheral_indices)
    for (const auto& v : s.clusters[i].eigenvectors) eigvecs.push_back(v);
  ReversibleAlgebra out;
  out.peripheral_semisimple = s.peripheral_semisimple();
  const auto span = orthonormal_span(eigvecs, tol);
  out.span_dim = static_cast<Eigen::Index>(span.size());
  out.algebra = generate_algebra(eigvecs, s.dim, tol);
  out.closure_was_noop = out.algebra.size() == out.span_dim;
  return out;
}

std::vector<Cmat> stable_space(const SpectralSplit& s, const TolerancePolicy& tol) {
  (void)tol;
  std::vector<Cmat> out;
  for (Eigen::Index j = 0; j < s.stable_subspace.cols(); ++j)
    out.push_back(unvec(s.stable_subspace.col(j), s.dim, s.dim));
  return out;
}

NtMrVerdict verify_nt_equals_mr(const QmsModel& m, const TolerancePolicy& tol,
                                Rng& rng) {
  const GeneratorPair g = build_generator(m, tol);
  NtMrVerdict out;
  out.nt = df_subalgebra(m, tol);
  const SpectralSplit split = spectral_split(g, tol);
  const ReversibleAlgebra rev = reversible_algebra(split, tol);
  out.mr = rev.algebra;
  out.peripheral_semisimple = rev.peripheral_semisimple;
  const InvariantStateSet inv = invariant_states(g, tol);
  out.faithful = inv.faithful;

  out.mr_subset_nt = true;
  for (const auto& x : out.mr.basis)
    if (!in_span(out.nt.basis, x, tol)) { out.mr_subset_nt = false; break; }
  out.nt_equals_mr = algebra_equal(out.nt, out.mr, tol);

  const BlockDecomposition dec = wedderburn(out.nt, tol, rng);
  out.blocks = dec.blocks;
  for (const auto& p : dec.central_projections) {
    const Cmat v = range_basis(p, tol);
    out.block_is_factor.push_back(is_factor(compress(out.nt, v, tol), tol));
  }
  return out;
}

std::vector<InvariantBlock> invariant_state_block_structure(
    const QmsModel& m, const Cmat& sigma, const TolerancePolicy& tol, Rng& rng) {
  const GeneratorPair g = build_generator(m, tol);
  const Cmat residual = g.predual.apply(sigma);
  if (residual.norm() > tol.residual * (1.0 + sigma.norm()))
    throw NotInvariant("invariant_state_block_structure: L_*(sigma) != 0");
  const InvariantStateSet inv = invariant_states(g, tol);
  if (!inv.faithful)
    throw NoFaithfulState(
        "invariant_state_block_structure: no faithful invariant state; "
        "the block-structure hypothesis is unmet");

  const OperatorAlgebra nt = df_subalgebra(m, tol);
  const std::vector<Cmat> ps = minimal_central_projections(nt, tol, rng);
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (std::size_t j = 0; j < ps.size(); ++j) {
      if (i == j) continue;
      const double mass = (ps[i] * sigma * ps[j]).norm();
      if (mass > tol.residual)
        throw Error("invariant_state_block_structure: off-diagonal block mass " +
                    std::to_string(mass));
    }
  std::vector<InvariantBlock> out;
  for (const auto& p : ps) {
    InvariantBlock b;
    b.projection = p;
    const Cmat blk = p * sigma * p;
    b.weight = blk.trace().real();
    b.state = b.weight > tol.residual ? Cmat(blk / b.weight)
                                      : Cmat::Zero(m.dim, m.dim);
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace qms
