#include "qms/star_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qms {

namespace {

Cmat commutator_map(const Cmat& a) {
  const Eigen::Index d = a.rows();
  return kron(Cmat::Identity(d, d), a) - kron(a.transpose(), Cmat::Identity(d, d));
}

// Orthonormal basis (over the reals) of the real span of Hermitian matrices.
// Real combinations keep Hermiticity, which complex SVD mixing would not.
std::vector<Cmat> hermitian_real_span(const std::vector<Cmat>& hs,
                                      const TolerancePolicy& tol) {
  if (hs.empty()) return {};
  const Eigen::Index d = hs[0].rows();
  Eigen::MatrixXd stack(2 * d * d, static_cast<Eigen::Index>(hs.size()));
  for (std::size_t k = 0; k < hs.size(); ++k) {
    const Cvec v = vec(hs[k]);
    stack.col(static_cast<Eigen::Index>(k)) << v.real(), v.imag();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stack, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  std::vector<Cmat> out;
  for (Eigen::Index i = 0; i < sv.size() && sv(i) > tol.rank_rel * smax; ++i) {
    Cvec v(d * d);
    v.real() = svd.matrixU().col(i).head(d * d);
    v.imag() = svd.matrixU().col(i).tail(d * d);
    out.push_back(unvec(v, d, d));
  }
  return out;
}

}  // namespace

std::vector<Cmat> hermitian_span_basis(const std::vector<Cmat>& ms,
                                       const TolerancePolicy& tol) {
  std::vector<Cmat> hs;
  hs.reserve(2 * ms.size());
  const Complex ihalf(0.0, 0.5);
  for (const auto& b : ms) {
    hs.push_back(0.5 * (b + b.adjoint()));
    hs.push_back(ihalf * (b.adjoint() - b));
  }
  return hermitian_real_span(hs, tol);
}

Cmat random_hermitian_element(const std::vector<Cmat>& basis, Rng& rng) {
  TolerancePolicy tol;  // structural defaults are fine for basis cleanup
  const auto hb = hermitian_span_basis(basis, tol);
  if (hb.empty()) throw Error("random_hermitian_element: empty span");
  Cmat g = Cmat::Zero(hb[0].rows(), hb[0].cols());
  for (const auto& h : hb) g += rng.gaussian() * h;
  return g;
}

OperatorAlgebra generate_algebra(const std::vector<Cmat>& generators,
                                 Eigen::Index dim, const TolerancePolicy& tol) {
  std::vector<Cmat> seed;
  seed.push_back(Cmat::Identity(dim, dim));
  for (const auto& g : generators) {
    if (g.rows() != dim || g.cols() != dim)
      throw ShapeMismatch("generate_algebra: generator has wrong shape");
    seed.push_back(g);
    seed.push_back(g.adjoint());
  }
  std::vector<Cmat> basis = orthonormal_span(seed, tol);
  const Eigen::Index cap = dim * dim;
  for (Eigen::Index iter = 0; iter < cap; ++iter) {
    std::vector<Cmat> cand = basis;
    for (const auto& x : basis)
      for (const auto& y : basis) cand.push_back(x * y);
    std::vector<Cmat> next = orthonormal_span(cand, tol);
    if (next.size() == basis.size()) break;  // closed under multiplication
    basis = std::move(next);
    if (static_cast<Eigen::Index>(basis.size()) >= cap) break;
  }
  return {dim, std::move(basis)};
}

OperatorAlgebra commutant(const std::vector<Cmat>& elements, Eigen::Index dim,
                          const TolerancePolicy& tol) {
  const Eigen::Index n = dim * dim;
  if (elements.empty()) {
    OperatorAlgebra full{dim, {}};
    Cmat id = Cmat::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      full.basis.push_back(unvec(id.col(i), dim, dim));
    return full;
  }
  Cmat stack(2 * static_cast<Eigen::Index>(elements.size()) * n, n);
  Eigen::Index row = 0;
  for (const auto& a : elements) {
    if (a.rows() != dim || a.cols() != dim)
      throw ShapeMismatch("commutant: element has wrong shape");
    stack.middleRows(row, n) = commutator_map(a);
    row += n;
    stack.middleRows(row, n) = commutator_map(Cmat(a.adjoint()));
    row += n;
  }
  const Cmat null = nullspace(stack, tol, 1.0);
  OperatorAlgebra out{dim, {}};
  for (Eigen::Index j = 0; j < null.cols(); ++j)
    out.basis.push_back(unvec(null.col(j), dim, dim));
  return out;
}

OperatorAlgebra commutant(const OperatorAlgebra& a, const TolerancePolicy& tol) {
  return commutant(a.basis, a.dim, tol);
}

OperatorAlgebra center(const OperatorAlgebra& a, const TolerancePolicy& tol) {
  const Eigen::Index d = a.dim, n = d * d;
  const Eigen::Index m = a.size();
  if (m == 0) return {d, {}};
  Cmat span(n, m);
  for (Eigen::Index j = 0; j < m; ++j) span.col(j) = vec(a.basis[j]);
  Cmat stack(n * m, m);
  for (Eigen::Index j = 0; j < m; ++j)
    stack.middleRows(j * n, n) = commutator_map(a.basis[j]) * span;
  const Cmat coeff = nullspace(stack, tol, 1.0);
  OperatorAlgebra out{d, {}};
  for (Eigen::Index j = 0; j < coeff.cols(); ++j)
    out.basis.push_back(unvec(span * coeff.col(j), d, d));
  return out;
}

bool algebra_equal(const OperatorAlgebra& a, const OperatorAlgebra& b,
                   const TolerancePolicy& tol) {
  if (a.dim != b.dim || a.size() != b.size()) return false;
  for (const auto& x : a.basis)
    if (!in_span(b.basis, x, tol)) return false;
  for (const auto& x : b.basis)
    if (!in_span(a.basis, x, tol)) return false;
  return true;
}

bool double_commutant_check(const OperatorAlgebra& a, const TolerancePolicy& tol) {
  return algebra_equal(commutant(commutant(a, tol), tol), a, tol);
}

bool center_of_commutant_identity(const OperatorAlgebra& m,
                                  const TolerancePolicy& tol) {
  const OperatorAlgebra zm = center(m, tol);
  const OperatorAlgebra rhs = center(commutant(zm, tol), tol);
  return algebra_equal(zm, rhs, tol);
}

double algebra_invariant_residual(const OperatorAlgebra& a,
                                  const TolerancePolicy& tol) {
  double worst = span_residual(a.basis, Cmat::Identity(a.dim, a.dim));
  const Eigen::Index m = a.size();
  for (Eigen::Index i = 0; i < m; ++i) {
    worst = std::max(worst, span_residual(a.basis, Cmat(a.basis[i].adjoint())));
    for (Eigen::Index j = 0; j < m; ++j) {
      worst = std::max(worst, span_residual(a.basis, Cmat(a.basis[i] * a.basis[j])));
      const Complex g = frobenius_inner(a.basis[i], a.basis[j]);
      worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  }
  (void)tol;
  return worst;
}

Cmat range_basis(const Cmat& p, const TolerancePolicy& tol) {
  const HermitianEig eig = eig_hermitian(p, tol);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i)
    if (eig.eigenvalues(i) > 0.5) ++rank;
  return eig.eigenvectors.rightCols(rank);
}

OperatorAlgebra compress(const OperatorAlgebra& a, const Cmat& v,
                         const TolerancePolicy& tol) {
  std::vector<Cmat> cs;
  cs.reserve(a.basis.size());
  for (const auto& b : a.basis) cs.push_back(v.adjoint() * b * v);
  return {v.cols(), orthonormal_span(cs, tol)};
}

bool is_factor(const OperatorAlgebra& a, const TolerancePolicy& tol) {
  return center(a, tol).size() == 1;
}

namespace {

struct EigenvalueClusters {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> ranges;  // [begin, end)
  double min_gap = std::numeric_limits<double>::infinity();
};

EigenvalueClusters cluster_ascending(const Rvec& vals, double radius) {
  EigenvalueClusters out;
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= vals.size(); ++i) {
    if (i == vals.size() || vals(i) - vals(i - 1) > radius) {
      out.ranges.emplace_back(start, i);
      if (i < vals.size())
        out.min_gap = std::min(out.min_gap, vals(i) - vals(i - 1));
      start = i;
    }
  }
  return out;
}

// Canonical order for projection lists: rank descending, then the real
// diagonal lexicographically (rounded to suppress noise).
bool projection_less(const Cmat& a, const Cmat& b) {
  const double ta = a.trace().real(), tb = b.trace().real();
  if (std::abs(ta - tb) > 0.5) return ta > tb;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double da = a(i, i).real(), db = b(i, i).real();
    if (std::abs(da - db) > 1e-7) return da > db;
  }
  return false;
}

}  // namespace

std::vector<Cmat> minimal_central_projections(const OperatorAlgebra& a,
                                              const TolerancePolicy& tol,
                                              Rng& rng) {
  const Eigen::Index d = a.dim;
  const OperatorAlgebra z = center(a, tol);
  const Eigen::Index r = z.size();
  if (r <= 1) return {Cmat::Identity(d, d)};
  const auto hb = hermitian_span_basis(z.basis, tol);
  const int max_retries = 30;
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Cmat g = Cmat::Zero(d, d);
    for (const auto& h : hb) g += rng.gaussian() * h;
    const HermitianEig eig = eig_hermitian(g, tol);
    const auto clusters = cluster_ascending(eig.eigenvalues, tol.eig_cluster_abs);
    if (static_cast<Eigen::Index>(clusters.ranges.size()) != r) continue;
    if (clusters.min_gap < 10.0 * tol.eig_cluster_abs) continue;
    std::vector<Cmat> ps;
    bool ok = true;
    for (const auto& [b, e] : clusters.ranges) {
      const Cmat v = eig.eigenvectors.middleCols(b, e - b);
      Cmat p = v * v.adjoint();
      if (span_residual(z.basis, p) > tol.residual * (1.0 + p.norm())) {
        ok = false;
        break;
      }
      ps.push_back(std::move(p));
    }
    if (!ok) continue;
    std::sort(ps.begin(), ps.end(), projection_less);
    return ps;
  }
  throw DegenerateCenter(
      "minimal_central_projections: eigenvalue clustering stayed ambiguous; "
      "tighten eig_cluster_abs");
}

namespace {

// Unitary W on the range of one central block such that every compressed
// algebra element becomes b (x) 1_m. Throws on persistent degeneracy.
Cmat factor_block_unitary(const OperatorAlgebra& ac, Eigen::Index k,
                          Eigen::Index m, const TolerancePolicy& tol, Rng& rng) {
  const Eigen::Index r = ac.dim;  // r = k * m
  if (k == 1) return Cmat::Identity(r, r);
  for (int attempt = 0; attempt < 30; ++attempt) {
    const Cmat a1 = random_hermitian_element(ac.basis, rng);
    const HermitianEig eig = eig_hermitian(a1, tol);
    const auto clusters = cluster_ascending(eig.eigenvalues, tol.eig_cluster_abs);
    if (static_cast<Eigen::Index>(clusters.ranges.size()) != k) continue;
    if (clusters.min_gap < 10.0 * tol.eig_cluster_abs) continue;
    bool sizes_ok = true;
    std::vector<Cmat> minimal;  // e_j, each rank m
    for (const auto& [b, e] : clusters.ranges) {
      if (e - b != m) { sizes_ok = false; break; }
      const Cmat v = eig.eigenvectors.middleCols(b, m);
      minimal.push_back(v * v.adjoint());
    }
    if (!sizes_ok) continue;

    const Cmat v1 = range_basis(minimal[0], tol);  // r x m
    // Generic (non-Hermitian) element to connect the minimal projections.
    Cmat a2 = Cmat::Zero(r, r);
    for (const auto& b : ac.basis) a2 += rng.complex_gaussian() * b;

    Cmat w(r, r);
    bool ok = true;
    for (Eigen::Index j = 0; j < k; ++j) {
      Cmat wj;
      if (j == 0) {
        wj = minimal[0];
      } else {
        const Cmat t = minimal[j] * a2 * minimal[0];
        Eigen::JacobiSVD<Cmat> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        if (sv(m - 1) <= 1e-8 * sv(0)) { ok = false; break; }
        wj = svd.matrixU().leftCols(m) * svd.matrixV().leftCols(m).adjoint();
      }
      for (Eigen::Index s = 0; s < m; ++s) w.col(j * m + s) = wj * v1.col(s);
    }
    if (!ok) continue;
    if (!is_unitary(w, tol.unitary * 100)) continue;
    // Verify the tensor shape on the whole basis before accepting.
    double worst = 0.0;
    for (const auto& b : ac.basis) {
      const Cmat c = w.adjoint() * b * w;
      Cmat small = Cmat::Zero(k, k);
      for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
          for (Eigen::Index s = 0; s < m; ++s)
            small(i, j) += c(i * m + s, j * m + s);
      small /= static_cast<double>(m);
      worst = std::max(worst, (c - kron(small, Cmat::Identity(m, m))).norm());
    }
    if (worst > tol.residual * 10) continue;
    return w;
  }
  throw DegenerateCenter("factor_block_unitary: failed to split a factor block");
}

}  // namespace

BlockDecomposition wedderburn(const OperatorAlgebra& a,
                              const TolerancePolicy& tol, Rng& rng) {
  const Eigen::Index d = a.dim;
  std::vector<Cmat> ps = minimal_central_projections(a, tol, rng);

  struct BlockPart {
    Eigen::Index k, m;
    Cmat columns;  // d x (k*m)
    Cmat p;
  };
  std::vector<BlockPart> parts;
  for (const auto& p : ps) {
    const Cmat v = range_basis(p, tol);
    const Eigen::Index r = v.cols();
    const OperatorAlgebra ac = compress(a, v, tol);
    const auto k = static_cast<Eigen::Index>(std::llround(std::sqrt(double(ac.size()))));
    if (k * k != ac.size() || r % k != 0)
      throw DegenerateCenter("wedderburn: block dimension accounting failed");
    const Eigen::Index m = r / k;
    const Cmat w = factor_block_unitary(ac, k, m, tol, rng);
    parts.push_back({k, m, v * w, p});
  }

  // Canonical block order: k descending, m descending, then the central
  // projection's diagonal lexicographically.
  std::sort(parts.begin(), parts.end(), [](const BlockPart& x, const BlockPart& y) {
    if (x.k != y.k) return x.k > y.k;
    if (x.m != y.m) return x.m > y.m;
    return projection_less(x.p, y.p);
  });

  BlockDecomposition dec;
  dec.U.resize(d, d);
  Eigen::Index off = 0;
  for (const auto& part : parts) {
    dec.U.middleCols(off, part.k * part.m) = part.columns;
    dec.blocks.emplace_back(part.k, part.m);
    dec.central_projections.push_back(part.p);
    off += part.k * part.m;
  }
  if (off != d) throw DegenerateCenter("wedderburn: blocks do not fill the space");
  return dec;
}

}  // namespace qms
