#include "qms/matrix_core.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

namespace qms {

Cmat kron(const Cmat& a, const Cmat& b) {
  Cmat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Superoperator sandwich_superop(const Cmat& a, const Cmat& b) {
  return {a.rows(), kron(b.transpose(), a)};
}

Superoperator left_mult_superop(const Cmat& a) {
  const Eigen::Index d = a.rows();
  return {d, kron(Cmat::Identity(d, d), a)};
}

Superoperator right_mult_superop(const Cmat& b) {
  const Eigen::Index d = b.rows();
  return {d, kron(b.transpose(), Cmat::Identity(d, d))};
}

Complex frobenius_inner(const Cmat& a, const Cmat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeMismatch("frobenius_inner: shapes differ");
  return (a.adjoint() * b).trace();
}

bool is_hermitian(const Cmat& a, double tol_rel) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.norm());
  return (a - a.adjoint()).norm() <= tol_rel * scale;
}

bool is_unitary(const Cmat& u, double tol_abs) {
  if (u.rows() != u.cols()) return false;
  const Eigen::Index d = u.rows();
  return (u.adjoint() * u - Cmat::Identity(d, d)).norm() <= tol_abs * std::sqrt(double(d));
}

namespace {

// Deterministic basis for a degenerate eigenspace: modified Gram-Schmidt of
// the projected identity columns in index order, then a real-positive phase
// on the largest-modulus entry.
Cmat canonicalize_subspace(const Cmat& basis) {
  const Eigen::Index d = basis.rows();
  const Eigen::Index m = basis.cols();
  if (m <= 0) return basis;
  const Cmat proj = basis * basis.adjoint();
  Cmat out(d, m);
  Eigen::Index got = 0;
  for (Eigen::Index i = 0; i < d && got < m; ++i) {
    Cvec w = proj.col(i);  // proj * e_i
    for (Eigen::Index j = 0; j < got; ++j)
      w -= out.col(j).dot(w) * out.col(j);
    const double n = w.norm();
    if (n > 1e-8) out.col(got++) = w / n;
  }
  // The projected identity columns always furnish a full basis of the range;
  // fall back to the original vectors if cancellation got in the way.
  for (Eigen::Index j = 0; got < m && j < m; ++j) {
    Cvec w = basis.col(j);
    for (Eigen::Index r = 0; r < got; ++r)
      w -= out.col(r).dot(w) * out.col(r);
    const double n = w.norm();
    if (n > 1e-10) out.col(got++) = w / n;
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      const double v = std::abs(out(i, j));
      if (v > best + 1e-14) { best = v; imax = i; }
    }
    const Complex z = out(imax, j);
    if (std::abs(z) > 0) out.col(j) *= std::conj(z) / std::abs(z);
  }
  return out;
}

}  // namespace

HermitianEig eig_hermitian(const Cmat& a, const TolerancePolicy& tol) {
  if (a.rows() != a.cols()) throw NotHermitian("eig_hermitian: matrix not square");
  if (!is_hermitian(a, tol.hermitian))
    throw NotHermitian("eig_hermitian: matrix not Hermitian within tolerance");
  const Cmat h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Cmat> es(h);
  if (es.info() != Eigen::Success)
    throw ConvergenceFailure("eig_hermitian: eigensolver failed");
  HermitianEig out{es.eigenvalues(), es.eigenvectors()};
  // Canonicalize within eigenvalue clusters.
  const Eigen::Index d = h.rows();
  Eigen::Index start = 0;
  while (start < d) {
    Eigen::Index end = start + 1;
    while (end < d &&
           out.eigenvalues(end) - out.eigenvalues(end - 1) <= tol.eig_cluster_abs)
      ++end;
    out.eigenvectors.middleCols(start, end - start) =
        canonicalize_subspace(out.eigenvectors.middleCols(start, end - start));
    start = end;
  }
  return out;
}

SchurDecomposition schur(const Cmat& a) {
  if (a.rows() != a.cols()) throw ShapeMismatch("schur: matrix not square");
  Eigen::ComplexSchur<Cmat> cs(a, /*computeU=*/true);
  if (cs.info() != Eigen::Success)
    throw ConvergenceFailure("schur: iteration cap exceeded");
  return {cs.matrixU(), cs.matrixT()};
}

namespace {

// Swap the diagonal entries at positions i, i+1 of an upper-triangular T by a
// unitary similarity, accumulating into Q.
void schur_swap(SchurDecomposition& s, Eigen::Index i) {
  Cmat& T = s.T;
  Cmat& Q = s.Q;
  const Complex a = T(i, i), b = T(i, i + 1), c = T(i + 1, i + 1);
  const double r = std::sqrt(std::norm(b) + std::norm(c - a));
  if (r <= 1e-300) return;  // identical eigenvalues, nothing to move
  Cmat g(2, 2);
  g(0, 0) = b / r;       g(0, 1) = -std::conj((c - a) / r);
  g(1, 0) = (c - a) / r; g(1, 1) = std::conj(b / r);
  T.middleRows(i, 2) = g.adjoint() * T.middleRows(i, 2);
  T.middleCols(i, 2) = T.middleCols(i, 2) * g;
  Q.middleCols(i, 2) = Q.middleCols(i, 2) * g;
  T(i + 1, i) = 0.0;
}

}  // namespace

Eigen::Index schur_select(SchurDecomposition& s, const std::vector<bool>& select) {
  const Eigen::Index n = s.T.rows();
  std::vector<bool> sel = select;
  Eigen::Index target = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!sel[j]) continue;
    for (Eigen::Index k = j; k > target; --k) {
      schur_swap(s, k - 1);
      std::swap(sel[k - 1], sel[k]);
    }
    ++target;
  }
  return target;
}

Cmat nullspace(const Cmat& a, const TolerancePolicy& tol, double scale) {
  const Eigen::Index n = a.cols();
  Eigen::JacobiSVD<Cmat> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double cutoff = tol.rank_rel * std::max(smax, scale);
  if (cutoff <= 0.0) return Cmat::Identity(n, n);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

Cmat smallest_singular_subspace(const Cmat& a, Eigen::Index count) {
  Eigen::JacobiSVD<Cmat> svd(a, Eigen::ComputeFullV);
  return svd.matrixV().rightCols(count);
}

Cmat expm_dense(const Cmat& a) { return a.exp(); }

Superoperator expm(const Superoperator& s, double t) {
  if (!std::isfinite(t)) throw Error("expm: non-finite time");
  return {s.dim, Cmat((t * s.matrix).exp())};
}

std::vector<Cmat> orthonormal_span(const std::vector<Cmat>& ms,
                                   const TolerancePolicy& tol) {
  if (ms.empty()) return {};
  const Eigen::Index rows = ms[0].rows(), cols = ms[0].cols();
  Cmat stack(rows * cols, static_cast<Eigen::Index>(ms.size()));
  for (std::size_t k = 0; k < ms.size(); ++k) {
    if (ms[k].rows() != rows || ms[k].cols() != cols)
      throw ShapeMismatch("orthonormal_span: inconsistent shapes");
    stack.col(static_cast<Eigen::Index>(k)) = vec(ms[k]);
  }
  Eigen::JacobiSVD<Cmat> svd(stack, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  std::vector<Cmat> out;
  if (smax <= 0.0) return out;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol.rank_rel * smax)
      out.push_back(unvec(svd.matrixU().col(i), rows, cols));
  return out;
}

double span_residual(const std::vector<Cmat>& basis, const Cmat& x) {
  Cmat r = x;
  for (const auto& b : basis) r -= frobenius_inner(b, x) * b;
  return r.norm();
}

bool in_span(const std::vector<Cmat>& basis, const Cmat& x,
             const TolerancePolicy& tol) {
  return span_residual(basis, x) <= tol.residual * (1.0 + x.norm());
}

}  // namespace qms
