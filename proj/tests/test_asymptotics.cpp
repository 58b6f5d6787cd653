#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "qms/asymptotics.hpp"
#include "qms/sampling.hpp"

using namespace qms;

namespace {

const TolerancePolicy kTol;

QmsModel dephasing(double gamma) {
  QmsModel m;
  m.dim = 2;
  m.hamiltonian = Cmat::Zero(2, 2);
  Cmat sz(2, 2);
  sz << 1, 0, 0, -1;
  m.lindblads = {std::sqrt(gamma) * sz};
  return m;
}

QmsModel amplitude_damping(double gamma) {
  QmsModel m;
  m.dim = 2;
  m.hamiltonian = Cmat::Zero(2, 2);
  Cmat sm = Cmat::Zero(2, 2);
  sm(0, 1) = std::sqrt(gamma);
  m.lindblads = {sm};
  return m;
}

QmsModel unitary_only(Eigen::Index d, std::uint64_t seed) {
  QmsModel m;
  m.dim = d;
  Rng rng(seed);
  const Cmat a = random_complex_matrix(d, d, rng);
  m.hamiltonian = a + a.adjoint();
  m.lindblads = {Cmat::Identity(d, d)};
  return m;
}

}  // namespace

TEST_CASE("dephasing spectrum is {0, 0, -2, -2}") {
  const auto g = build_generator(dephasing(1.0), kTol);
  const auto s = spectral_split(g, kTol);
  REQUIRE(s.clusters.size() == 2);
  CHECK(std::abs(s.clusters[0].eigenvalue) < 1e-10);
  CHECK(std::abs(s.clusters[1].eigenvalue - Complex(-2.0, 0.0)) < 1e-10);
  CHECK(s.clusters[0].algebraic_multiplicity == 2);
  CHECK(s.clusters[1].algebraic_multiplicity == 2);
  CHECK(s.peripheral_indices == std::vector<std::size_t>{0});
  CHECK(s.stable_indices == std::vector<std::size_t>{1});
  CHECK(s.clusters[0].semisimple);
  CHECK(s.clusters[1].semisimple);
  CHECK(spectral_gap(s) == doctest::Approx(2.0));
  CHECK(stable_space(s, kTol).size() == 2);
}

TEST_CASE("generalized eigenspaces are invariant subspaces") {
  Rng rng(31);
  const auto m = sample_gue_model(3, 2, rng);
  const auto g = build_generator(m, kTol);
  const auto s = spectral_split(g, kTol);
  Eigen::Index total = 0;
  for (const auto& c : s.clusters) {
    total += c.algebraic_multiplicity;
    REQUIRE(static_cast<Eigen::Index>(c.generalized_space.size()) ==
            c.algebraic_multiplicity);
    // L maps the generalized eigenspace into itself
    for (const auto& v : c.generalized_space) {
      const Cmat lv = g.heisenberg.apply(v);
      CHECK(span_residual(c.generalized_space, lv) < 1e-7 * (1.0 + fro(lv)));
    }
    // proper eigenvectors really are eigenvectors
    for (const auto& v : c.eigenvectors) {
      const Cmat r = g.heisenberg.apply(v) - c.eigenvalue * v;
      CHECK(fro(r) < 1e-6);
    }
  }
  CHECK(total == 9);
}

TEST_CASE("purely imaginary spectrum for unitary dynamics") {
  const auto m = unitary_only(3, 32);
  const auto g = build_generator(m, kTol);
  const auto s = spectral_split(g, kTol);
  CHECK(s.stable_indices.empty());
  for (const auto& c : s.clusters)
    CHECK(std::abs(c.eigenvalue.real()) < 1e-9);
  CHECK(spectral_gap(s) == 0.0);
  CHECK(s.peripheral_semisimple());
}

TEST_CASE("invariant states of dephasing: abelian kernel, faithful average") {
  const auto g = build_generator(dephasing(1.0), kTol);
  const auto inv = invariant_states(g, kTol);
  CHECK(inv.basis.size() == 2);
  REQUIRE(inv.distinguished.has_value());
  CHECK(fro(*inv.distinguished - 0.5 * Cmat::Identity(2, 2)) < 1e-10);
  CHECK(inv.faithful);
  CHECK(inv.min_eigenvalue == doctest::Approx(0.5));
}

TEST_CASE("amplitude damping has a unique non-faithful invariant state") {
  const auto g = build_generator(amplitude_damping(1.0), kTol);
  const auto inv = invariant_states(g, kTol);
  CHECK(inv.basis.size() == 1);
  REQUIRE(inv.distinguished.has_value());
  Cmat ground = Cmat::Zero(2, 2);
  ground(0, 0) = 1.0;
  CHECK(fro(*inv.distinguished - ground) < 1e-9);
  CHECK(!inv.faithful);
}

TEST_CASE("ergodic projection of dephasing is the diagonal pinching") {
  const auto g = build_generator(dephasing(1.0), kTol);
  const auto e = ergodic_projection(g, kTol);

  Cmat x(2, 2);
  x << 0.3, Complex(1, 2), Complex(-4, 1), -0.9;
  Cmat pinched = x;
  pinched(0, 1) = pinched(1, 0) = 0.0;
  CHECK(fro(e.apply(x) - pinched) < 1e-10);

  // idempotent, commutes with L, kills L
  CHECK(fro(e.matrix * e.matrix - e.matrix) < 1e-10);
  CHECK(fro(e.matrix * g.heisenberg.matrix) < 1e-10);
  CHECK(fro(g.heisenberg.matrix * e.matrix) < 1e-10);

  // independent oracle: long-time limit of the semigroup
  const auto far = expm(g.heisenberg, 20.0);
  CHECK(fro(e.matrix - far.matrix) < 1e-8);
}

TEST_CASE("predual ergodic projection lands on invariant states") {
  Rng rng(33);
  const auto m = sample_gue_model(3, 2, rng);
  const auto g = build_generator(m, kTol);
  const auto ep = ergodic_projection_predual(g, kTol);
  const auto inv = invariant_states(g, kTol);
  for (int rep = 0; rep < 3; ++rep) {
    Cmat a = random_complex_matrix(3, 3, rng);
    Cmat rho = a * a.adjoint();
    rho /= rho.trace();
    const Cmat out = ep.apply(rho);
    CHECK(std::abs(out.trace() - Complex(1, 0)) < 1e-9);
    CHECK(fro(g.predual.apply(out)) < 1e-8);
    CHECK(span_residual(inv.basis, out) < 1e-8);
  }
}

TEST_CASE("reversible algebra of dephasing is the diagonal algebra") {
  const auto g = build_generator(dephasing(1.0), kTol);
  const auto s = spectral_split(g, kTol);
  const auto rev = reversible_algebra(s, kTol);
  CHECK(rev.span_dim == 2);
  CHECK(rev.closure_was_noop);
  CHECK(rev.peripheral_semisimple);
  CHECK(rev.algebra.size() == 2);
  for (const auto& x : rev.algebra.basis) {
    CHECK(std::abs(x(0, 1)) < 1e-9);
    CHECK(std::abs(x(1, 0)) < 1e-9);
  }
}

TEST_CASE("decoherence-free equals reversible under a faithful state") {
  Rng rng(34);
  const auto v = verify_nt_equals_mr(dephasing(0.7), kTol, rng);
  CHECK(v.faithful);
  CHECK(v.nt_equals_mr);
  CHECK(v.mr_subset_nt);
  CHECK(v.peripheral_semisimple);
  REQUIRE(v.blocks.size() == 2);
  CHECK(v.blocks[0] == std::make_pair<Eigen::Index, Eigen::Index>(1, 1));
  CHECK(v.block_is_factor == std::vector<bool>{true, true});
}

TEST_CASE("detailed-balance samples keep their state invariant and faithful") {
  Rng rng(35);
  for (int rep = 0; rep < 5; ++rep) {
    const auto s = sample_detailed_balance_model(3, rng);
    const auto g = build_generator(s.model, kTol);
    CHECK(fro(g.predual.apply(s.invariant_state)) < 1e-9);
    const auto inv = invariant_states(g, kTol);
    CHECK(inv.faithful);
  }
}

TEST_CASE("invariant state splits over the center of the subalgebra") {
  Rng rng(36);
  const auto g = build_generator(dephasing(1.0), kTol);
  const auto inv = invariant_states(g, kTol);
  REQUIRE(inv.distinguished.has_value());
  const auto blocks = invariant_state_block_structure(
      dephasing(1.0), *inv.distinguished, kTol, rng);
  REQUIRE(blocks.size() == 2);
  Cmat recon = Cmat::Zero(2, 2);
  double wsum = 0.0;
  for (const auto& b : blocks) {
    CHECK(b.weight == doctest::Approx(0.5));
    recon += b.weight * b.state;
    wsum += b.weight;
  }
  CHECK(wsum == doctest::Approx(1.0));
  CHECK(fro(recon - *inv.distinguished) < 1e-9);
}

TEST_CASE("block structure rejects a non-invariant input") {
  Rng rng(37);
  Cmat rho(2, 2);
  rho << 0.5, 0.3, 0.3, 0.5;  // coherence decays, not invariant
  CHECK_THROWS_AS(
      invariant_state_block_structure(dephasing(1.0), rho, kTol, rng),
      NotInvariant);
}
