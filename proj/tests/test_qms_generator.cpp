#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qms/qms_generator.hpp"
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
  m.label = "dephasing";
  return m;
}

QmsModel amplitude_damping(double gamma) {
  QmsModel m;
  m.dim = 2;
  m.hamiltonian = Cmat::Zero(2, 2);
  Cmat sm = Cmat::Zero(2, 2);
  sm(0, 1) = std::sqrt(gamma);  // |0><1|
  m.lindblads = {sm};
  m.label = "amplitude-damping";
  return m;
}

}  // namespace

TEST_CASE("model validation rejects malformed data") {
  QmsModel m = dephasing(1.0);
  CHECK_NOTHROW(m.validate(kTol));

  QmsModel bad = m;
  bad.hamiltonian(0, 1) = 1.0;  // not hermitian
  CHECK_THROWS_AS(bad.validate(kTol), ModelInvalid);

  bad = m;
  bad.lindblads.clear();
  CHECK_THROWS_AS(bad.validate(kTol), ModelInvalid);

  bad = m;
  bad.lindblads[0] = Cmat::Zero(3, 3);
  CHECK_THROWS_AS(bad.validate(kTol), ModelInvalid);
}

TEST_CASE("dephasing generator closed form") {
  const double gamma = 1.0;
  const auto g = build_generator(dephasing(gamma), kTol);

  Cmat e12 = Cmat::Zero(2, 2);
  e12(0, 1) = 1.0;
  // L(e12) = -2 gamma e12, diagonal observables fixed
  CHECK(fro(g.heisenberg.apply(e12) + 2.0 * gamma * e12) < 1e-12);
  CHECK(fro(g.heisenberg.apply(Cmat::Identity(2, 2))) < 1e-12);
  Cmat sz(2, 2);
  sz << 1, 0, 0, -1;
  CHECK(fro(g.heisenberg.apply(sz)) < 1e-12);

  // evolution: off-diagonal decays as e^{-2 gamma t}
  const double t = 0.7;
  const Cmat xt = evolve_observable(g, e12, t);
  CHECK(std::abs(xt(0, 1) - std::exp(-2.0 * gamma * t)) < 1e-12);
  CHECK(std::abs(xt(1, 0)) < 1e-14);
}

TEST_CASE("amplitude damping predual closed form") {
  const double gamma = 0.8;
  const auto g = build_generator(amplitude_damping(gamma), kTol);

  Cmat rho(2, 2);
  rho << 0.25, Complex(0.1, 0.05), Complex(0.1, -0.05), 0.75;
  const double t = 1.3;
  const Cmat rt = evolve_state(g, rho, t, kTol);
  // population transfer and coherence decay
  const double p11 = 0.75 * std::exp(-gamma * t);
  CHECK(std::abs(rt(1, 1) - p11) < 1e-12);
  CHECK(std::abs(rt(0, 0) - (1.0 - p11)) < 1e-12);
  CHECK(std::abs(rt(0, 1) - rho(0, 1) * std::exp(-gamma * t / 2.0)) < 1e-12);
}

TEST_CASE("duality, unitality, and trace preservation") {
  Rng rng(21);
  const auto m = sample_gue_model(3, 2, rng);
  const auto g = build_generator(m, kTol);
  const Eigen::Index d = m.dim;

  CHECK(fro(g.heisenberg.apply(Cmat::Identity(d, d))) < 1e-12);

  for (int rep = 0; rep < 5; ++rep) {
    const Cmat x = random_complex_matrix(d, d, rng);
    const Cmat rho = random_complex_matrix(d, d, rng);
    CHECK(std::abs((g.predual.apply(rho)).trace()) < 1e-12 * (1 + fro(rho)));
    const Complex lhs = (rho * g.heisenberg.apply(x)).trace();
    const Complex rhs = (g.predual.apply(rho) * x).trace();
    CHECK(std::abs(lhs - rhs) < 1e-10 * (1.0 + std::abs(lhs)));
  }

  // split recombines
  CHECK(fro(g.hamiltonian_part.matrix + g.dissipative_part.matrix -
            g.heisenberg.matrix) < 1e-12 * (1.0 + fro(g.heisenberg.matrix)));
}

TEST_CASE("generator matches a finite difference of the semigroup") {
  Rng rng(22);
  const auto m = sample_gue_model(3, 1, rng);
  const auto g = build_generator(m, kTol);
  const Cmat x = random_complex_matrix(3, 3, rng);
  const double h = 1e-6;
  const Cmat fd = (evolve_observable(g, x, h) - x) / h;
  CHECK(fro(fd - g.heisenberg.apply(x)) < 1e-4);
}

TEST_CASE("evolve_state rejects non-states") {
  const auto g = build_generator(dephasing(1.0), kTol);
  Cmat not_trace_one = 0.7 * Cmat::Identity(2, 2);
  CHECK_THROWS_AS(evolve_state(g, not_trace_one, 0.1, kTol), NotAState);
  Cmat not_positive(2, 2);
  not_positive << 1.5, 0, 0, -0.5;
  CHECK_THROWS_AS(evolve_state(g, not_positive, 0.1, kTol), NotAState);
}

TEST_CASE("decoherence-free subalgebra oracles") {
  // dephasing: the diagonal algebra
  auto nt = df_subalgebra(dephasing(1.0), kTol);
  CHECK(nt.size() == 2);
  for (const auto& x : nt.basis) {
    CHECK(std::abs(x(0, 1)) < 1e-12);
    CHECK(std::abs(x(1, 0)) < 1e-12);
  }

  // amplitude damping: trivial
  nt = df_subalgebra(amplitude_damping(1.0), kTol);
  CHECK(nt.size() == 1);

  // pure hamiltonian flow (lindblad = identity): everything
  QmsModel unitary_only;
  unitary_only.dim = 3;
  Rng rng(23);
  const Cmat a = random_complex_matrix(3, 3, rng);
  unitary_only.hamiltonian = a + a.adjoint();
  unitary_only.lindblads = {Cmat::Identity(3, 3)};
  nt = df_subalgebra(unitary_only, kTol);
  CHECK(nt.size() == 9);
}

TEST_CASE("iterated commutators matter: H mixes a lindblad direction") {
  // L = sigma_z alone leaves the diagonal algebra; H = sigma_x rotates it so
  // the joint decoherence-free subalgebra collapses to the scalars.
  QmsModel m = dephasing(1.0);
  m.hamiltonian << 0, 1, 1, 0;
  const auto nt = df_subalgebra(m, kTol);
  CHECK(nt.size() == 1);
}

TEST_CASE("dynamical membership matches the algebraic computation") {
  const auto m = dephasing(1.0);
  const auto ts = default_time_grid();
  Cmat sz(2, 2);
  sz << 1, 0, 0, -1;
  CHECK(df_membership_check(m, sz, ts, kTol));
  Cmat e12 = Cmat::Zero(2, 2);
  e12(0, 1) = 1.0;
  CHECK(!df_membership_check(m, e12, ts, kTol));
}

TEST_CASE("fixed points of dephasing are the diagonal algebra") {
  const auto fr = fixed_point_algebra(dephasing(1.0), true, kTol);
  CHECK(fr.space.size() == 2);
  CHECK(fr.is_algebra);
  CHECK(fr.matches_commutant);
  CHECK(fr.commutant_form.size() == 2);
}

TEST_CASE("fixed points of amplitude damping are scalars") {
  const auto fr = fixed_point_algebra(amplitude_damping(0.5), false, kTol);
  CHECK(fr.space.size() == 1);
  CHECK(fr.commutant_form.size() == 1);
}

TEST_CASE("automorphic action on the decoherence-free subalgebra") {
  QmsModel m = dephasing(1.0);
  m.hamiltonian << 1, 0, 0, -1;  // commutes with the diagonal algebra
  const auto g = build_generator(m, kTol);
  const auto nt = df_subalgebra(m, kTol);
  CHECK(nt.size() == 2);
  CHECK(automorphism_check(m, g, nt, default_time_grid(), kTol));
}
