#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "qms/sampling.hpp"
#include "qms/structure.hpp"

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

using BlockSig = std::vector<std::pair<Eigen::Index, Eigen::Index>>;

BlockSig sorted_sig(BlockSig s) {
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

TEST_CASE("block extraction on the dephasing model") {
  const auto m = dephasing(1.0);
  const auto nt = df_subalgebra(m, kTol);
  Rng rng(41);
  const auto dec = wedderburn(nt, kTol, rng);
  REQUIRE(dec.blocks.size() == 2);

  const auto data = extract_block_data(m, dec, kTol);
  CHECK(data.verified);
  CHECK(data.max_residual < 1e-10);
  REQUIRE(data.hamiltonian_blocks.size() == 2);
  for (const auto& h : data.hamiltonian_blocks) {
    CHECK(h.rows() == 1);
    CHECK(std::abs(h(0, 0)) < 1e-10);  // traceless 1x1
  }
  // the lindblad components on the two diagonal blocks are +-sqrt(gamma)
  REQUIRE(data.lindblad_blocks.size() == 2);
  const double a = std::abs(data.lindblad_blocks[0][0](0, 0));
  CHECK(a == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("block extraction rejects a wrong decomposition") {
  QmsModel m;
  m.dim = 2;
  m.hamiltonian = Cmat::Zero(2, 2);
  Cmat sm = Cmat::Zero(2, 2);
  sm(0, 1) = 1.0;  // off-diagonal lindblad
  m.lindblads = {sm};

  BlockDecomposition dec;
  dec.U = Cmat::Identity(2, 2);
  dec.blocks = {{1, 1}, {1, 1}};
  Cmat p0 = Cmat::Zero(2, 2), p1 = Cmat::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  dec.central_projections = {p0, p1};
  CHECK_THROWS_AS(extract_block_data(m, dec, kTol), BlockMismatch);
}

TEST_CASE("round trip through a sampled block model") {
  Rng rng(42);
  for (int rep = 0; rep < 5; ++rep) {
    const auto sample = sample_block_model(8, 2, rng, kTol);
    const auto nt = df_subalgebra(sample.model, kTol);
    const auto dec = wedderburn(nt, kTol, rng);
    CHECK(sorted_sig(dec.blocks) == sorted_sig(sample.blocks));

    const auto data = extract_block_data(sample.model, dec, kTol);
    CHECK(data.verified);
    CHECK(data.max_residual < 1e-9);
  }
}

TEST_CASE("commuting split of the generator") {
  Rng rng(43);
  const auto sample = sample_block_model(6, 2, rng, kTol);
  const auto nt = df_subalgebra(sample.model, kTol);
  const auto dec = wedderburn(nt, kTol, rng);
  const auto data = extract_block_data(sample.model, dec, kTol);
  const auto pair = build_df_da_generators(sample.model, data, kTol);
  CHECK(pair.commutation_residual < 1e-8);
  CHECK(pair.sum_residual < 1e-8);

  // the exponentials factor
  const auto g = build_generator(sample.model, kTol);
  for (double t : {0.1, 1.0}) {
    const Cmat full = expm_dense(t * g.heisenberg.matrix);
    const Cmat split = expm_dense(t * pair.da.matrix) *
                       expm_dense(t * pair.df.matrix);
    CHECK(fro(full - split) < 1e-8 * (1.0 + fro(full)));
  }
}

TEST_CASE("product observables factor under the semigroup") {
  Rng rng(44);
  const auto sample = sample_block_model(6, 2, rng, kTol);
  const auto nt = df_subalgebra(sample.model, kTol);
  const auto dec = wedderburn(nt, kTol, rng);
  const auto data = extract_block_data(sample.model, dec, kTol);
  CHECK(verify_df_action(sample.model, data, {0.1, 1.0}, kTol));
}

TEST_CASE("internal components have trivial decoherence-free subalgebra") {
  Rng rng(45);
  const auto sample = sample_block_model(8, 2, rng, kTol);
  const auto nt = df_subalgebra(sample.model, kTol);
  const auto dec = wedderburn(nt, kTol, rng);
  const auto data = extract_block_data(sample.model, dec, kTol);
  for (bool ok : verify_component_triviality(data, kTol)) CHECK(ok);
}

TEST_CASE("central projections decompose the model") {
  Rng rng(46);
  const auto verdicts = verify_central_block_restriction(dephasing(1.0), kTol, rng);
  REQUIRE(verdicts.size() == 2);
  for (const auto& v : verdicts) {
    CHECK(v.decomposability_residual < 1e-10);
    CHECK(v.restriction_matches);
  }
}

TEST_CASE("central restriction on a scrambled block model") {
  Rng rng(47);
  const auto sample = sample_block_model(6, 2, rng, kTol);
  const auto verdicts =
      verify_central_block_restriction(sample.model, kTol, rng);
  CHECK(verdicts.size() == sample.blocks.size());
  for (const auto& v : verdicts) {
    CHECK(v.decomposability_residual < 1e-8);
    CHECK(v.restriction_matches);
  }
}

TEST_CASE("reversible block structure matches the subalgebra blocks") {
  Rng rng(48);
  const auto s = sample_detailed_balance_model(3, rng);
  const auto res = reversible_block_structure(s.model, kTol, rng);
  CHECK(res.matches_df_blocks);
  CHECK(res.data.verified);
  CHECK(res.pure_point_hamiltonians);
}

TEST_CASE("reversible block structure requires a faithful state") {
  QmsModel m;
  m.dim = 2;
  m.hamiltonian = Cmat::Zero(2, 2);
  Cmat sm = Cmat::Zero(2, 2);
  sm(0, 1) = 1.0;
  m.lindblads = {sm};  // amplitude damping: unique pure invariant state
  Rng rng(49);
  CHECK_THROWS_AS(reversible_block_structure(m, kTol, rng), NoFaithfulState);
}
