#include <benchmark/benchmark.h>

#include "qms/asymptotics.hpp"
#include "qms/sampling.hpp"
#include "qms/star_algebra.hpp"

namespace {

qms::QmsModel gue_model(Eigen::Index d, std::uint64_t seed) {
  qms::Rng rng(seed);
  return qms::sample_gue_model(d, 2, rng);
}

void bm_build_generator(benchmark::State& state) {
  const auto m = gue_model(state.range(0), 11);
  const qms::TolerancePolicy tol;
  for (auto _ : state) {
    auto g = qms::build_generator(m, tol);
    benchmark::DoNotOptimize(g.heisenberg.matrix);
  }
}
BENCHMARK(bm_build_generator)->Arg(4)->Arg(8);

void bm_df_subalgebra(benchmark::State& state) {
  const auto m = gue_model(state.range(0), 12);
  const qms::TolerancePolicy tol;
  for (auto _ : state) {
    auto nt = qms::df_subalgebra(m, tol);
    benchmark::DoNotOptimize(nt.basis);
  }
}
BENCHMARK(bm_df_subalgebra)->Arg(3)->Arg(4)->Arg(6);

void bm_spectral_split(benchmark::State& state) {
  const auto m = gue_model(state.range(0), 13);
  const qms::TolerancePolicy tol;
  const auto gen = qms::build_generator(m, tol);
  for (auto _ : state) {
    auto split = qms::spectral_split(gen, tol);
    benchmark::DoNotOptimize(split.clusters);
  }
}
BENCHMARK(bm_spectral_split)->Arg(3)->Arg(4)->Arg(6);

void bm_wedderburn(benchmark::State& state) {
  qms::Rng rng(14);
  const qms::TolerancePolicy tol;
  const auto sample = qms::sample_block_model(8, 2, rng, tol);
  const auto nt = qms::df_subalgebra(sample.model, tol);
  for (auto _ : state) {
    qms::Rng local(15);
    auto dec = qms::wedderburn(nt, tol, local);
    benchmark::DoNotOptimize(dec.blocks);
  }
}
BENCHMARK(bm_wedderburn);

}  // namespace

BENCHMARK_MAIN();
