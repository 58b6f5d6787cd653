#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qms/model_io.hpp"
#include "qms/sampling.hpp"
#include "qms/structure.hpp"

namespace qms {

inline constexpr const char* kToolVersion = "0.1.0";

///// Full per-model analysis: decoherence-free subalgebra, block decomposition,
/// fixed points, invariant states, spectral splitting, and the table of
/// structure-theorem verdicts. Deterministic for a fixed seed.
struct AnalysisOutcome {
  Json report;
  bool any_fail = false;
  bool any_error = false;
};

AnalysisOutcome analyze_model(const QmsModel& m, const TolerancePolicy& tol,
                              std::uint64_t seed);

/// Heisenberg- or Schrodinger-picture trajectory rows.
struct TrajectoryRow {
  double t;
  Cmat value;
  double fro_norm;
};

std::vector<TrajectoryRow> evolve_trajectory(const QmsModel& m,
                                             const TolerancePolicy& tol,
                                             const Cmat& input,
                                             const std::vector<double>& times,
                                             bool schrodinger);

/// Aggregate random-model suite; uses the detailed-balance sampler when
/// require_faithful and rejection-samples otherwise unusable draws.
struct SuiteOptions {
  int count = 10;
  std::vector<Eigen::Index> dims = {2, 3};
  std::uint64_t seed = 0;
  bool require_faithful = false;
};

struct SuiteOutcome {
  Json report;
  bool any_fail = false;
  bool any_error = false;
};

SuiteOutcome run_random_suite(const SuiteOptions& opt, const TolerancePolicy& tol);

}  // namespace qms
