#include "qms/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include <unsupported/Eigen/MatrixFunctions>

namespace qms {

namespace {

std::string fmt_residual(double r) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", r);
  return buf;
}

struct VerdictTable {
  Json table = Json::object();
  bool any_fail = false;
  bool any_error = false;
  double residual_max = 0.0;

  void note_residual(double r) { residual_max = std::max(residual_max, r); }

  void set(const std::string& name, const std::string& status,
           const std::string& detail = "") {
    Json row;
    row["status"] = status;
    if (!detail.empty()) row["detail"] = detail;
    table[name] = std::move(row);
    if (status == "fail") any_fail = true;
    if (status == "error") any_error = true;
  }

  void skip(const std::string& name, const std::string& reason) {
    Json row;
    row["status"] = "skipped";
    row["detail"] = reason;
    table[name] = std::move(row);
  }

  void run(const std::string& name,
           const std::function<std::pair<bool, std::string>()>& check) {
    try {
      const auto [ok, detail] = check();
      set(name, ok ? "pass" : "fail", detail);
    } catch (const Error& e) {
      set(name, "error", e.what());
    }
  }
};

Json spectrum_to_json(const SpectralSplit& split) {
  Json clusters = Json::array();
  for (std::size_t i = 0; i < split.clusters.size(); ++i) {
    const auto& c = split.clusters[i];
    Json row;
    row["re"] = c.eigenvalue.real();
    row["im"] = c.eigenvalue.imag();
    row["algebraic_multiplicity"] = c.algebraic_multiplicity;
    row["geometric_multiplicity"] = static_cast<Eigen::Index>(c.eigenvectors.size());
    row["peripheral"] =
        std::find(split.peripheral_indices.begin(), split.peripheral_indices.end(),
                  i) != split.peripheral_indices.end();
    clusters.push_back(std::move(row));
  }
  return clusters;
}

}  // namespace

AnalysisOutcome analyze_model(const QmsModel& m, const TolerancePolicy& tol,
                              std::uint64_t seed) {
  tol.validate();
  m.validate(tol);
  Rng rng(seed);
  const Eigen::Index d = m.dim;
  const Cmat id = Cmat::Identity(d, d);

  AnalysisOutcome out;
  Json& rep = out.report;
  rep["tool"] = "qms-analyzer";
  rep["version"] = kToolVersion;
  rep["seed"] = seed;
  {
    Json t;
    t["rank_rel"] = tol.rank_rel;
    t["eig_cluster_abs"] = tol.eig_cluster_abs;
    t["residual"] = tol.residual;
    t["hermitian"] = tol.hermitian;
    t["unitary"] = tol.unitary;
    t["faithful_min_eig"] = tol.faithful_min_eig;
    rep["tolerances"] = std::move(t);
  }
  rep["input"] = model_to_json(m);
  rep["notes"] = Json::array(
      {"finite dimension: every von Neumann algebra is atomic, so atomicity is "
       "verified through its checkable companion, equality of the "
       "decoherence-free and reversible algebras",
       "finite dimension: all operator topologies coincide, so weak*-closures "
       "in the definitions reduce to linear spans",
       "the center is spanned by minimal projections; the diffuse central part "
       "is identically zero in finite dimension"});
  rep["center_diffuse_part"] = 0;

  VerdictTable v;

  const GeneratorPair g = build_generator(m, tol);
  const OperatorAlgebra nt = df_subalgebra(m, tol);
  const OperatorAlgebra znt = center(nt, tol);
  const SpectralSplit split = spectral_split(g, tol);
  const ReversibleAlgebra rev = reversible_algebra(split, tol);
  const InvariantStateSet inv = invariant_states(g, tol);
  const std::vector<Cmat> stable = stable_space(split, tol);
  const FixedPointResult fixed = fixed_point_algebra(m, false, tol);
  const BlockDecomposition dec = wedderburn(nt, tol, rng);
  const double gap = spectral_gap(split);

  const std::vector<double> grid = default_time_grid();
  std::vector<std::pair<double, Cmat>> heis_exp;
  for (double t : grid) heis_exp.emplace_back(t, Cmat((t * g.heisenberg.matrix).exp()));
  auto apply_at = [&](std::size_t ti, const Cmat& x) {
    return unvec(heis_exp[ti].second * vec(x), d, d);
  };

  // --- structural echo -----------------------------------------------------
  {
    Json nt_json;
    nt_json["dimension"] = nt.size();
    Json basis = Json::array();
    for (const auto& b : nt.basis) basis.push_back(matrix_to_json(b));
    nt_json["basis"] = std::move(basis);
    nt_json["center_dimension"] = znt.size();
    rep["df_subalgebra"] = std::move(nt_json);
  }
  {
    Json blocks = Json::array();
    for (const auto& [k, mm] : dec.blocks) blocks.push_back(Json::array({k, mm}));
    rep["blocks"] = std::move(blocks);
    Json factors = Json::array();
    for (const auto& p : dec.central_projections) {
      const Cmat vb = range_basis(p, tol);
      factors.push_back(is_factor(compress(nt, vb, tol), tol));
    }
    rep["block_is_factor"] = std::move(factors);
  }
  {
    Json f;
    f["dimension"] = static_cast<Eigen::Index>(fixed.space.size());
    f["is_algebra"] = fixed.is_algebra;
    f["matches_commutant"] = fixed.matches_commutant;
    rep["fixed_points"] = std::move(f);
  }
  {
    Json i;
    i["kernel_dimension"] = static_cast<Eigen::Index>(inv.basis.size());
    i["faithful"] = inv.faithful;
    i["min_eigenvalue"] = inv.min_eigenvalue;
    if (inv.distinguished) i["distinguished_state"] = matrix_to_json(*inv.distinguished);
    rep["invariant_states"] = std::move(i);
  }
  rep["spectrum"] = spectrum_to_json(split);
  rep["spectral_gap"] = gap;
  rep["peripheral_semisimple"] = rev.peripheral_semisimple;
  {
    Json r;
    r["dimension"] = rev.algebra.size();
    r["eigenvector_span_dimension"] = rev.span_dim;
    r["closure_was_noop"] = rev.closure_was_noop;
    rep["reversible_algebra"] = std::move(r);
  }
  rep["stable_space_dimension"] = static_cast<Eigen::Index>(stable.size());

  const bool faithful = inv.faithful;
  const bool semisimple = rev.peripheral_semisimple;
  const std::string no_faithful = "no faithful invariant state found";
  const std::string non_ss = "non-semisimple peripheral spectrum";

  // --- verdicts ------------------------------------------------------------

  v.run("spectrum_left_half_plane", [&]() -> std::pair<bool, std::string> {
    double worst = 0.0;
    for (const auto& c : split.clusters)
      worst = std::max(worst, c.eigenvalue.real());
    return {worst <= tol.eig_cluster_abs, "max Re = " + fmt_residual(worst)};
  });

  v.run("df_automorphic_action", [&]() -> std::pair<bool, std::string> {
    const Complex iu(0.0, 1.0);
    double worst = 0.0;
    for (std::size_t ti = 0; ti < grid.size(); ++ti) {
      const Cmat u = expm_dense(iu * grid[ti] * m.hamiltonian);
      for (const auto& x : nt.basis)
        worst = std::max(worst,
                         (apply_at(ti, x) - u * x * u.adjoint()).norm() /
                             (1.0 + x.norm()));
    }
    v.note_residual(worst);
    return {worst <= tol.residual, "max residual " + fmt_residual(worst)};
  });

  v.run("df_invariance", [&]() -> std::pair<bool, std::string> {
    double worst = 0.0;
    for (std::size_t ti = 0; ti < grid.size(); ++ti)
      for (const auto& x : nt.basis)
        worst = std::max(worst, span_residual(nt.basis, apply_at(ti, x)));
    v.note_residual(worst);
    return {worst <= tol.residual, "max residual " + fmt_residual(worst)};
  });

  v.run("df_multiplicativity", [&]() -> std::pair<bool, std::string> {
    double worst = 0.0;
    for (std::size_t ti = 0; ti < grid.size(); ++ti)
      for (const auto& x : nt.basis) {
        const Cmat tx = apply_at(ti, x);
        worst = std::max(
            worst, (apply_at(ti, Cmat(x.adjoint() * x)) - tx.adjoint() * tx).norm());
        worst = std::max(
            worst, (apply_at(ti, Cmat(x * x.adjoint())) - tx * tx.adjoint()).norm());
      }
    v.note_residual(worst);
    return {worst <= tol.residual * 10, "max residual " + fmt_residual(worst)};
  });

  v.run("center_commutant_identity", [&]() -> std::pair<bool, std::string> {
    return {center_of_commutant_identity(nt, tol), ""};
  });

  v.run("df_center_fixed", [&]() -> std::pair<bool, std::string> {
    double worst = 0.0;
    for (const auto& z : znt.basis)
      worst = std::max(worst, g.heisenberg.apply(z).norm());
    v.note_residual(worst);
    return {worst <= tol.residual, "max |L(z)| = " + fmt_residual(worst)};
  });

  BlockLindbladData block_data;
  bool have_block_data = false;
  v.run("block_extraction", [&]() -> std::pair<bool, std::string> {
    block_data = extract_block_data(m, dec, tol);
    have_block_data = true;
    v.note_residual(block_data.max_residual);
    return {block_data.verified,
            "max residual " + fmt_residual(block_data.max_residual)};
  });

  if (have_block_data) {
    v.run("df_da_split", [&]() -> std::pair<bool, std::string> {
      const DfDaPair pair = build_df_da_generators(m, block_data, tol);
      double worst = std::max(pair.commutation_residual, pair.sum_residual);
      for (double t : {0.1, 1.0, 10.0}) {
        const Cmat full = Cmat((t * g.heisenberg.matrix).exp());
        const Cmat fact =
            Cmat((t * pair.da.matrix).exp()) * Cmat((t * pair.df.matrix).exp());
        worst = std::max(worst, (full - fact).norm());
      }
      v.note_residual(worst);
      return {worst <= tol.residual * (1.0 + g.heisenberg.matrix.norm()),
              "max residual " + fmt_residual(worst)};
    });

    v.run("component_triviality", [&]() -> std::pair<bool, std::string> {
      const auto verdicts = verify_component_triviality(block_data, tol);
      const bool all = std::all_of(verdicts.begin(), verdicts.end(),
                                   [](bool b) { return b; });
      std::string detail;
      for (bool b : verdicts) detail += b ? '1' : '0';
      return {all, "per-block " + detail};
    });

    v.run("df_action_factorization", [&]() -> std::pair<bool, std::string> {
      return {verify_df_action(m, block_data, grid, tol), ""};
    });
  } else {
    v.skip("df_da_split", "block extraction failed");
    v.skip("component_triviality", "block extraction failed");
    v.skip("df_action_factorization", "block extraction failed");
  }

  v.run("central_block_restriction", [&]() -> std::pair<bool, std::string> {
    const auto verdicts = verify_central_block_restriction(m, tol, rng);
    double worst = 0.0;
    bool all = true;
    for (const auto& cv : verdicts) {
      worst = std::max(worst, cv.decomposability_residual);
      all = all && cv.restriction_matches;
    }
    v.note_residual(worst);
    return {all && worst <= tol.residual,
            "decomposability residual " + fmt_residual(worst)};
  });

  v.run("ergodic_projection_consistency", [&]() -> std::pair<bool, std::string> {
    const Superoperator e = ergodic_projection(g, tol);
    double worst = (e.matrix * e.matrix - e.matrix).norm() / (1.0 + e.matrix.norm());
    for (const auto& [t, et] : heis_exp) {
      worst = std::max(worst, (e.matrix * et - e.matrix).norm() / (1.0 + et.norm()));
      worst = std::max(worst, (et * e.matrix - e.matrix).norm() / (1.0 + et.norm()));
    }
    // Range must be the fixed-point space.
    for (const auto& x : fixed.space)
      worst = std::max(worst, (e.apply(x) - x).norm());
    v.note_residual(worst);
    return {worst <= tol.residual * 100, "max residual " + fmt_residual(worst)};
  });

  if (!semisimple) {
    v.skip("nt_equals_reversible", non_ss);
    v.skip("reversible_isometric_action", non_ss);
    v.skip("reversible_blocks_match", non_ss);
    v.skip("invariant_state_block_diagonal", non_ss);
    v.skip("eid_completeness", non_ss);
    v.skip("fixed_point_consistency", non_ss);
  } else if (!faithful) {
    bool subset = true;
    for (const auto& x : rev.algebra.basis)
      if (!in_span(nt.basis, x, tol)) { subset = false; break; }
    const bool equal_observed = algebra_equal(nt, rev.algebra, tol);
    v.skip("nt_equals_reversible",
           no_faithful + "; observed: reversible subset of df = " +
               (subset ? "true" : "false") + ", equality = " +
               (equal_observed ? "true" : "false"));
    v.skip("reversible_isometric_action", no_faithful);
    v.skip("reversible_blocks_match", no_faithful);
    v.skip("invariant_state_block_diagonal", no_faithful);
    v.skip("eid_completeness", no_faithful);
    v.skip("fixed_point_consistency", no_faithful);
  } else {
    v.run("nt_equals_reversible", [&]() -> std::pair<bool, std::string> {
      return {algebra_equal(nt, rev.algebra, tol),
              rev.closure_was_noop ? "eigenvector span already an algebra"
                                   : "algebra closure was not a no-op"};
    });

    v.run("reversible_isometric_action", [&]() -> std::pair<bool, std::string> {
      double worst = 0.0;
      for (std::size_t ti = 0; ti < grid.size(); ++ti)
        for (const auto& x : rev.algebra.basis)
          worst = std::max(worst, std::abs(apply_at(ti, x).norm() - x.norm()));
      v.note_residual(worst);
      return {worst <= tol.residual * 10, "max norm drift " + fmt_residual(worst)};
    });

    v.run("reversible_blocks_match", [&]() -> std::pair<bool, std::string> {
      Rng rng2(seed + 1);
      const BlockDecomposition mr_dec = wedderburn(rev.algebra, tol, rng2);
      auto key = [](std::vector<std::pair<Eigen::Index, Eigen::Index>> b) {
        std::sort(b.begin(), b.end());
        return b;
      };
      return {key(mr_dec.blocks) == key(dec.blocks), ""};
    });

    v.run("invariant_state_block_diagonal", [&]() -> std::pair<bool, std::string> {
      double off = 0.0, wsum = 0.0;
      const Cmat& sigma = *inv.distinguished;
      for (std::size_t i = 0; i < dec.central_projections.size(); ++i) {
        wsum += (dec.central_projections[i] * sigma).trace().real();
        for (std::size_t j = 0; j < dec.central_projections.size(); ++j)
          if (i != j)
            off = std::max(off, (dec.central_projections[i] * sigma *
                                 dec.central_projections[j]).norm());
      }
      v.note_residual(off);
      return {off <= tol.residual && std::abs(wsum - 1.0) <= 1e-10,
              "off-diagonal mass " + fmt_residual(off)};
    });

    v.run("eid_completeness", [&]() -> std::pair<bool, std::string> {
      const bool dims_ok =
          nt.size() + static_cast<Eigen::Index>(stable.size()) == d * d;
      const double tc = decay_check_time(gap);
      const Cmat et = Cmat((tc * g.heisenberg.matrix).exp());
      double worst = 0.0;
      for (const auto& x : stable)
        worst = std::max(worst, unvec(et * vec(x), d, d).norm());
      v.note_residual(worst);
      return {dims_ok && worst <= tol.residual,
              "decay at t=" + fmt_residual(tc) + ": " + fmt_residual(worst)};
    });

    v.run("fixed_point_consistency", [&]() -> std::pair<bool, std::string> {
      return {fixed.matches_commutant && fixed.is_algebra, ""};
    });
  }

  rep["verdicts"] = v.table;
  rep["residual_max"] = v.residual_max;
  out.any_fail = v.any_fail;
  out.any_error = v.any_error;
  return out;
}

std::vector<TrajectoryRow> evolve_trajectory(const QmsModel& m,
                                             const TolerancePolicy& tol,
                                             const Cmat& input,
                                             const std::vector<double>& times,
                                             bool schrodinger) {
  const GeneratorPair g = build_generator(m, tol);
  if (input.rows() != m.dim || input.cols() != m.dim)
    throw ModelInvalid("evolve: input matrix has wrong shape");
  std::vector<TrajectoryRow> rows;
  for (double t : times) {
    const Cmat val = schrodinger ? evolve_state(g, input, t, tol)
                                 : evolve_observable(g, input, t);
    rows.push_back({t, val, val.norm()});
  }
  return rows;
}

SuiteOutcome run_random_suite(const SuiteOptions& opt, const TolerancePolicy& tol) {
  if (opt.count < 1) throw Error("random-suite: count must be >= 1");
  for (auto dim : opt.dims)
    if (dim < 2 || dim > 8)
      throw Error("random-suite: dimensions must lie in {2,...,8}");
  if (opt.dims.empty()) throw Error("random-suite: no dimensions given");

  SuiteOutcome out;
  Json& rep = out.report;
  rep["tool"] = "qms-analyzer";
  rep["version"] = kToolVersion;
  rep["seed"] = opt.seed;
  rep["count"] = opt.count;
  rep["require_faithful"] = opt.require_faithful;

  Json models = Json::array();
  int pass_count = 0, nt_mr_pass = 0, nt_mr_applicable = 0;
  for (int i = 0; i < opt.count; ++i) {
    const Eigen::Index dim =
        opt.dims[static_cast<std::size_t>(i) % opt.dims.size()];
    Rng rng(opt.seed + 1000003ULL * static_cast<std::uint64_t>(i));
    QmsModel model;
    if (opt.require_faithful) {
      bool found = false;
      for (int attempt = 0; attempt < 50 && !found; ++attempt) {
        const DetailedBalanceSample s = sample_detailed_balance_model(dim, rng);
        const GeneratorPair g = build_generator(s.model, tol);
        if (invariant_states(g, tol).faithful) {
          model = s.model;
          found = true;
        }
      }
      if (!found)
        throw SamplingExhausted(
            "random-suite: could not sample a faithful model at dim " +
            std::to_string(dim));
    } else {
      model = sample_gue_model(dim, 1 + static_cast<int>(rng.below(3)), rng);
    }

    Json entry;
    entry["index"] = i;
    entry["dim"] = dim;
    try {
      const AnalysisOutcome a = analyze_model(
          model, tol, opt.seed + static_cast<std::uint64_t>(i));
      entry["any_fail"] = a.any_fail;
      entry["any_error"] = a.any_error;
      Json failed = Json::array();
      for (const auto& [name, row] : a.report["verdicts"].items())
        if (row["status"] == "fail") failed.push_back(name);
      entry["failed_verdicts"] = std::move(failed);
      const auto& ntmr = a.report["verdicts"]["nt_equals_reversible"];
      entry["nt_equals_reversible"] = ntmr["status"];
      if (ntmr["status"] == "pass") ++nt_mr_pass;
      if (ntmr["status"] == "pass" || ntmr["status"] == "fail") ++nt_mr_applicable;
      if (!a.any_fail && !a.any_error) ++pass_count;
      out.any_fail = out.any_fail || a.any_fail;
      out.any_error = out.any_error || a.any_error;
    } catch (const Error& e) {
      entry["any_error"] = true;
      entry["error"] = e.what();
      out.any_error = true;
    }
    models.push_back(std::move(entry));
  }
  rep["models"] = std::move(models);
  rep["passed"] = pass_count;
  rep["nt_equals_reversible_pass"] = nt_mr_pass;
  rep["nt_equals_reversible_applicable"] = nt_mr_applicable;
  return out;
}

}  // namespace qms
