// SPDX-License-Identifier: Apache-2.0

#include "freqcover/run.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "freqcover/io.hpp"
#include "freqcover/search.hpp"

namespace freqcover {
namespace {

using nlohmann::json;

// Everything a verb might need, built lazily so cheap verbs stay cheap.
struct Context {
  const RunConfig& config;
  std::string out_dir;
  Grid grid;
  InnerMask mask;
  CoeffSet coeffs;
  std::vector<Expr> bcs;
  SolveOptions solve_options;

  std::optional<SpectrumEstimate> spectrum;
  std::optional<FrequencyBand> band;

  explicit Context(const RunConfig& cfg, const RunFlags& flags)
      : config(cfg),
        out_dir(flags.output_dir.value_or(cfg.output_dir)),
        grid(cfg.make_grid()),
        mask(cfg.make_mask()),
        coeffs(cfg.make_coeffs()),
        bcs(cfg.make_bcs()) {
    solve_options.tol_rel = cfg.tolerances.tol_rel;
    solve_options.blowup_factor = cfg.tolerances.blowup_factor;
  }

  const SpectrumEstimate& get_spectrum() {
    if (!spectrum) {
      spectrum = estimate_dirichlet_eigenvalues(grid, coeffs, config.band.eigen_count);
      solve_options.spectrum = &*spectrum;
    }
    return *spectrum;
  }

  const FrequencyBand& get_band() {
    if (!band)
      band = make_band(config.band.a_min, config.band.a_max, get_spectrum(),
                       config.band.guard_radius);
    return *band;
  }

  SearchProblem problem() {
    get_band();  // ensures solve_options.spectrum is wired
    return SearchProblem{grid, mask, coeffs, bcs, solve_options};
  }

  std::string path(const std::string& name) const {
    return (std::filesystem::path(out_dir) / name).string();
  }
};

json completeness_json(const CompletenessReport& report) {
  json j;
  j["tuple"] = report.tuple;
  j["delta"] = report.delta;
  j["scale"] = report.scale;
  j["margin_sum"] = report.margin_sum;
  j["margin_max"] = report.margin_max;
  j["normalized_margin"] = report.normalized_margin;
  j["complete"] = report.complete;
  j["bad_set_count"] = report.bad_nodes.size();
  j["cover_histogram"] = report.cover_histogram;
  return j;
}

void write_json(Context& ctx, const std::string& name, const json& j) {
  atomic_write(ctx.path(name), j.dump(2) + "\n");
}

ConstraintField build_constraint(Context& ctx, double omega) {
  std::vector<ComplexField> fields;
  for (std::size_t b = 0; b < ctx.bcs.size(); ++b) {
    DiscreteSystem sys = assemble(ctx.grid, ctx.coeffs, omega, ctx.bcs[b], nullptr, nullptr,
                                  static_cast<int>(b));
    ComplexField f = solve(sys, ctx.grid, ctx.solve_options);
    if (f.flagged_near_eigenvalue)
      throw SolverError("omega " + format_double(omega) + " is flagged near an eigenvalue");
    fields.push_back(std::move(f));
  }
  return constraint_field(ctx.grid, ctx.mask, make_bundle(ctx.grid, std::move(fields)));
}

int verb_validate(Context& ctx, std::ostream& out) {
  const ValidationReport report = validate_coefficients(ctx.coeffs, ctx.grid);
  json j;
  j["verb"] = "validate";
  j["pass"] = report.pass;
  j["checked_points"] = report.checked_points;
  if (report.first_violation) {
    const auto& v = *report.first_violation;
    j["first_violation"] = {{"quantity", v.quantity},
                            {"bound", v.bound},
                            {"location", {v.location[0], v.location[1]}},
                            {"value", v.value}};
  } else {
    j["first_violation"] = nullptr;
  }
  write_json(ctx, "validate.json", j);
  out << "validate: " << (report.pass ? "pass" : "FAIL") << " (" << report.checked_points
      << " sample points)\n";
  return kExitOk;
}

int verb_eigs(Context& ctx, std::ostream& out) {
  const SpectrumEstimate& spectrum = ctx.get_spectrum();
  json j;
  j["verb"] = "eigs";
  j["count"] = spectrum.omegas.size();
  j["omegas"] = spectrum.omegas;
  write_json(ctx, "eigs.json", j);
  out << "eigs: " << spectrum.omegas.size() << " eigenfrequencies, omega_1 = "
      << format_double(spectrum.omegas.empty() ? 0.0 : spectrum.omegas.front()) << "\n";
  return kExitOk;
}

int verb_solve(Context& ctx, const RunFlags& flags, std::ostream& out) {
  if (!flags.omega) throw ConfigError("solve requires --omega");
  Expr bc;
  if (flags.bc) {
    bc = Expr::parse(*flags.bc);
    if (bc.max_axis() >= ctx.grid.dim())
      throw ConfigError("--bc expression references an axis beyond dim");
  } else {
    bc = ctx.bcs.front();
  }
  DiscreteSystem sys = assemble(ctx.grid, ctx.coeffs, *flags.omega, bc);
  const ComplexField field = solve(sys, ctx.grid, ctx.solve_options);
  atomic_write(ctx.path("solve.csv"), field_csv(ctx.grid, field));
  out << "solve: omega = " << format_double(*flags.omega)
      << ", residual = " << format_double(field.residual)
      << (field.flagged_near_eigenvalue ? ", flagged near eigenvalue" : "") << "\n";
  return kExitOk;
}

int verb_field(Context& ctx, const RunFlags& flags, std::ostream& out) {
  if (!flags.omega) throw ConfigError("field requires --omega");
  const ConstraintField theta = build_constraint(ctx, *flags.omega);
  atomic_write(ctx.path("field.csv"), constraint_csv(ctx.grid, theta));
  atomic_write(ctx.path("field.pgm"), heatmap_pgm(theta));
  out << "field: omega = " << format_double(*flags.omega)
      << ", scale = " << format_double(theta.scale) << "\n";
  return kExitOk;
}

int verb_check(Context& ctx, const RunFlags& flags, std::ostream& out) {
  if (!flags.tuple || flags.tuple->empty()) throw ConfigError("check requires --tuple");
  std::vector<ConstraintField> fields;
  fields.reserve(flags.tuple->size());
  for (double w : *flags.tuple) fields.push_back(build_constraint(ctx, w));
  std::vector<const ConstraintField*> ptrs;
  for (const auto& f : fields) ptrs.push_back(&f);
  const CompletenessReport report = evaluate_tuple(ptrs, ctx.config.tolerances.delta);

  json j = completeness_json(report);
  j["verb"] = "check";
  write_json(ctx, "check.json", j);
  atomic_write(ctx.path("badset.pgm"), mask_pgm(ctx.mask, report.bad_nodes));
  out << "check: " << (report.complete ? "complete" : "incomplete") << ", normalized margin "
      << format_double(report.normalized_margin) << ", bad nodes " << report.bad_nodes.size()
      << "\n";
  return report.complete ? kExitOk : kExitIncomplete;
}

json sweep_json(const SweepResult& result, const CandidateSet& candidates) {
  json j;
  j["k"] = result.k;
  j["delta"] = result.delta;
  j["num_tuples"] = result.num_tuples;
  j["fraction_complete"] = result.fraction_complete;
  j["pointwise_ops"] = result.pointwise_ops;
  j["num_solves"] = candidates.num_solves;
  j["omegas"] = candidates.omegas;
  j["dropped_guard"] = candidates.dropped_guard;
  j["dropped_flagged"] = candidates.dropped_flagged;
  if (result.best_index) {
    const SweepRow& best = result.rows[*result.best_index];
    j["best"] = {{"tuple", best.tuple},
                 {"normalized_margin", best.normalized_margin},
                 {"complete", best.complete}};
  } else {
    j["best"] = nullptr;
  }
  json rows = json::array();
  for (const auto& row : result.rows) {
    rows.push_back({{"tuple", row.tuple},
                    {"normalized_margin", row.normalized_margin},
                    {"complete", row.complete}});
  }
  j["rows"] = rows;
  return j;
}

int verb_sweep(Context& ctx, const RunFlags& flags, std::ostream& out) {
  const CandidateSet candidates = precompute_fields(ctx.problem(), ctx.get_band(),
                                                    ctx.config.search.m);
  const int k = flags.k.value_or(ctx.config.search.k);
  const SweepResult result = sweep(candidates, k, ctx.config.tolerances.delta,
                                   ctx.config.search.budget);

  json j = sweep_json(result, candidates);
  j["verb"] = "sweep";
  write_json(ctx, "sweep.json", j);

  if (flags.csv) {
    std::ostringstream csv;
    for (int q = 1; q <= result.k; ++q) csv << "omega_" << q << ',';
    csv << "normalized_margin,complete\n";
    for (const auto& row : result.rows) {
      for (double w : row.tuple) csv << format_double(w) << ',';
      csv << format_double(row.normalized_margin) << ',' << (row.complete ? 1 : 0) << '\n';
    }
    atomic_write(ctx.path("sweep.csv"), csv.str());
  }

  const bool any_complete = result.fraction_complete > 0.0;
  out << "sweep: k = " << result.k << ", " << result.num_tuples << " tuples, fraction complete "
      << format_double(result.fraction_complete) << "\n";
  return any_complete ? kExitOk : kExitIncomplete;
}

int verb_greedy(Context& ctx, std::ostream& out) {
  const CandidateSet candidates = precompute_fields(ctx.problem(), ctx.get_band(),
                                                    ctx.config.search.m);
  const GreedyTrace trace = greedy_select(candidates, ctx.config.tolerances.delta,
                                          ctx.config.search.max_greedy_steps);
  json j;
  j["verb"] = "greedy";
  j["status"] = trace.status;
  json steps = json::array();
  for (const auto& s : trace.steps) {
    steps.push_back(
        {{"omega", s.omega}, {"bad_before", s.bad_before}, {"bad_after", s.bad_after}});
  }
  j["steps"] = steps;
  j["final"] = completeness_json(trace.final_report);
  j["num_solves"] = candidates.num_solves;
  write_json(ctx, "greedy.json", j);
  out << "greedy: " << trace.status << " after " << trace.steps.size()
      << " steps, final bad nodes " << trace.final_report.bad_nodes.size() << "\n";
  return trace.final_report.complete ? kExitOk : kExitIncomplete;
}

int verb_density(Context& ctx, std::ostream& out) {
  const DensityReport report = density_experiment(
      ctx.problem(), ctx.get_band(), ctx.config.search.samples, ctx.config.tolerances.delta,
      ctx.config.search.perturb_radius, ctx.config.search.seed);
  json j;
  j["verb"] = "density";
  j["seed"] = report.seed;
  j["samples"] = report.samples;
  j["delta"] = report.delta;
  j["perturb_radius"] = report.perturb_radius;
  j["fraction_complete"] = report.fraction_complete;
  j["num_solves"] = report.num_solves;
  j["rng"] = "mt19937_64/53-bit";
  json tuples = json::array();
  for (const auto& t : report.tuples) {
    json tj;
    tj["tuple"] = t.tuple;
    tj["complete"] = t.complete;
    tj["flagged"] = t.flagged;
    tj["normalized_margin"] = t.normalized_margin;
    if (t.complete) {
      tj["probes"] = t.probes;
      tj["probe_margin_min"] = t.probe_margin_min;
      tj["probe_margin_max"] = t.probe_margin_max;
    } else {
      tj["recovered"] = t.recovered;
      tj["attempts"] = t.attempts;
      if (t.recovered) {
        tj["recovery_distance"] = t.recovery_distance;
        tj["recovered_tuple"] = t.recovered_tuple;
      }
    }
    tuples.push_back(tj);
  }
  j["tuples"] = tuples;
  write_json(ctx, "density.json", j);
  out << "density: fraction complete " << format_double(report.fraction_complete) << " over "
      << report.samples << " tuples (" << report.num_solves << " solves)\n";
  return kExitOk;
}

int verb_optimality(Context& ctx, std::ostream& out) {
  const CandidateSet candidates = precompute_fields(ctx.problem(), ctx.get_band(),
                                                    ctx.config.search.m);
  const auto rows = optimality_experiment(candidates, ctx.config.tolerances.delta, 1,
                                          ctx.grid.dim() + 2, ctx.config.search.budget);
  json j;
  j["verb"] = "optimality";
  j["num_solves"] = candidates.num_solves;
  json rows_json = json::array();
  for (const auto& row : rows) {
    rows_json.push_back({{"k", row.k},
                         {"fraction_complete", row.fraction_complete},
                         {"best_normalized_margin", row.best_normalized_margin},
                         {"num_tuples", row.num_tuples}});
  }
  j["rows"] = rows_json;
  write_json(ctx, "optimality.json", j);
  out << "optimality: k in [1, " << ctx.grid.dim() + 2 << "]";
  for (const auto& row : rows)
    out << "  k=" << row.k << ": " << format_double(row.fraction_complete);
  out << "\n";
  return kExitOk;
}

int verb_report(Context& ctx, std::ostream& out) {
  static const char* kSections[] = {"validate.json", "eigs.json",    "check.json",
                                    "sweep.json",    "greedy.json",  "density.json",
                                    "optimality.json"};
  json j;
  j["verb"] = "report";
  json sections = json::object();
  int found = 0;
  for (const char* name : kSections) {
    const std::string path = ctx.path(name);
    std::ifstream in(path);
    if (!in) continue;
    json section;
    try {
      in >> section;
    } catch (const json::parse_error& e) {
      throw IoError("malformed JSON artifact '" + path + "': " + e.what());
    }
    std::string key(name);
    key = key.substr(0, key.find('.'));
    sections[key] = section;
    ++found;
  }
  j["sections"] = sections;
  write_json(ctx, "report.json", j);
  out << "report: merged " << found << " artifact(s) into report.json\n";
  return kExitOk;
}

}  // namespace

int run_command(const std::string& verb, const RunConfig& config, const RunFlags& flags,
                std::ostream& out, std::ostream& err) {
  try {
    Context ctx(config, flags);
    if (verb == "validate") return verb_validate(ctx, out);
    if (verb == "eigs") return verb_eigs(ctx, out);
    if (verb == "solve") return verb_solve(ctx, flags, out);
    if (verb == "field") return verb_field(ctx, flags, out);
    if (verb == "check") return verb_check(ctx, flags, out);
    if (verb == "sweep") return verb_sweep(ctx, flags, out);
    if (verb == "greedy") return verb_greedy(ctx, out);
    if (verb == "density") return verb_density(ctx, out);
    if (verb == "optimality") return verb_optimality(ctx, out);
    if (verb == "report") return verb_report(ctx, out);
    err << "error: unknown verb '" << verb << "'\n";
    return kExitFault;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFault;
  }
}

}  // namespace freqcover
