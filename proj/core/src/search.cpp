// SPDX-License-Identifier: Apache-2.0

#include "freqcover/search.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "parallel.hpp"

namespace freqcover {
namespace {

// One constraint field for one frequency: d+1 assemblies and solves.
struct FieldBuild {
  std::optional<ConstraintField> field;
  bool usable = false;
  std::int64_t solves = 0;
};

FieldBuild build_field(const SearchProblem& problem, double omega) {
  FieldBuild out;
  try {
    // The matrix depends only on omega, so factor once and back-substitute
    // every boundary condition through it.
    std::vector<DiscreteSystem> systems;
    systems.reserve(problem.bcs.size());
    for (std::size_t b = 0; b < problem.bcs.size(); ++b) {
      systems.push_back(assemble(problem.grid, problem.coeffs, omega, problem.bcs[b],
                                 nullptr, nullptr, static_cast<int>(b)));
    }
    std::vector<const DiscreteSystem*> ptrs;
    for (const auto& sys : systems) ptrs.push_back(&sys);
    std::vector<ComplexField> fields = solve_shared(ptrs, problem.grid, problem.solve_options);
    out.solves = static_cast<std::int64_t>(fields.size());
    for (const ComplexField& f : fields) {
      if (f.flagged_near_eigenvalue) return out;  // unusable: too close to resonance
    }
    SolutionBundle bundle = make_bundle(problem.grid, std::move(fields));
    out.field = constraint_field(problem.grid, problem.mask, bundle);
    out.usable = true;
  } catch (const SolverError&) {
    out.field.reset();
    out.usable = false;
  }
  return out;
}

void check_problem(const SearchProblem& problem) {
  if (problem.bcs.size() != static_cast<std::size_t>(problem.grid.dim() + 1))
    throw SearchError("search problem needs exactly dim + 1 boundary conditions");
}

// Number of nondecreasing k-tuples out of m candidates, saturating at `cap`.
std::int64_t tuple_count(std::int64_t m, int k, std::int64_t cap) {
  // C(m + k - 1, k) computed multiplicatively.
  long double acc = 1.0L;
  for (int i = 1; i <= k; ++i) {
    acc = acc * static_cast<long double>(m - 1 + i) / static_cast<long double>(i);
    if (acc > static_cast<long double>(cap) * 2.0L) return cap + 1;
  }
  return static_cast<std::int64_t>(acc + 0.5L);
}

// Margins of one tuple given per-field |theta| arrays; ascending-order sums.
struct TupleMargins {
  double margin_sum = 0.0;
  double margin_max = 0.0;
  double scale = 0.0;
  bool complete = false;
};

TupleMargins tuple_margins(const std::vector<const std::vector<double>*>& abs_fields,
                           const std::vector<double>& scales, double delta) {
  TupleMargins out;
  const std::size_t k_count = abs_fields.size();
  double scale = 0.0;
  for (double s : scales) scale = std::max(scale, s);
  out.scale = scale;
  const double threshold = delta * scale;

  const std::size_t n = abs_fields.front()->size();
  double margin_sum = std::numeric_limits<double>::infinity();
  double margin_max = std::numeric_limits<double>::infinity();
  bool any_bad = scale == 0.0;
  std::vector<double> vals(k_count);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = 0; k < k_count; ++k) vals[k] = (*abs_fields[k])[m];
    std::sort(vals.begin(), vals.end());
    double sum = 0.0;
    for (double v : vals) sum += v;
    const double mx = vals.back();
    margin_sum = std::min(margin_sum, sum);
    margin_max = std::min(margin_max, mx);
    if (mx <= threshold) any_bad = true;
  }
  out.margin_sum = margin_sum;
  out.margin_max = margin_max;
  out.complete = !any_bad && n > 0;
  return out;
}

std::uint64_t key_of(double omega) { return std::bit_cast<std::uint64_t>(omega); }

// 53-bit uniform in [0, 1); reproducible across standard libraries.
double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

CandidateSet precompute_fields(const SearchProblem& problem, const FrequencyBand& band,
                               int m) {
  check_problem(problem);
  const int need = problem.grid.dim() + 2;
  if (m < need) throw SearchError("candidate count must be at least dim + 2");

  std::vector<double> grid_omegas;
  grid_omegas.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    grid_omegas.push_back(band.a_min +
                          (band.a_max - band.a_min) * static_cast<double>(k) /
                              static_cast<double>(m - 1));
  }

  CandidateSet set;
  std::vector<double> attempted;
  for (double w : grid_omegas) {
    if (band.contains(w))
      attempted.push_back(w);
    else
      set.dropped_guard.push_back(w);
  }

  std::vector<FieldBuild> builds(attempted.size());
  detail::parallel_for(static_cast<std::int64_t>(attempted.size()), [&](std::int64_t i) {
    builds[static_cast<std::size_t>(i)] =
        build_field(problem, attempted[static_cast<std::size_t>(i)]);
  });

  for (std::size_t i = 0; i < attempted.size(); ++i) {
    set.num_solves += builds[i].solves;
    if (builds[i].usable) {
      set.omegas.push_back(attempted[i]);
      set.fields.push_back(std::move(*builds[i].field));
    } else {
      set.dropped_flagged.push_back(attempted[i]);
    }
  }

  if (static_cast<int>(set.omegas.size()) < need)
    throw SearchError("fewer than dim + 2 candidates survive the eigen guards");
  return set;
}

SweepResult sweep(const CandidateSet& candidates, int k, double delta, std::int64_t budget) {
  if (k < 1) throw SearchError("tuple size must be >= 1");
  const auto m = static_cast<std::int64_t>(candidates.omegas.size());
  if (m == 0) throw SearchError("candidate set is empty");
  const std::int64_t total = tuple_count(m, k, budget);
  if (total > budget) throw SearchError("sweep exceeds the tuple budget");

  // |theta| per candidate, computed once.
  std::vector<std::vector<double>> abs_fields(static_cast<std::size_t>(m));
  for (std::size_t c = 0; c < abs_fields.size(); ++c) {
    const auto& vals = candidates.fields[c].values;
    abs_fields[c].resize(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) abs_fields[c][i] = std::abs(vals[i]);
  }

  SweepResult result;
  result.k = k;
  result.delta = delta;
  result.num_tuples = total;
  result.rows.reserve(static_cast<std::size_t>(total));

  std::vector<int> idx(static_cast<std::size_t>(k), 0);
  std::vector<const std::vector<double>*> tuple_abs(static_cast<std::size_t>(k));
  std::vector<double> tuple_scales(static_cast<std::size_t>(k));
  std::int64_t complete_count = 0;
  for (;;) {
    for (int q = 0; q < k; ++q) {
      tuple_abs[static_cast<std::size_t>(q)] = &abs_fields[static_cast<std::size_t>(idx[static_cast<std::size_t>(q)])];
      tuple_scales[static_cast<std::size_t>(q)] =
          candidates.fields[static_cast<std::size_t>(idx[static_cast<std::size_t>(q)])].scale;
    }
    const TupleMargins tm = tuple_margins(tuple_abs, tuple_scales, delta);

    SweepRow row;
    row.tuple.reserve(static_cast<std::size_t>(k));
    for (int q = 0; q < k; ++q)
      row.tuple.push_back(candidates.omegas[static_cast<std::size_t>(idx[static_cast<std::size_t>(q)])]);
    row.normalized_margin = tm.scale > 0.0 ? tm.margin_sum / tm.scale : 0.0;
    row.complete = tm.complete;
    if (tm.complete) ++complete_count;

    if (!result.best_index ||
        row.normalized_margin > result.rows[*result.best_index].normalized_margin)
      result.best_index = result.rows.size();
    result.rows.push_back(std::move(row));
    result.pointwise_ops +=
        static_cast<std::int64_t>(k) * static_cast<std::int64_t>(abs_fields.front().size());

    int pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == m - 1) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int q = pos + 1; q < k; ++q)
      idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(pos)];
  }

  result.fraction_complete =
      result.rows.empty() ? 0.0
                          : static_cast<double>(complete_count) /
                                static_cast<double>(result.rows.size());
  return result;
}

GreedyTrace greedy_select(const CandidateSet& candidates, double delta, int max_steps) {
  if (max_steps < 1) throw SearchError("greedy needs at least one step");
  const std::size_t m = candidates.omegas.size();
  if (m == 0) throw SearchError("candidate set is empty");
  const std::size_t n_nodes = candidates.fields.front().values.size();

  // Near-zero membership per candidate at its own scale.
  std::vector<std::vector<std::uint8_t>> near(m);
  for (std::size_t c = 0; c < m; ++c) {
    near[c].assign(n_nodes, 0);
    const NearZeroSet nz = near_zero_set(candidates.fields[c], delta);
    for (std::uint32_t node : nz.nodes) near[c][node] = 1;
  }

  std::vector<std::uint32_t> bad(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) bad[i] = static_cast<std::uint32_t>(i);

  GreedyTrace trace;
  std::vector<std::size_t> chosen;
  trace.status = "max_steps";
  for (int step = 0; step < max_steps && !bad.empty(); ++step) {
    std::size_t best_c = 0;
    std::int64_t best_count = -1;
    for (std::size_t c = 0; c < m; ++c) {
      std::int64_t cnt = 0;
      for (std::uint32_t node : bad) cnt += near[c][node];
      if (best_count < 0 || cnt < best_count) {
        best_count = cnt;
        best_c = c;  // candidates ascend in omega, so ties keep the smallest
      }
    }
    if (best_count >= static_cast<std::int64_t>(bad.size())) {
      trace.status = "stagnated";
      break;
    }

    GreedyStep gs;
    gs.omega = candidates.omegas[best_c];
    gs.bad_before = static_cast<std::int64_t>(bad.size());
    std::vector<std::uint32_t> next;
    next.reserve(static_cast<std::size_t>(best_count));
    for (std::uint32_t node : bad)
      if (near[best_c][node]) next.push_back(node);
    bad = std::move(next);
    gs.bad_after = static_cast<std::int64_t>(bad.size());
    trace.steps.push_back(gs);
    chosen.push_back(best_c);
    if (bad.empty()) trace.status = "complete";
  }

  if (chosen.empty()) throw SearchError("greedy made no progress from the full mask");

  std::vector<const ConstraintField*> tuple;
  tuple.reserve(chosen.size());
  for (std::size_t c : chosen) tuple.push_back(&candidates.fields[c]);
  trace.final_report = evaluate_tuple(tuple, delta);
  return trace;
}

DensityReport density_experiment(const SearchProblem& problem, const FrequencyBand& band,
                                 int samples, double delta, double perturb_radius,
                                 std::uint64_t seed) {
  check_problem(problem);
  if (samples < 1) throw SearchError("density experiment needs at least one sample");
  if (!(perturb_radius > 0.0)) throw SearchError("perturb radius must be positive");

  const int arity = problem.grid.dim() + 1;
  constexpr int kPerturbations = 32;
  constexpr int kMaxRejections = 100000;

  // All randomness is drawn up front from one stream: first the tuples (with
  // per-coordinate rejection on the guard intervals), then every perturbation
  // batch, whether or not it ends up being used.
  std::mt19937_64 gen(seed);
  std::vector<std::vector<double>> tuples(static_cast<std::size_t>(samples));
  for (auto& tuple : tuples) {
    tuple.resize(static_cast<std::size_t>(arity));
    for (double& w : tuple) {
      int tries = 0;
      do {
        w = band.a_min + (band.a_max - band.a_min) * uniform01(gen);
        if (++tries > kMaxRejections)
          throw SearchError("rejection sampling failed; guards too tight");
      } while (!band.contains(w));
    }
  }
  std::vector<std::vector<std::vector<double>>> perturbations(
      static_cast<std::size_t>(samples));
  for (auto& batch : perturbations) {
    batch.resize(kPerturbations);
    for (auto& shift : batch) {
      shift.resize(static_cast<std::size_t>(arity));
      for (double& s : shift) s = perturb_radius * (2.0 * uniform01(gen) - 1.0);
    }
  }

  // Field cache keyed by the exact bits of omega.
  std::map<std::uint64_t, FieldBuild> cache;
  std::int64_t num_solves = 0;
  auto get_field = [&](double omega) -> const FieldBuild& {
    auto it = cache.find(key_of(omega));
    if (it == cache.end()) {
      FieldBuild fb = build_field(problem, omega);
      num_solves += fb.solves;
      it = cache.emplace(key_of(omega), std::move(fb)).first;
    }
    return it->second;
  };

  // Parallel warm-up of the main batch (deterministic: each field depends
  // only on its omega).
  {
    std::vector<double> unique_omegas;
    for (const auto& tuple : tuples)
      for (double w : tuple) unique_omegas.push_back(w);
    std::sort(unique_omegas.begin(), unique_omegas.end());
    unique_omegas.erase(std::unique(unique_omegas.begin(), unique_omegas.end()),
                        unique_omegas.end());
    std::vector<FieldBuild> builds(unique_omegas.size());
    detail::parallel_for(static_cast<std::int64_t>(unique_omegas.size()),
                         [&](std::int64_t i) {
                           builds[static_cast<std::size_t>(i)] =
                               build_field(problem, unique_omegas[static_cast<std::size_t>(i)]);
                         });
    for (std::size_t i = 0; i < unique_omegas.size(); ++i) {
      num_solves += builds[i].solves;
      cache.emplace(key_of(unique_omegas[i]), std::move(builds[i]));
    }
  }

  struct Evaluated {
    bool ok = false;       // all member fields usable
    bool complete = false;
    double normalized_margin = 0.0;
  };
  auto evaluate = [&](const std::vector<double>& tuple) -> Evaluated {
    Evaluated ev;
    std::vector<const ConstraintField*> fields;
    fields.reserve(tuple.size());
    for (double w : tuple) {
      const FieldBuild& fb = get_field(w);
      if (!fb.usable) return ev;
      fields.push_back(&*fb.field);
    }
    ev.ok = true;
    const CompletenessReport report = evaluate_tuple(fields, delta);
    ev.complete = report.complete;
    ev.normalized_margin = report.normalized_margin;
    return ev;
  };

  DensityReport report;
  report.seed = seed;
  report.samples = samples;
  report.delta = delta;
  report.perturb_radius = perturb_radius;
  report.tuples.resize(static_cast<std::size_t>(samples));

  int complete_count = 0;
  for (int s = 0; s < samples; ++s) {
    DensityTupleResult& r = report.tuples[static_cast<std::size_t>(s)];
    r.tuple = tuples[static_cast<std::size_t>(s)];
    const Evaluated ev = evaluate(r.tuple);
    r.flagged = !ev.ok;
    r.complete = ev.complete;
    r.normalized_margin = ev.normalized_margin;

    if (r.complete) {
      ++complete_count;
      // Openness probe: +-(radius/10) on each coordinate separately.
      double lo = std::numeric_limits<double>::infinity();
      double hi = 0.0;
      for (int c = 0; c < arity; ++c) {
        for (int sign = -1; sign <= 1; sign += 2) {
          std::vector<double> probe = r.tuple;
          probe[static_cast<std::size_t>(c)] += sign * perturb_radius / 10.0;
          if (!band.contains(probe[static_cast<std::size_t>(c)])) continue;
          const Evaluated pe = evaluate(probe);
          if (!pe.ok) continue;
          ++r.probes;
          lo = std::min(lo, pe.normalized_margin);
          hi = std::max(hi, pe.normalized_margin);
        }
      }
      if (r.probes > 0) {
        r.probe_margin_min = lo;
        r.probe_margin_max = hi;
      }
    } else {
      // Recovery search within the perturbation radius.
      const auto& batch = perturbations[static_cast<std::size_t>(s)];
      for (int j = 0; j < kPerturbations && !r.recovered; ++j) {
        ++r.attempts;
        std::vector<double> shifted = r.tuple;
        double dist = 0.0;
        bool admissible = true;
        for (int c = 0; c < arity; ++c) {
          shifted[static_cast<std::size_t>(c)] += batch[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)];
          dist = std::max(dist, std::abs(batch[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)]));
          if (!band.contains(shifted[static_cast<std::size_t>(c)])) admissible = false;
        }
        if (!admissible) continue;
        const Evaluated pe = evaluate(shifted);
        if (pe.ok && pe.complete) {
          r.recovered = true;
          r.recovery_distance = dist;
          r.recovered_tuple = shifted;
        }
      }
    }
  }

  report.fraction_complete =
      static_cast<double>(complete_count) / static_cast<double>(samples);
  report.num_solves = num_solves;
  return report;
}

std::vector<OptimalityRow> optimality_experiment(const CandidateSet& candidates,
                                                 double delta, int k_min, int k_max,
                                                 std::int64_t budget) {
  if (k_min < 1 || k_max < k_min) throw SearchError("invalid k range");
  std::vector<OptimalityRow> rows;
  for (int k = k_min; k <= k_max; ++k) {
    const SweepResult sr = sweep(candidates, k, delta, budget);
    OptimalityRow row;
    row.k = k;
    row.fraction_complete = sr.fraction_complete;
    row.best_normalized_margin =
        sr.best_index ? sr.rows[*sr.best_index].normalized_margin : 0.0;
    row.num_tuples = sr.num_tuples;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace freqcover
