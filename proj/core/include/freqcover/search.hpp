// SPDX-License-Identifier: Apache-2.0
//
// Frequency-tuple search over a candidate grid: exhaustive sweeps over
// nondecreasing tuples, greedy bad-set reduction, randomized density and
// openness probes, and the k-versus-completeness optimality experiment.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "freqcover/completeness.hpp"
#include "freqcover/functional.hpp"
#include "freqcover/grid.hpp"
#include "freqcover/solver.hpp"

namespace freqcover {

class SearchError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Problem context shared by every search entry point.
struct SearchProblem {
  Grid grid;
  InnerMask mask;
  CoeffSet coeffs;
  std::vector<Expr> bcs;  // exactly dim + 1 boundary conditions
  SolveOptions solve_options;
};

struct CandidateSet {
  std::vector<double> omegas;            // surviving candidates, ascending
  std::vector<ConstraintField> fields;   // parallel to omegas
  std::vector<double> dropped_guard;     // removed by eigen-guard exclusion
  std::vector<double> dropped_flagged;   // removed by a flagged/failed solve
  std::int64_t num_solves = 0;           // interior linear solves performed
};

// M equispaced candidates omega_k = a_min + (a_max - a_min) (k-1)/(M-1) minus
// guard exclusions; d+1 solves per surviving candidate (parallel across
// candidates, capped by FREQCOVER_THREADS).  Throws SearchError if fewer than
// dim + 2 candidates survive.
CandidateSet precompute_fields(const SearchProblem& problem, const FrequencyBand& band,
                               int m);

struct SweepRow {
  std::vector<double> tuple;
  double normalized_margin = 0.0;
  bool complete = false;
};

struct SweepResult {
  int k = 0;
  double delta = 0.0;
  std::vector<SweepRow> rows;            // lexicographic in candidate indices
  std::optional<std::size_t> best_index; // max normalized margin (first such)
  double fraction_complete = 0.0;
  std::int64_t num_tuples = 0;
  std::int64_t pointwise_ops = 0;        // K * masked nodes per tuple, summed
};

// Enumerates all nondecreasing k-tuples of candidates (combinations with
// repetition).  Throws SearchError when that count exceeds `budget`.
SweepResult sweep(const CandidateSet& candidates, int k, double delta,
                  std::int64_t budget = 2000000);

struct GreedyStep {
  double omega = 0.0;
  std::int64_t bad_before = 0;
  std::int64_t bad_after = 0;
};

struct GreedyTrace {
  std::vector<GreedyStep> steps;
  std::string status;  // "complete", "stagnated", or "max_steps"
  CompletenessReport final_report;
};

// Starts from the full mask and repeatedly picks the candidate whose
// near-zero set (own-scale threshold delta) intersects the current bad set
// in the fewest nodes, requiring strict decrease (ties: smallest omega).
GreedyTrace greedy_select(const CandidateSet& candidates, double delta, int max_steps);

struct DensityTupleResult {
  std::vector<double> tuple;
  bool complete = false;
  bool flagged = false;                    // a member solve was eigen-flagged
  double normalized_margin = 0.0;
  // Failing tuples: recovery by perturbation search.
  bool recovered = false;
  int attempts = 0;
  double recovery_distance = 0.0;          // inf-norm of the recovering shift
  std::vector<double> recovered_tuple;
  // Complete tuples: openness probe margins at +-(perturb_radius/10) per
  // coordinate (probes falling outside the band are skipped).
  int probes = 0;
  double probe_margin_min = 0.0;
  double probe_margin_max = 0.0;
};

struct DensityReport {
  std::uint64_t seed = 0;
  int samples = 0;
  double delta = 0.0;
  double perturb_radius = 0.0;
  double fraction_complete = 0.0;
  std::vector<DensityTupleResult> tuples;
  std::int64_t num_solves = 0;
};

// Draws `samples` uniform (d+1)-tuples from the band (rejection on guard
// intervals), evaluates completeness, runs a 32-perturbation recovery search
// for failing tuples and an openness probe for complete ones.  All random
// numbers are pre-drawn from one mt19937_64 stream seeded with `seed`, so
// results are independent of thread count.
DensityReport density_experiment(const SearchProblem& problem, const FrequencyBand& band,
                                 int samples, double delta, double perturb_radius,
                                 std::uint64_t seed);

struct OptimalityRow {
  int k = 0;
  double fraction_complete = 0.0;
  double best_normalized_margin = 0.0;
  std::int64_t num_tuples = 0;
};

// Sweeps every k in [k_min, k_max] over the same candidate set.
std::vector<OptimalityRow> optimality_experiment(const CandidateSet& candidates,
                                                 double delta, int k_min, int k_max,
                                                 std::int64_t budget = 2000000);

}  // namespace freqcover
