// SPDX-License-Identifier: Apache-2.0
//
// Completeness of a frequency tuple over the inner subdomain: the tuple
// (omega_1..omega_K) is complete at threshold delta when no masked node has
// max_k |theta_k| <= delta * scale, where scale is the tuple-wide
// normalization sup over the mask and over all members of |theta|.
// Margins:
//   margin_sum = min over nodes of sum_k |theta_k|
//   margin_max = min over nodes of max_k |theta_k|
//   normalized_margin = margin_sum / scale   (0 when scale == 0)
// The per-node sum is accumulated in ascending order of |theta_k| so the
// margins are exactly invariant under tuple reordering.

#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "freqcover/functional.hpp"
#include "freqcover/solver.hpp"

namespace freqcover {

// Admissible frequency interval [a_min, a_max] minus guard intervals around
// estimated Dirichlet eigenfrequencies.
struct FrequencyBand {
  double a_min = 0.0;
  double a_max = 0.0;
  double guard_radius = 0.0;
  std::vector<std::pair<double, double>> excluded;  // closed intervals

  bool contains(double omega) const;
};

// Guard intervals are [omega_k - r, omega_k + r] clipped to the band; throws
// SolverError if a_min >= a_max, a_min <= 0, or the exclusions cover the
// whole band.
FrequencyBand make_band(double a_min, double a_max, const SpectrumEstimate& spectrum,
                        double guard_radius);

struct CompletenessReport {
  std::vector<double> tuple;
  double delta = 0.0;
  double scale = 0.0;
  double margin_sum = 0.0;
  double margin_max = 0.0;
  double normalized_margin = 0.0;
  bool complete = false;
  std::vector<std::uint32_t> bad_nodes;      // mask-linear indices, ascending
  std::vector<std::int32_t> cover;           // per masked node: argmax_k |theta_k|
  std::vector<std::int64_t> cover_histogram; // node count per tuple member
};

// All fields must live on identical masks; K >= 1.  Throws SolverError on
// mismatched masks or an empty tuple.
CompletenessReport evaluate_tuple(const std::vector<const ConstraintField*>& fields,
                                  double delta);

struct NearZeroSet {
  double omega = 0.0;
  double threshold = 0.0;                 // absolute: delta * scale used
  std::int64_t universe = 0;              // masked node count
  std::vector<std::uint32_t> nodes;       // ascending mask-linear indices
  double fraction = 0.0;
};

// Near-zero nodes of one field: |theta| <= delta * scale.  By default scale
// is the field's own sup; pass scale_override (e.g. a tuple-wide scale) to
// align thresholds across members.  A zero scale marks every node near-zero.
NearZeroSet near_zero_set(const ConstraintField& field, double delta,
                          std::optional<double> scale_override = std::nullopt);

// Sorted intersection; all sets must share the same universe size.
std::vector<std::uint32_t> intersect_near_zero(const std::vector<NearZeroSet>& sets);

}  // namespace freqcover
