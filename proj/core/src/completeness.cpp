// SPDX-License-Identifier: Apache-2.0

#include "freqcover/completeness.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

namespace freqcover {

bool FrequencyBand::contains(double omega) const {
  if (omega < a_min || omega > a_max) return false;
  for (const auto& [lo, hi] : excluded) {
    if (omega >= lo && omega <= hi) return false;
  }
  return true;
}

FrequencyBand make_band(double a_min, double a_max, const SpectrumEstimate& spectrum,
                        double guard_radius) {
  if (!(a_min > 0.0)) throw SolverError("band lower edge must be positive");
  if (!(a_min < a_max)) throw SolverError("band requires a_min < a_max");
  if (guard_radius < 0.0) throw SolverError("guard radius must be non-negative");

  FrequencyBand band;
  band.a_min = a_min;
  band.a_max = a_max;
  band.guard_radius = guard_radius;
  if (guard_radius > 0.0) {
    for (double wk : spectrum.omegas) {
      const double lo = wk - guard_radius;
      const double hi = wk + guard_radius;
      if (hi < a_min || lo > a_max) continue;
      band.excluded.emplace_back(std::max(lo, a_min), std::min(hi, a_max));
    }
    std::sort(band.excluded.begin(), band.excluded.end());
  }

  // The guards must leave something admissible.
  double cursor = a_min;
  bool has_gap = false;
  for (const auto& [lo, hi] : band.excluded) {
    if (lo > cursor) {
      has_gap = true;
      break;
    }
    cursor = std::max(cursor, hi);
  }
  if (!has_gap && cursor < a_max) has_gap = true;
  if (!has_gap) throw SolverError("eigen guards exclude the whole band");
  return band;
}

CompletenessReport evaluate_tuple(const std::vector<const ConstraintField*>& fields,
                                  double delta) {
  if (fields.empty()) throw SolverError("tuple must contain at least one frequency");
  const std::size_t k_count = fields.size();
  const ConstraintField& first = *fields.front();
  for (const auto* f : fields) {
    if (f->values.size() != first.values.size() || f->mask.count() != first.mask.count() ||
        f->mask.first(0) != first.mask.first(0) || f->mask.last(0) != first.mask.last(0) ||
        (f->mask.dim() == 2 && (f->mask.first(1) != first.mask.first(1) ||
                                f->mask.last(1) != first.mask.last(1))))
      throw SolverError("tuple members live on different masks");
  }

  CompletenessReport report;
  report.delta = delta;
  report.tuple.reserve(k_count);
  double scale = 0.0;
  for (const auto* f : fields) {
    report.tuple.push_back(f->omega);
    scale = std::max(scale, f->scale);
  }
  report.scale = scale;
  const double threshold = delta * scale;

  const std::size_t n_nodes = first.values.size();
  report.cover.resize(n_nodes);
  report.cover_histogram.assign(k_count, 0);

  double margin_sum = std::numeric_limits<double>::infinity();
  double margin_max = std::numeric_limits<double>::infinity();
  std::vector<double> abs_vals(k_count);
  for (std::size_t m = 0; m < n_nodes; ++m) {
    std::size_t winner = 0;
    double best = -1.0;
    for (std::size_t k = 0; k < k_count; ++k) {
      const double a = std::abs(fields[k]->values[m]);
      abs_vals[k] = a;
      if (a > best) {
        best = a;
        winner = k;
      }
    }
    // Ascending-order accumulation: exactly permutation invariant.
    std::sort(abs_vals.begin(), abs_vals.end());
    double sum = 0.0;
    for (double a : abs_vals) sum += a;

    margin_sum = std::min(margin_sum, sum);
    margin_max = std::min(margin_max, best);
    report.cover[m] = static_cast<std::int32_t>(winner);
    ++report.cover_histogram[winner];
    if (scale == 0.0 || best <= threshold)
      report.bad_nodes.push_back(static_cast<std::uint32_t>(m));
  }

  report.margin_sum = margin_sum;
  report.margin_max = margin_max;
  report.normalized_margin = scale > 0.0 ? margin_sum / scale : 0.0;
  report.complete = report.bad_nodes.empty();
  return report;
}

NearZeroSet near_zero_set(const ConstraintField& field, double delta,
                          std::optional<double> scale_override) {
  NearZeroSet set;
  set.omega = field.omega;
  set.universe = static_cast<std::int64_t>(field.values.size());
  const double scale = scale_override.value_or(field.scale);
  set.threshold = delta * scale;
  for (std::size_t m = 0; m < field.values.size(); ++m) {
    if (scale == 0.0 || std::abs(field.values[m]) <= set.threshold)
      set.nodes.push_back(static_cast<std::uint32_t>(m));
  }
  set.fraction = set.universe > 0
                     ? static_cast<double>(set.nodes.size()) / static_cast<double>(set.universe)
                     : 0.0;
  return set;
}

std::vector<std::uint32_t> intersect_near_zero(const std::vector<NearZeroSet>& sets) {
  if (sets.empty()) throw SolverError("intersection of zero near-zero sets");
  for (const auto& s : sets) {
    if (s.universe != sets.front().universe)
      throw SolverError("near-zero sets live on different masks");
  }
  std::vector<std::uint32_t> acc = sets.front().nodes;
  for (std::size_t i = 1; i < sets.size() && !acc.empty(); ++i) {
    std::vector<std::uint32_t> next;
    std::set_intersection(acc.begin(), acc.end(), sets[i].nodes.begin(), sets[i].nodes.end(),
                          std::back_inserter(next));
    acc = std::move(next);
  }
  return acc;
}

}  // namespace freqcover
