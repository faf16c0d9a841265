// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "freqcover/completeness.hpp"
#include "freqcover/functional.hpp"
#include "freqcover/grid.hpp"
#include "freqcover/solver.hpp"

using freqcover::CompletenessReport;
using freqcover::Complex;
using freqcover::ConstraintField;
using freqcover::evaluate_tuple;
using freqcover::FrequencyBand;
using freqcover::Grid;
using freqcover::InnerMask;
using freqcover::intersect_near_zero;
using freqcover::make_band;
using freqcover::NearZeroSet;
using freqcover::near_zero_set;
using freqcover::SolverError;
using freqcover::SpectrumEstimate;

namespace {

InnerMask small_mask() {
  return InnerMask::create(Grid::create(1, {{0.0, 1.0}}, {8}), 0.125);  // 7 nodes
}

ConstraintField manual(const InnerMask& mask, double omega, std::vector<double> values) {
  ConstraintField f;
  f.omega = omega;
  f.mask = mask;
  f.values.reserve(values.size());
  double sup = 0.0;
  for (double v : values) {
    f.values.emplace_back(v, 0.0);
    sup = std::max(sup, std::abs(v));
  }
  f.scale = sup;
  return f;
}

ConstraintField random_constraint(const InnerMask& mask, double omega, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ConstraintField f;
  f.omega = omega;
  f.mask = mask;
  f.values.resize(static_cast<std::size_t>(mask.count()));
  double sup = 0.0;
  for (auto& v : f.values) {
    v = Complex(dist(gen), dist(gen));
    sup = std::max(sup, std::abs(v));
  }
  f.scale = sup;
  return f;
}

}  // namespace

TEST_SUITE_BEGIN("completeness");

TEST_CASE("band guards clip, sort, and exclude") {
  SpectrumEstimate spec;
  spec.omegas = {3.141592653589793, 6.283185307179586, 9.42477796076938,
                 12.566370614359172, 15.707963267948966, 18.84955592153876,
                 21.991148575128552};
  const FrequencyBand band = make_band(5.0, 20.0, spec, 0.1);
  // pi is below the band; 7 pi is above it; five guards remain.
  CHECK(band.excluded.size() == 5);
  CHECK(band.contains(5.0));
  CHECK(band.contains(20.0));
  CHECK_FALSE(band.contains(4.9999));
  CHECK_FALSE(band.contains(20.0001));
  CHECK_FALSE(band.contains(6.283185307179586));
  CHECK_FALSE(band.contains(6.19));
  CHECK(band.contains(6.4));
  CHECK_FALSE(band.contains(18.85));
  CHECK(band.contains(10.0));
}

TEST_CASE("band construction errors") {
  SpectrumEstimate spec;
  spec.omegas = {3.15};
  CHECK_THROWS_AS((void)make_band(0.0, 10.0, spec, 0.1), SolverError);
  CHECK_THROWS_AS((void)make_band(-1.0, 10.0, spec, 0.1), SolverError);
  CHECK_THROWS_AS((void)make_band(10.0, 10.0, spec, 0.1), SolverError);
  CHECK_THROWS_AS((void)make_band(10.0, 5.0, spec, 0.1), SolverError);
  // A guard swallowing the whole band is rejected.
  CHECK_THROWS_AS((void)make_band(3.1, 3.2, spec, 0.1), SolverError);
}

TEST_CASE("single-frequency report: margins, bad set, cover") {
  const InnerMask mask = small_mask();
  const ConstraintField f = manual(mask, 8.0, {3.0, -4.0, 0.5, 2.0, 1.0, -1.0, 2.0});
  const CompletenessReport r = evaluate_tuple({&f}, 0.2);
  CHECK(r.scale == 4.0);
  CHECK(r.margin_sum == 0.5);
  CHECK(r.margin_max == 0.5);
  CHECK(r.normalized_margin == 0.125);
  CHECK_FALSE(r.complete);
  REQUIRE(r.bad_nodes.size() == 1);
  CHECK(r.bad_nodes[0] == 2);
  CHECK(r.tuple == std::vector<double>{8.0});
  CHECK(r.cover == std::vector<std::int32_t>(7, 0));
  CHECK(r.cover_histogram == std::vector<std::int64_t>{7});
}

TEST_CASE("two frequencies cover each other's zeros") {
  const InnerMask mask = small_mask();
  const ConstraintField f1 = manual(mask, 5.0, {2.0, 2.0, 0.0, 2.0, 2.0, 2.0, 2.0});
  const ConstraintField f2 = manual(mask, 7.0, {2.0, 2.0, 2.0, 2.0, 2.0, 0.0, 2.0});
  const CompletenessReport r = evaluate_tuple({&f1, &f2}, 0.1);
  CHECK(r.scale == 2.0);
  CHECK(r.complete);
  CHECK(r.bad_nodes.empty());
  CHECK(r.margin_max == 2.0);
  CHECK(r.margin_sum == 2.0);  // at the zero nodes: 0 + 2
  CHECK(r.normalized_margin == 1.0);
  // Cover ties resolve to the smallest member index.
  CHECK(r.cover[0] == 0);
  CHECK(r.cover[2] == 1);
  CHECK(r.cover[5] == 0);
  CHECK(r.cover_histogram == std::vector<std::int64_t>{6, 1});
}

TEST_CASE("margins and bad sets are exactly permutation invariant") {
  const InnerMask mask = small_mask();
  std::mt19937_64 gen(404);
  for (int trial = 0; trial < 40; ++trial) {
    const ConstraintField a = random_constraint(mask, 5.0, gen);
    const ConstraintField b = random_constraint(mask, 6.0, gen);
    const ConstraintField c = random_constraint(mask, 7.0, gen);
    const CompletenessReport fwd = evaluate_tuple({&a, &b, &c}, 0.3);
    const CompletenessReport rev = evaluate_tuple({&c, &a, &b}, 0.3);
    CHECK(fwd.scale == rev.scale);
    CHECK(fwd.margin_sum == rev.margin_sum);
    CHECK(fwd.margin_max == rev.margin_max);
    CHECK(fwd.normalized_margin == rev.normalized_margin);
    CHECK(fwd.complete == rev.complete);
    CHECK(fwd.bad_nodes == rev.bad_nodes);
  }
}

TEST_CASE("duplicated member reduces to the single near-zero set") {
  const InnerMask mask = small_mask();
  std::mt19937_64 gen(11);
  const ConstraintField f = random_constraint(mask, 5.0, gen);
  const CompletenessReport r = evaluate_tuple({&f, &f}, 0.4);
  const NearZeroSet nz = near_zero_set(f, 0.4);
  CHECK(r.bad_nodes == nz.nodes);
  CHECK(r.margin_sum == 2.0 * r.margin_max);  // both copies contribute the same value
}

TEST_CASE("bad set equals the intersection of member near-zero sets at tuple scale") {
  const InnerMask mask = small_mask();
  std::mt19937_64 gen(7001);
  for (int trial = 0; trial < 40; ++trial) {
    const ConstraintField a = random_constraint(mask, 5.0, gen);
    const ConstraintField b = random_constraint(mask, 6.0, gen);
    const ConstraintField c = random_constraint(mask, 7.0, gen);
    const CompletenessReport r = evaluate_tuple({&a, &b, &c}, 0.5);
    const std::vector<NearZeroSet> sets = {near_zero_set(a, 0.5, r.scale),
                                           near_zero_set(b, 0.5, r.scale),
                                           near_zero_set(c, 0.5, r.scale)};
    CHECK(intersect_near_zero(sets) == r.bad_nodes);
  }
}

TEST_CASE("bad sets grow monotonically with the threshold") {
  const InnerMask mask = small_mask();
  std::mt19937_64 gen(5150);
  for (int trial = 0; trial < 25; ++trial) {
    const ConstraintField a = random_constraint(mask, 5.0, gen);
    const ConstraintField b = random_constraint(mask, 6.0, gen);
    const CompletenessReport r1 = evaluate_tuple({&a, &b}, 0.1);
    const CompletenessReport r2 = evaluate_tuple({&a, &b}, 0.3);
    CHECK(std::includes(r2.bad_nodes.begin(), r2.bad_nodes.end(), r1.bad_nodes.begin(),
                        r1.bad_nodes.end()));
  }
}

TEST_CASE("appending a member can only improve margins (same scale)") {
  const InnerMask mask = small_mask();
  std::mt19937_64 gen(808);
  for (int trial = 0; trial < 25; ++trial) {
    const ConstraintField a = random_constraint(mask, 5.0, gen);
    const ConstraintField b = random_constraint(mask, 6.0, gen);
    ConstraintField c = random_constraint(mask, 7.0, gen);
    // Shrink c so the tuple-wide scale is unchanged by appending it.
    const double limit = std::max(a.scale, b.scale);
    if (c.scale > limit) {
      const double factor = 0.5 * limit / c.scale;
      for (auto& v : c.values) v *= factor;
      c.scale *= factor;
    }
    const CompletenessReport base = evaluate_tuple({&a, &b}, 0.2);
    const CompletenessReport ext = evaluate_tuple({&a, &b, &c}, 0.2);
    CHECK(ext.scale == base.scale);
    CHECK(ext.margin_sum >= base.margin_sum);
    CHECK(ext.margin_max >= base.margin_max);
    CHECK(std::includes(base.bad_nodes.begin(), base.bad_nodes.end(), ext.bad_nodes.begin(),
                        ext.bad_nodes.end()));
  }
}

TEST_CASE("all-zero tuple: everything is bad, margin normalizes to zero") {
  const InnerMask mask = small_mask();
  const ConstraintField f = manual(mask, 5.0, std::vector<double>(7, 0.0));
  const CompletenessReport r = evaluate_tuple({&f}, 0.5);
  CHECK(r.scale == 0.0);
  CHECK_FALSE(r.complete);
  CHECK(r.bad_nodes.size() == 7);
  CHECK(r.normalized_margin == 0.0);
}

TEST_CASE("near-zero set bookkeeping") {
  const InnerMask mask = small_mask();
  const ConstraintField f = manual(mask, 8.0, {3.0, -4.0, 0.5, 2.0, 1.0, -1.0, 2.0});
  const NearZeroSet nz = near_zero_set(f, 0.25);
  CHECK(nz.omega == 8.0);
  CHECK(nz.universe == 7);
  CHECK(nz.threshold == 1.0);
  CHECK(nz.nodes == std::vector<std::uint32_t>{2, 4, 5});
  CHECK(nz.fraction == doctest::Approx(3.0 / 7.0).epsilon(1e-15));

  // Scale override: tuple-wide normalization tightens or widens the cut.
  const NearZeroSet wide = near_zero_set(f, 0.25, 8.0);
  CHECK(wide.threshold == 2.0);
  CHECK(wide.nodes == std::vector<std::uint32_t>{2, 3, 4, 5, 6});
}

TEST_CASE("intersection rejects mismatched universes") {
  NearZeroSet s1;
  s1.universe = 7;
  NearZeroSet s2;
  s2.universe = 9;
  CHECK_THROWS_AS((void)intersect_near_zero({s1, s2}), SolverError);
  CHECK_THROWS_AS((void)intersect_near_zero({}), SolverError);
}

TEST_CASE("tuple validation errors") {
  CHECK_THROWS_AS((void)evaluate_tuple({}, 0.5), SolverError);

  const InnerMask m1 = small_mask();
  const InnerMask m2 = InnerMask::create(Grid::create(1, {{0.0, 1.0}}, {16}), 0.125);
  std::mt19937_64 gen(3);
  const ConstraintField a = random_constraint(m1, 5.0, gen);
  const ConstraintField b = random_constraint(m2, 6.0, gen);
  CHECK_THROWS_AS((void)evaluate_tuple({&a, &b}, 0.5), SolverError);
}

TEST_CASE("near-zero fraction converges under grid refinement") {
  // The cut |theta| <= delta * scale defines an h-independent region, so the
  // masked-node fraction is a Riemann sum converging to that region's area.
  // Values frozen from a verified run: 2D unit square, identity coefficients,
  // omega = 6, data (1, x, y), delta = 0.02.
  const freqcover::CoeffSet coeffs = freqcover::CoeffSet::identity(2);
  std::vector<double> fractions;
  for (int n : {64, 128, 256}) {
    const Grid grid = Grid::create(2, {{0.0, 1.0}, {0.0, 1.0}}, {n, n});
    const InnerMask mask = InnerMask::create(grid, 0.1);
    std::vector<freqcover::ComplexField> fields;
    int bc_id = 0;
    for (const char* bc : {"1", "x", "y"}) {
      const auto system = freqcover::assemble(grid, coeffs, 6.0,
                                              freqcover::Expr::parse(bc),
                                              nullptr, nullptr, bc_id++);
      fields.push_back(freqcover::solve(system, grid));
    }
    const freqcover::SolutionBundle bundle =
        freqcover::make_bundle(grid, std::move(fields));
    const ConstraintField theta = freqcover::constraint_field(grid, mask, bundle);
    fractions.push_back(near_zero_set(theta, 0.02, std::nullopt).fraction);
  }
  CHECK(fractions[0] == doctest::Approx(0.273741).epsilon(0.02));
  CHECK(fractions[1] == doctest::Approx(0.287680).epsilon(0.02));
  CHECK(fractions[2] == doctest::Approx(0.283260).epsilon(0.02));
  // Consecutive-level ratios settle near 1 (area convergence), not near the
  // 0.5 a shrinking one-cell-wide tube would give.
  CHECK(fractions[1] / fractions[0] == doctest::Approx(1.0).epsilon(0.15));
  CHECK(fractions[2] / fractions[1] == doctest::Approx(1.0).epsilon(0.15));
}

TEST_SUITE_END();
