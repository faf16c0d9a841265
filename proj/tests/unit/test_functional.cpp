// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "freqcover/functional.hpp"
#include "freqcover/grid.hpp"

using freqcover::Complex;
using freqcover::ComplexField;
using freqcover::ConstraintField;
using freqcover::constraint_field;
using freqcover::GradientField;
using freqcover::gradient;
using freqcover::Grid;
using freqcover::InnerMask;
using freqcover::make_bundle;
using freqcover::SolutionBundle;
using freqcover::SolverError;

namespace {

ComplexField synthetic(const Grid& grid, double omega, int bc_id,
                       Complex (*fn)(double, double)) {
  ComplexField f;
  f.omega = omega;
  f.bc_id = bc_id;
  f.values.resize(static_cast<std::size_t>(grid.node_count()));
  const int ny = grid.dim() == 2 ? grid.nodes(1) : 1;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < grid.nodes(0); ++i) {
      const auto p = grid.point(i, j);
      f.values[static_cast<std::size_t>(grid.node_index(i, j))] = fn(p[0], p[1]);
    }
  }
  return f;
}

ComplexField random_field(const Grid& grid, double omega, int bc_id, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ComplexField f;
  f.omega = omega;
  f.bc_id = bc_id;
  f.values.resize(static_cast<std::size_t>(grid.node_count()));
  for (auto& v : f.values) v = Complex(dist(gen), dist(gen));
  return f;
}

}  // namespace

TEST_SUITE_BEGIN("functional");

TEST_CASE("central differences are exact on affine fields") {
  const Grid g = Grid::create(2, {{0.0, 1.0}, {0.0, 1.0}}, {16, 16});  // h = 2^-4
  const ComplexField fx = synthetic(g, 0.0, 0, [](double x, double) { return Complex(x, 0.0); });
  const GradientField gr = gradient(fx, g);
  for (int j = 1; j < 16; ++j) {
    for (int i = 1; i < 16; ++i) {
      const auto node = static_cast<std::size_t>(g.node_index(i, j));
      CHECK(gr.gx[node] == Complex(1.0, 0.0));
      CHECK(gr.gy[node] == Complex(0.0, 0.0));
    }
  }
  // Boundary entries are poisoned, never meaningful.
  CHECK(std::isnan(gr.gx[0].real()));
}

TEST_CASE("1D gradients have no y component") {
  const Grid g = Grid::create(1, {{0.0, 1.0}}, {16});
  const ComplexField fx = synthetic(g, 0.0, 0, [](double x, double) { return Complex(x, 0.0); });
  const GradientField gr = gradient(fx, g);
  CHECK(gr.gy.empty());
  for (int i = 1; i < 16; ++i)
    CHECK(gr.gx[static_cast<std::size_t>(i)] == Complex(1.0, 0.0));
}

TEST_CASE("base case: bundle (1, x, y) gives theta identically one, exactly") {
  const Grid g = Grid::create(2, {{0.0, 1.0}, {0.0, 1.0}}, {16, 16});
  const InnerMask mask = InnerMask::create(g, 0.1);
  std::vector<ComplexField> fields;
  fields.push_back(synthetic(g, 0.0, 0, [](double, double) { return Complex(1.0, 0.0); }));
  fields.push_back(synthetic(g, 0.0, 1, [](double x, double) { return Complex(x, 0.0); }));
  fields.push_back(synthetic(g, 0.0, 2, [](double, double y) { return Complex(y, 0.0); }));
  const SolutionBundle bundle = make_bundle(g, std::move(fields));
  const ConstraintField theta = constraint_field(g, mask, bundle);
  CHECK(theta.values.size() == static_cast<std::size_t>(mask.count()));
  for (const Complex& v : theta.values) {
    CHECK(v.real() == 1.0);
    CHECK(v.imag() == 0.0);
  }
  CHECK(theta.scale == 1.0);
  CHECK(theta.omega == 0.0);
}

TEST_CASE("1D determinant recovers the frozen Wronskian values") {
  // Closed forms for -u'' - w^2 u = 0 with data 1 and x; the Wronskian is
  // constant: W = w / sin(w).  Frozen: W(8) = 8.0860497472007768,
  // W(5) = -5.2141760638570291, W(12.3) = -46.726878756476886.
  struct Case {
    double w;
    double frozen;
  };
  const Case cases[] = {{8.0, 8.0860497472007768},
                        {5.0, -5.2141760638570291},
                        {12.3, -46.726878756476886}};
  const Grid g = Grid::create(1, {{0.0, 1.0}}, {512});
  const InnerMask mask = InnerMask::create(g, 0.1);
  for (const Case& c : cases) {
    const double w = c.w;
    std::vector<ComplexField> fields;
    fields.push_back(synthetic(g, w, 0, [](double, double) { return Complex(0.0, 0.0); }));
    fields.push_back(synthetic(g, w, 1, [](double, double) { return Complex(0.0, 0.0); }));
    for (int i = 0; i <= 512; ++i) {
      const double x = g.coord(0, i);
      fields[0].values[static_cast<std::size_t>(i)] =
          Complex(std::cos(w * x) +
                      (1.0 - std::cos(w)) / std::sin(w) * std::sin(w * x),
                  0.0);
      fields[1].values[static_cast<std::size_t>(i)] = Complex(std::sin(w * x) / std::sin(w), 0.0);
    }
    const SolutionBundle bundle = make_bundle(g, std::move(fields));
    const ConstraintField theta = constraint_field(g, mask, bundle);
    int checked = 0;
    for (std::int64_t m = 0; m < mask.count(); ++m) {
      const auto ij = mask.mask_ij(m);
      const Complex u1 = bundle.fields[0].values[static_cast<std::size_t>(g.node_index(ij[0]))];
      if (std::abs(u1) < 0.5) continue;  // skip near the zeros of u1
      const Complex ratio = theta.values[static_cast<std::size_t>(m)] / u1;
      CHECK(std::abs(ratio - Complex(c.frozen, 0.0)) <= 0.01 * std::abs(c.frozen));
      ++checked;
    }
    CHECK(checked > 100);
  }
}

TEST_CASE("swapping the two non-leading members flips theta exactly") {
  const Grid g = Grid::create(2, {{0.0, 1.0}, {0.0, 1.0}}, {8, 8});
  const InnerMask mask = InnerMask::create(g, 0.125);
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 30; ++trial) {
    ComplexField u1 = random_field(g, 5.0, 0, gen);
    ComplexField u2 = random_field(g, 5.0, 1, gen);
    ComplexField u3 = random_field(g, 5.0, 2, gen);

    const SolutionBundle fwd = make_bundle(g, {u1, u2, u3});
    const SolutionBundle rev = make_bundle(g, {u1, u3, u2});
    const ConstraintField tf = constraint_field(g, mask, fwd);
    const ConstraintField tr = constraint_field(g, mask, rev);
    for (std::size_t i = 0; i < tf.values.size(); ++i) {
      CHECK(tr.values[i].real() == -tf.values[i].real());
      CHECK(tr.values[i].imag() == -tf.values[i].imag());
    }
  }
}

TEST_CASE("a repeated member zeroes theta exactly") {
  std::mt19937_64 gen(77);
  {
    const Grid g = Grid::create(2, {{0.0, 1.0}, {0.0, 1.0}}, {8, 8});
    const InnerMask mask = InnerMask::create(g, 0.125);
    for (int trial = 0; trial < 20; ++trial) {
      ComplexField u1 = random_field(g, 3.0, 0, gen);
      ComplexField u2 = random_field(g, 3.0, 1, gen);
      const SolutionBundle bundle = make_bundle(g, {u1, u2, u2});
      const ConstraintField theta = constraint_field(g, mask, bundle);
      for (const Complex& v : theta.values) {
        CHECK(v.real() == 0.0);
        CHECK(v.imag() == 0.0);
      }
      CHECK(theta.scale == 0.0);
    }
  }
  {
    const Grid g = Grid::create(1, {{0.0, 1.0}}, {16});
    const InnerMask mask = InnerMask::create(g, 0.1);
    for (int trial = 0; trial < 20; ++trial) {
      ComplexField u1 = random_field(g, 3.0, 0, gen);
      const SolutionBundle bundle = make_bundle(g, {u1, u1});
      const ConstraintField theta = constraint_field(g, mask, bundle);
      for (const Complex& v : theta.values) CHECK(std::abs(v) == 0.0);
    }
  }
}

TEST_CASE("make_bundle validates arity and frequency agreement") {
  const Grid g = Grid::create(2, {{0.0, 1.0}, {0.0, 1.0}}, {8, 8});
  std::mt19937_64 gen(9);
  ComplexField u1 = random_field(g, 5.0, 0, gen);
  ComplexField u2 = random_field(g, 5.0, 1, gen);
  CHECK_THROWS_AS((void)make_bundle(g, {u1, u2}), SolverError);  // needs dim + 1 = 3

  ComplexField u3 = random_field(g, 6.0, 2, gen);  // wrong omega
  CHECK_THROWS_AS((void)make_bundle(g, {u1, u2, u3}), SolverError);
}

TEST_CASE("constraint field carries mask, omega, and its own scale") {
  const Grid g = Grid::create(1, {{0.0, 1.0}}, {16});
  const InnerMask mask = InnerMask::create(g, 0.1);
  std::mt19937_64 gen(31);
  ComplexField u1 = random_field(g, 7.5, 0, gen);
  ComplexField u2 = random_field(g, 7.5, 1, gen);
  const ConstraintField theta = constraint_field(g, mask, make_bundle(g, {u1, u2}));
  CHECK(theta.omega == 7.5);
  CHECK(theta.mask.count() == mask.count());
  double sup = 0.0;
  for (const Complex& v : theta.values) sup = std::max(sup, std::abs(v));
  CHECK(theta.scale == sup);
}

TEST_SUITE_END();
