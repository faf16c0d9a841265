// SPDX-License-Identifier: Apache-2.0

#include "freqcover/coeff.hpp"

#include <sstream>

namespace freqcover {
namespace {

struct BoundCheck {
  const Expr* expr;
  std::string name;
  double lo;  // inclusive lower bound
  double hi;  // inclusive upper bound
};

std::string bound_text(const BoundCheck& c) {
  std::ostringstream os;
  os << c.lo << " <= " << c.name << " <= " << c.hi;
  return os.str();
}

}  // namespace

CoeffSet CoeffSet::identity(int dim, double lambda) {
  CoeffSet cs;
  for (int ax = 0; ax < dim; ++ax) cs.a.push_back(Expr::parse("1"));
  cs.eps = Expr::parse("1");
  cs.sigma = Expr::parse("0");
  cs.lambda = lambda;
  return cs;
}

ValidationReport validate_coefficients(const CoeffSet& coeffs, const Grid& grid) {
  if (coeffs.lambda < 1.0) throw GridError("lambda must be >= 1");
  if (coeffs.a.size() != static_cast<std::size_t>(grid.dim()))
    throw GridError("coefficient a must have one diagonal entry per axis");

  std::vector<BoundCheck> checks;
  for (std::size_t ax = 0; ax < coeffs.a.size(); ++ax)
    checks.push_back({&coeffs.a[ax], "a[" + std::to_string(ax) + "]",
                      1.0 / coeffs.lambda, coeffs.lambda});
  checks.push_back({&coeffs.eps, "eps", 1.0 / coeffs.lambda, coeffs.lambda});
  checks.push_back({&coeffs.sigma, "sigma", 0.0, coeffs.lambda});

  // Sample points: all nodes, then per-axis flux half-nodes (midpoints of
  // axis-adjacent node pairs), matching the points the assembler evaluates.
  const int nx = grid.nodes(0);
  const int ny = grid.dim() == 2 ? grid.nodes(1) : 1;

  ValidationReport report;
  auto test_point = [&](double x, double y) -> bool {
    const double p2[2] = {x, y};
    std::span<const double> pt(p2, static_cast<std::size_t>(grid.dim()));
    ++report.checked_points;
    for (const auto& c : checks) {
      const double v = c.expr->eval(pt);
      if (v < c.lo || v > c.hi) {
        report.first_violation = CoeffViolation{c.name, bound_text(c), {x, y}, v};
        return false;
      }
    }
    return true;
  };

  // Nodes.
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (!test_point(grid.coord(0, i), grid.dim() == 2 ? grid.coord(1, j) : 0.0))
        return report;
  // x half-nodes: (x_i + h/2, y_j).
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i)
      if (!test_point(grid.coord(0, i) + 0.5 * grid.h(0),
                      grid.dim() == 2 ? grid.coord(1, j) : 0.0))
        return report;
  // y half-nodes: (x_i, y_j + h/2).
  if (grid.dim() == 2) {
    for (int j = 0; j + 1 < ny; ++j)
      for (int i = 0; i < nx; ++i)
        if (!test_point(grid.coord(0, i), grid.coord(1, j) + 0.5 * grid.h(1)))
          return report;
  }

  report.pass = true;
  return report;
}

}  // namespace freqcover
