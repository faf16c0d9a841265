// SPDX-License-Identifier: Apache-2.0
//
// Coefficient triple (a, eps, sigma) of the operator
//   L_omega u = -div(a grad u) - (omega^2 eps + i omega sigma) u
// with a diagonal anisotropic a (one expression per axis) and the uniform
// ellipticity/boundedness certificate lambda:
//   1/lambda <= a_jj <= lambda,  1/lambda <= eps <= lambda,  0 <= sigma <= lambda.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "freqcover/expr.hpp"
#include "freqcover/grid.hpp"

namespace freqcover {

struct CoeffSet {
  std::vector<Expr> a;  // one diagonal entry per axis, size == grid dim
  Expr eps;
  Expr sigma;
  double lambda = 2.0;  // must be >= 1

  // Constant-coefficient Laplacian-like defaults: a = 1, eps = 1, sigma = 0.
  static CoeffSet identity(int dim, double lambda = 2.0);
};

struct CoeffViolation {
  std::string quantity;       // "a[0]", "a[1]", "eps", "sigma"
  std::string bound;          // human-readable violated bound
  std::array<double, 2> location{0.0, 0.0};
  double value = 0.0;
};

struct ValidationReport {
  bool pass = false;
  std::optional<CoeffViolation> first_violation;
  std::int64_t checked_points = 0;
};

// Samples every grid node plus the flux half-nodes used by the conservative
// stencil (midpoints between axis-adjacent nodes) and checks the lambda
// bounds pointwise.  Stops at the first violation.
// Throws EvalError/GridError on malformed inputs (lambda < 1, wrong arity).
ValidationReport validate_coefficients(const CoeffSet& coeffs, const Grid& grid);

}  // namespace freqcover
