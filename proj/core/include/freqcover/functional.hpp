// SPDX-License-Identifier: Apache-2.0
//
// The pointwise constraint functional.  For d+1 fields u^1..u^{d+1} sharing
// one frequency, theta(x) is
//
//   theta(x) = u^1(x) * det [ u^1(x)      ...  u^{d+1}(x)     ]
//                           [ du^1/dx_1   ...  du^{d+1}/dx_1  ]
//                           [ ...                             ]
//                           [ du^1/dx_d   ...  du^{d+1}/dx_d  ]
//
// evaluated on the inner mask, with gradients from central differences on
// interior nodes.  The determinant is expanded in cofactors along the first
// row, which makes column swaps exact sign flips and repeated columns exact
// zeros in floating point.

#pragma once

#include <complex>
#include <vector>

#include "freqcover/grid.hpp"
#include "freqcover/solver.hpp"

namespace freqcover {

// Central-difference gradient per interior node; boundary entries are NaN and
// must never be read.
struct GradientField {
  std::vector<Complex> gx;  // size == grid.node_count()
  std::vector<Complex> gy;  // empty in 1D
};

GradientField gradient(const ComplexField& field, const Grid& grid);

// d+1 solutions at one frequency plus their gradients.
struct SolutionBundle {
  double omega = 0.0;
  std::vector<ComplexField> fields;     // size d+1
  std::vector<GradientField> gradients; // size d+1
};

// Computes gradients; throws SolverError if the fields disagree on omega or
// the count is not grid.dim() + 1.
SolutionBundle make_bundle(const Grid& grid, std::vector<ComplexField> fields);

// theta over the inner mask, in mask-linear order (row-major, x fastest).
struct ConstraintField {
  std::vector<Complex> values;
  double omega = 0.0;
  double scale = 0.0;  // sup over the mask of |theta| for this field alone
  InnerMask mask;
};

ConstraintField constraint_field(const Grid& grid, const InnerMask& mask,
                                 const SolutionBundle& bundle);

}  // namespace freqcover
