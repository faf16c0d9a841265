// SPDX-License-Identifier: Apache-2.0
//
// Internal: real stiffness/mass assembly shared by the complex Helmholtz
// assembler and the eigenvalue estimator.  Not installed.

#pragma once

#include <Eigen/Sparse>
#include <vector>

#include "freqcover/coeff.hpp"
#include "freqcover/grid.hpp"

namespace freqcover::detail {

struct InteriorNumbering {
  std::vector<std::int64_t> node_of_row;
  std::vector<std::int32_t> row_of_node;
};

InteriorNumbering number_interior(const Grid& grid);

// Stiffness K of -div(a grad .) with Dirichlet elimination (interior block
// only) and the diagonal eps mass vector at interior nodes.
struct RealPencil {
  Eigen::SparseMatrix<double> stiffness;
  Eigen::VectorXd eps_diag;
};

RealPencil assemble_real_pencil(const Grid& grid, const CoeffSet& coeffs,
                                const InteriorNumbering& numbering);

}  // namespace freqcover::detail
