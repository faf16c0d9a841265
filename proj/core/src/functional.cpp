// SPDX-License-Identifier: Apache-2.0

#include "freqcover/functional.hpp"

#include <cmath>
#include <limits>

namespace freqcover {

GradientField gradient(const ComplexField& field, const Grid& grid) {
  if (field.values.size() != static_cast<std::size_t>(grid.node_count()))
    throw SolverError("field size does not match grid");

  const Complex nan(std::numeric_limits<double>::quiet_NaN(),
                    std::numeric_limits<double>::quiet_NaN());
  GradientField g;
  g.gx.assign(field.values.size(), nan);
  if (grid.dim() == 2) g.gy.assign(field.values.size(), nan);

  const int ny = grid.dim() == 2 ? grid.nodes(1) : 1;
  const double inv_2hx = 1.0 / (2.0 * grid.h(0));
  const double inv_2hy = grid.dim() == 2 ? 1.0 / (2.0 * grid.h(1)) : 0.0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < grid.nodes(0); ++i) {
      if (grid.is_boundary(i, j)) continue;
      const std::size_t node = static_cast<std::size_t>(grid.node_index(i, j));
      g.gx[node] = (field.values[static_cast<std::size_t>(grid.node_index(i + 1, j))] -
                    field.values[static_cast<std::size_t>(grid.node_index(i - 1, j))]) *
                   inv_2hx;
      if (grid.dim() == 2) {
        g.gy[node] = (field.values[static_cast<std::size_t>(grid.node_index(i, j + 1))] -
                      field.values[static_cast<std::size_t>(grid.node_index(i, j - 1))]) *
                     inv_2hy;
      }
    }
  }
  return g;
}

SolutionBundle make_bundle(const Grid& grid, std::vector<ComplexField> fields) {
  if (fields.size() != static_cast<std::size_t>(grid.dim() + 1))
    throw SolverError("bundle needs exactly dim + 1 fields");
  for (const auto& f : fields) {
    if (f.omega != fields.front().omega)
      throw SolverError("bundle fields must share one frequency");
  }
  SolutionBundle bundle;
  bundle.omega = fields.front().omega;
  bundle.gradients.reserve(fields.size());
  for (const auto& f : fields) bundle.gradients.push_back(gradient(f, grid));
  bundle.fields = std::move(fields);
  return bundle;
}

namespace {

// Cofactor expansion along the first row.  Products appear identically (up to
// sign placement) under column swaps and repeated columns, so swaps negate
// the result exactly and duplicate columns give exactly zero.
Complex det2(const Complex m[2][2]) {
  return m[0][0] * m[1][1] - m[0][1] * m[1][0];
}

Complex det3(const Complex m[3][3]) {
  const Complex t1 = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]);
  const Complex t2 = m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]);
  const Complex t3 = m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  // Grouped as t1 - (t2 - t3): swapping the last two columns maps t1 -> -t1
  // and t2 <-> t3, so this exact grouping negates the rounded result bit for
  // bit; a left-to-right sum would reassociate and lose that.
  return t1 - (t2 - t3);
}

}  // namespace

ConstraintField constraint_field(const Grid& grid, const InnerMask& mask,
                                 const SolutionBundle& bundle) {
  const std::size_t n_fields = bundle.fields.size();
  if (n_fields != static_cast<std::size_t>(grid.dim() + 1))
    throw SolverError("constraint functional needs dim + 1 fields");

  ConstraintField out;
  out.omega = bundle.omega;
  out.mask = mask;
  out.values.resize(static_cast<std::size_t>(mask.count()));

  double sup = 0.0;
  for (std::int64_t m = 0; m < mask.count(); ++m) {
    const auto [i, j] = mask.mask_ij(m);
    const std::size_t node = static_cast<std::size_t>(grid.node_index(i, j));
    Complex theta;
    if (grid.dim() == 1) {
      Complex mat[2][2];
      for (std::size_t c = 0; c < 2; ++c) {
        mat[0][c] = bundle.fields[c].values[node];
        mat[1][c] = bundle.gradients[c].gx[node];
      }
      theta = mat[0][0] * det2(mat);
    } else {
      Complex mat[3][3];
      for (std::size_t c = 0; c < 3; ++c) {
        mat[0][c] = bundle.fields[c].values[node];
        mat[1][c] = bundle.gradients[c].gx[node];
        mat[2][c] = bundle.gradients[c].gy[node];
      }
      theta = mat[0][0] * det3(mat);
    }
    out.values[static_cast<std::size_t>(m)] = theta;
    sup = std::max(sup, std::abs(theta));
  }
  out.scale = sup;
  return out;
}

}  // namespace freqcover
