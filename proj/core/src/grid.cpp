// SPDX-License-Identifier: Apache-2.0

#include "freqcover/grid.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace freqcover {

Grid Grid::create(int dim, const std::vector<std::array<double, 2>>& bounds,
                  const std::vector<int>& cells_per_axis) {
  if (dim != 1 && dim != 2) throw GridError("dim must be 1 or 2");
  if (bounds.size() != static_cast<std::size_t>(dim))
    throw GridError("bounds must list one [lo, hi] pair per axis");
  if (cells_per_axis.size() != static_cast<std::size_t>(dim))
    throw GridError("cell counts must list one entry per axis");

  Grid g;
  g.dim_ = dim;
  for (int ax = 0; ax < dim; ++ax) {
    const double lo = bounds[ax][0];
    const double hi = bounds[ax][1];
    if (!(hi > lo)) {
      std::ostringstream os;
      os << "degenerate bounds on axis " << ax << ": [" << lo << ", " << hi << "]";
      throw GridError(os.str());
    }
    const int n = cells_per_axis[ax];
    if (n < 4) {
      std::ostringstream os;
      os << "axis " << ax << " needs at least 4 cells, got " << n;
      throw GridError(os.str());
    }
    g.lo_[ax] = lo;
    g.hi_[ax] = hi;
    g.n_[ax] = n;
    g.h_[ax] = (hi - lo) / n;
  }

  g.total_nodes_ = static_cast<std::int64_t>(g.n_[0] + 1) * (dim == 2 ? g.n_[1] + 1 : 1);
  std::int64_t interior = g.n_[0] - 1;
  if (dim == 2) interior *= g.n_[1] - 1;
  g.interior_nodes_ = interior;
  return g;
}

InnerMask InnerMask::create(const Grid& grid, double shrink) {
  if (!(shrink > 0.0 && shrink < 0.5)) throw GridError("shrink must lie in (0, 0.5)");

  InnerMask m;
  m.dim_ = grid.dim();
  std::int64_t count = 1;
  double margin = std::numeric_limits<double>::infinity();
  for (int ax = 0; ax < grid.dim(); ++ax) {
    const double L = grid.length(ax);
    const double h = grid.h(ax);
    const double offset = shrink * L;
    // A positive-margin inner box needs at least one grid layer of
    // separation from the boundary.
    if (offset < h * (1.0 - 1e-12)) {
      std::ostringstream os;
      os << "shrink separation " << offset << " on axis " << ax
         << " is below one grid layer (h = " << h << ")";
      throw GridError(os.str());
    }
    // Inclusive comparisons: lo + shrink*L <= x <= hi - shrink*L, with a
    // relative tolerance so exact ties (offset == k*h) land inside.
    const double tol = 1e-9 * h;
    int ilo = static_cast<int>(std::ceil(offset / h - 1e-9));
    while (grid.coord(ax, ilo) < grid.lo(ax) + offset - tol) ++ilo;
    int ihi = static_cast<int>(std::floor((L - offset) / h + 1e-9));
    while (grid.coord(ax, ihi) > grid.hi(ax) - offset + tol) --ihi;
    if (ilo > ihi) throw GridError("inner mask is empty");
    m.ilo_[ax] = ilo;
    m.ihi_[ax] = ihi;
    count *= (ihi - ilo + 1);
    margin = std::min(margin, offset);
  }
  m.nodes_x_ = m.ihi_[0] - m.ilo_[0] + 1;
  m.count_ = count;
  m.margin_ = margin;
  return m;
}

}  // namespace freqcover
