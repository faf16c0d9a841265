// SPDX-License-Identifier: Apache-2.0

#include "freqcover/solver.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "assembly_detail.hpp"

namespace freqcover {

namespace detail {

InteriorNumbering number_interior(const Grid& grid) {
  InteriorNumbering num;
  num.row_of_node.assign(static_cast<std::size_t>(grid.node_count()), -1);
  num.node_of_row.reserve(static_cast<std::size_t>(grid.interior_count()));
  const int ny = grid.dim() == 2 ? grid.nodes(1) : 1;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < grid.nodes(0); ++i) {
      if (grid.is_boundary(i, j)) continue;
      const std::int64_t node = grid.node_index(i, j);
      num.row_of_node[static_cast<std::size_t>(node)] =
          static_cast<std::int32_t>(num.node_of_row.size());
      num.node_of_row.push_back(node);
    }
  }
  return num;
}

RealPencil assemble_real_pencil(const Grid& grid, const CoeffSet& coeffs,
                                const InteriorNumbering& num) {
  if (coeffs.a.size() != static_cast<std::size_t>(grid.dim()))
    throw SolverError("coefficient a must have one diagonal entry per axis");

  const auto rows = static_cast<Eigen::Index>(num.node_of_row.size());
  RealPencil pencil;
  pencil.eps_diag.resize(rows);

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(rows) * (2 * grid.dim() + 1));

  for (Eigen::Index row = 0; row < rows; ++row) {
    const auto [i, j] = grid.node_ij(num.node_of_row[static_cast<std::size_t>(row)]);
    const auto p = grid.point(i, j);
    double diag = 0.0;
    for (int ax = 0; ax < grid.dim(); ++ax) {
      const double h = grid.h(ax);
      const double inv_h2 = 1.0 / (h * h);
      double mid_lo[2] = {p[0], p[1]};
      double mid_hi[2] = {p[0], p[1]};
      mid_lo[ax] -= 0.5 * h;
      mid_hi[ax] += 0.5 * h;
      const std::span<const double> lo_pt(mid_lo, static_cast<std::size_t>(grid.dim()));
      const std::span<const double> hi_pt(mid_hi, static_cast<std::size_t>(grid.dim()));
      const double a_lo = coeffs.a[static_cast<std::size_t>(ax)].eval(lo_pt);
      const double a_hi = coeffs.a[static_cast<std::size_t>(ax)].eval(hi_pt);
      diag += (a_lo + a_hi) * inv_h2;

      const int ni_lo = ax == 0 ? i - 1 : i;
      const int nj_lo = ax == 1 ? j - 1 : j;
      const int ni_hi = ax == 0 ? i + 1 : i;
      const int nj_hi = ax == 1 ? j + 1 : j;
      if (!grid.is_boundary(ni_lo, nj_lo)) {
        const auto col = num.row_of_node[static_cast<std::size_t>(grid.node_index(ni_lo, nj_lo))];
        triplets.emplace_back(row, col, -a_lo * inv_h2);
      }
      if (!grid.is_boundary(ni_hi, nj_hi)) {
        const auto col = num.row_of_node[static_cast<std::size_t>(grid.node_index(ni_hi, nj_hi))];
        triplets.emplace_back(row, col, -a_hi * inv_h2);
      }
    }
    triplets.emplace_back(row, row, diag);
    pencil.eps_diag[row] = coeffs.eps.eval(std::span<const double>(p.data(),
                                           static_cast<std::size_t>(grid.dim())));
  }

  pencil.stiffness.resize(rows, rows);
  pencil.stiffness.setFromTriplets(triplets.begin(), triplets.end());
  pencil.stiffness.makeCompressed();
  return pencil;
}

}  // namespace detail

namespace {

// Shared by the Expr-based public API and the callable-based references.
template <typename BcFn, typename SourceFn>
DiscreteSystem assemble_impl(const Grid& grid, const CoeffSet& coeffs, double omega,
                             BcFn&& bc_fn, SourceFn&& source_fn, bool has_source,
                             int bc_id) {
  auto num = detail::number_interior(grid);
  auto pencil = detail::assemble_real_pencil(grid, coeffs, num);

  DiscreteSystem sys;
  sys.omega = omega;
  sys.bc_id = bc_id;
  sys.node_of_row = std::move(num.node_of_row);
  sys.row_of_node = std::move(num.row_of_node);

  const auto rows = static_cast<Eigen::Index>(sys.node_of_row.size());
  sys.rhs = VectorC::Zero(rows);
  sys.boundary_values.assign(static_cast<std::size_t>(grid.node_count()), Complex(0.0, 0.0));

  const int ny = grid.dim() == 2 ? grid.nodes(1) : 1;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < grid.nodes(0); ++i) {
      if (!grid.is_boundary(i, j)) continue;
      const auto p = grid.point(i, j);
      const Complex f = bc_fn(p[0], p[1]);
      sys.boundary_values[static_cast<std::size_t>(grid.node_index(i, j))] = f;
      sys.bc_sup = std::max(sys.bc_sup, std::abs(f));
    }
  }

  // Reaction term and boundary elimination on top of the real stiffness.
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(static_cast<std::size_t>(pencil.stiffness.nonZeros()));
  for (int outer = 0; outer < pencil.stiffness.outerSize(); ++outer) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(pencil.stiffness, outer); it; ++it) {
      triplets.emplace_back(it.row(), it.col(), Complex(it.value(), 0.0));
    }
  }

  for (Eigen::Index row = 0; row < rows; ++row) {
    const auto [i, j] = grid.node_ij(sys.node_of_row[static_cast<std::size_t>(row)]);
    const auto p = grid.point(i, j);
    const std::span<const double> pt(p.data(), static_cast<std::size_t>(grid.dim()));

    const double eps_v = pencil.eps_diag[row];
    const double sigma_v = coeffs.sigma.eval(pt);
    triplets.emplace_back(row, row, -Complex(omega * omega * eps_v, omega * sigma_v));

    // Eliminated Dirichlet neighbors.
    for (int ax = 0; ax < grid.dim(); ++ax) {
      const double h = grid.h(ax);
      const double inv_h2 = 1.0 / (h * h);
      for (int side = -1; side <= 1; side += 2) {
        const int ni = ax == 0 ? i + side : i;
        const int nj = ax == 1 ? j + side : j;
        if (!grid.is_boundary(ni, nj)) continue;
        double mid[2] = {p[0], p[1]};
        mid[ax] += 0.5 * side * h;
        const double a_mid =
            coeffs.a[static_cast<std::size_t>(ax)].eval(
                std::span<const double>(mid, static_cast<std::size_t>(grid.dim())));
        const Complex f =
            sys.boundary_values[static_cast<std::size_t>(grid.node_index(ni, nj))];
        sys.rhs[row] += a_mid * inv_h2 * f;
      }
    }

    if (has_source) {
      const Complex g = source_fn(p[0], p[1]);
      sys.rhs[row] += g;
      sys.source_sup = std::max(sys.source_sup, std::abs(g));
    }
  }

  sys.matrix.resize(rows, rows);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.matrix.makeCompressed();
  return sys;
}

}  // namespace

DiscreteSystem assemble(const Grid& grid, const CoeffSet& coeffs, double omega,
                        const Expr& bc, const Expr* source_re, const Expr* source_im,
                        int bc_id) {
  if (!bc.valid()) throw SolverError("boundary expression is empty");
  const int dim = grid.dim();
  auto bc_fn = [&](double x, double y) -> Complex {
    const double p[2] = {x, y};
    return Complex(bc.eval(std::span<const double>(p, static_cast<std::size_t>(dim))), 0.0);
  };
  const bool has_source = source_re != nullptr || source_im != nullptr;
  auto source_fn = [&](double x, double y) -> Complex {
    const double p[2] = {x, y};
    const std::span<const double> pt(p, static_cast<std::size_t>(dim));
    const double re = source_re ? source_re->eval(pt) : 0.0;
    const double im = source_im ? source_im->eval(pt) : 0.0;
    return Complex(re, im);
  };
  return assemble_impl(grid, coeffs, omega, bc_fn, source_fn, has_source, bc_id);
}

namespace {

void check_shape(const DiscreteSystem& system) {
  const auto rows = system.rhs.size();
  if (system.matrix.rows() != rows || system.matrix.cols() != rows)
    throw SolverError("discrete system shape mismatch");
}

// Residual, near-eigenvalue flags, residual acceptance, and full-grid
// reconstruction for an already-computed interior solution.
ComplexField finalize_field(const DiscreteSystem& system, const Grid& grid,
                            const SolveOptions& options, const VectorC& u) {
  ComplexField field;
  field.omega = system.omega;
  field.bc_id = system.bc_id;
  field.values.assign(static_cast<std::size_t>(grid.node_count()), Complex(0.0, 0.0));

  const double rhs_norm = system.rhs.norm();
  if (rhs_norm > 0.0)
    field.residual = (system.matrix * u - system.rhs).norm() / rhs_norm;

  // Near-eigenvalue detection: solution blowup relative to the data norm, or
  // proximity to an estimated eigenfrequency when an estimate is supplied.
  const double len = std::max(grid.length(0), grid.dim() == 2 ? grid.length(1) : 0.0);
  const double data_norm = system.bc_sup + system.source_sup * len * len;
  const double sol_sup = u.size() > 0 ? u.cwiseAbs().maxCoeff() : 0.0;
  if (sol_sup > options.blowup_factor * data_norm) field.flagged_near_eigenvalue = true;
  if (options.spectrum != nullptr) {
    for (double wk : options.spectrum->omegas) {
      if (wk > 0.0 && std::abs(system.omega - wk) < options.spectrum_guard_rel * wk) {
        field.flagged_near_eigenvalue = true;
        break;
      }
    }
  }

  if (!field.flagged_near_eigenvalue && field.residual > options.tol_rel) {
    std::ostringstream os;
    os << "solve residual " << field.residual << " exceeds tolerance " << options.tol_rel;
    throw SolverError(os.str());
  }

  for (std::size_t node = 0; node < field.values.size(); ++node) {
    const auto row = system.row_of_node[node];
    field.values[node] = row >= 0 ? u[row] : system.boundary_values[node];
  }
  return field;
}

}  // namespace

ComplexField solve(const DiscreteSystem& system, const Grid& grid,
                   const SolveOptions& options) {
  check_shape(system);
  const auto rows = system.rhs.size();

  VectorC u = VectorC::Zero(rows);
  if (system.rhs.norm() > 0.0) {
    Eigen::SparseLU<SparseC, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(system.matrix);
    lu.factorize(system.matrix);
    if (lu.info() != Eigen::Success)
      throw SolverError("discrete system is singular (factorization failed)");
    u = lu.solve(system.rhs);
    if (!u.allFinite())
      throw SolverError("discrete system is numerically singular (non-finite solution)");
  }
  return finalize_field(system, grid, options, u);
}

std::vector<ComplexField> solve_shared(const std::vector<const DiscreteSystem*>& systems,
                                       const Grid& grid, const SolveOptions& options) {
  std::vector<ComplexField> fields;
  if (systems.empty()) return fields;
  for (const DiscreteSystem* sys : systems) {
    if (sys == nullptr) throw SolverError("solve_shared: null system");
    check_shape(*sys);
  }

  const SparseC& matrix = systems.front()->matrix;
  for (const DiscreteSystem* sys : systems) {
    const SparseC& m = sys->matrix;
    const bool same = m.rows() == matrix.rows() && m.nonZeros() == matrix.nonZeros() &&
                      std::equal(m.valuePtr(), m.valuePtr() + m.nonZeros(), matrix.valuePtr()) &&
                      std::equal(m.innerIndexPtr(), m.innerIndexPtr() + m.nonZeros(),
                                 matrix.innerIndexPtr());
    if (!same) throw SolverError("solve_shared: systems do not share one matrix");
  }

  bool any_nonzero = false;
  for (const DiscreteSystem* sys : systems) any_nonzero |= sys->rhs.norm() > 0.0;

  Eigen::SparseLU<SparseC, Eigen::COLAMDOrdering<int>> lu;
  if (any_nonzero) {
    lu.analyzePattern(matrix);
    lu.factorize(matrix);
    if (lu.info() != Eigen::Success)
      throw SolverError("discrete system is singular (factorization failed)");
  }

  fields.reserve(systems.size());
  for (const DiscreteSystem* sys : systems) {
    VectorC u = VectorC::Zero(sys->rhs.size());
    if (sys->rhs.norm() > 0.0) {
      u = lu.solve(sys->rhs);
      if (!u.allFinite())
        throw SolverError("discrete system is numerically singular (non-finite solution)");
    }
    fields.push_back(finalize_field(*sys, grid, options, u));
  }
  return fields;
}

std::vector<ConvergenceRow> convergence_study(int dim,
                                              const std::vector<std::array<double, 2>>& bounds,
                                              const CoeffSet& coeffs, double omega,
                                              const std::vector<int>& levels,
                                              const ConvergenceReference& ref,
                                              double shrink, const SolveOptions& options) {
  if (!ref.exact) throw SolverError("convergence study requires a reference solution");
  if (levels.size() < 2) throw SolverError("convergence study needs at least two levels");

  std::vector<ConvergenceRow> rows;
  for (int cells : levels) {
    const Grid grid = Grid::create(dim, bounds, std::vector<int>(static_cast<std::size_t>(dim), cells));
    const InnerMask mask = InnerMask::create(grid, shrink);

    DiscreteSystem sys;
    auto source_fn = [&](double x, double y) -> Complex {
      const double p[2] = {x, y};
      const std::span<const double> pt(p, static_cast<std::size_t>(dim));
      return Complex(ref.source_re ? ref.source_re->eval(pt) : 0.0,
                     ref.source_im ? ref.source_im->eval(pt) : 0.0);
    };
    const bool has_source = ref.source_re != nullptr || ref.source_im != nullptr;
    if (ref.bc != nullptr) {
      sys = assemble(grid, coeffs, omega, *ref.bc, ref.source_re, ref.source_im);
    } else {
      auto bc_fn = [&](double x, double y) -> Complex { return ref.exact(x, y); };
      sys = assemble_impl(grid, coeffs, omega, bc_fn, source_fn, has_source, 0);
    }
    const ComplexField u = solve(sys, grid, options);

    double max_err = 0.0;
    for (std::int64_t m = 0; m < mask.count(); ++m) {
      const auto [i, j] = mask.mask_ij(m);
      const auto p = grid.point(i, j);
      const Complex diff =
          u.values[static_cast<std::size_t>(grid.node_index(i, j))] - ref.exact(p[0], p[1]);
      max_err = std::max(max_err, std::abs(diff));
    }

    ConvergenceRow row;
    row.cells = cells;
    row.h = std::max(grid.h(0), dim == 2 ? grid.h(1) : 0.0);
    row.max_error = max_err;
    if (!rows.empty() && rows.back().max_error > 0.0 && max_err > 0.0) {
      row.observed_order =
          std::log(rows.back().max_error / max_err) / std::log(rows.back().h / row.h);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace freqcover
