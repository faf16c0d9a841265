// SPDX-License-Identifier: Apache-2.0
//
// Conservative second-order finite differences for
//   -div(a grad u) - (omega^2 eps + i omega sigma) u = g   in Omega,
//   u = f                                                  on the boundary,
// on a uniform tensor grid.  Per axis the flux term is discretized as
//   -( a_{j+1/2} (u_{j+1} - u_j) - a_{j-1/2} (u_j - u_{j-1}) ) / h^2
// with the coefficient evaluated at cell midpoints, so the stencil is exact
// on affine functions when a is constant.  Dirichlet values are eliminated
// into the right-hand side.

#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Sparse>

#include "freqcover/coeff.hpp"
#include "freqcover/expr.hpp"
#include "freqcover/grid.hpp"

namespace freqcover {

class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using Complex = std::complex<double>;
using SparseC = Eigen::SparseMatrix<Complex>;
using VectorC = Eigen::VectorXcd;

// Linear system over the interior nodes, with the boundary data kept for
// re-attaching the Dirichlet values to the solved field.
struct DiscreteSystem {
  SparseC matrix;            // interior x interior, row/col in interior order
  VectorC rhs;               // eliminated boundary data + source samples
  double omega = 0.0;
  int bc_id = 0;             // caller-chosen tag, carried into ComplexField
  std::vector<std::int64_t> node_of_row;   // interior row -> grid node
  std::vector<std::int32_t> row_of_node;   // grid node -> interior row or -1
  std::vector<Complex> boundary_values;    // full-length; non-zero on boundary
  double bc_sup = 0.0;       // max |f| over boundary nodes
  double source_sup = 0.0;   // max |g| over interior nodes
};

// Nodal field over the full grid; boundary nodes carry exactly the Dirichlet
// data that produced the field.
struct ComplexField {
  std::vector<Complex> values;  // size == grid.node_count()
  double omega = 0.0;
  int bc_id = 0;
  double residual = 0.0;                 // ||A u - b||_2 / ||b||_2 (0 if b = 0)
  bool flagged_near_eigenvalue = false;
};

// Dirichlet eigenfrequencies omega_k = sqrt(mu_k) of the pencil
// (-div(a grad .), eps .), ascending.
struct SpectrumEstimate {
  std::vector<double> omegas;
};

// Optional complex source g = source_re + i * source_im sampled at interior
// nodes; either pointer may be null (treated as zero).
DiscreteSystem assemble(const Grid& grid, const CoeffSet& coeffs, double omega,
                        const Expr& bc, const Expr* source_re = nullptr,
                        const Expr* source_im = nullptr, int bc_id = 0);

struct SolveOptions {
  double tol_rel = 1e-10;       // residual acceptance threshold
  double blowup_factor = 1e6;   // near-eigenvalue flag: ||u||_inf vs data norm
  // When set, |omega - omega_k| < spectrum_guard_rel * omega_k for any
  // estimated eigenfrequency also raises flagged_near_eigenvalue.
  const SpectrumEstimate* spectrum = nullptr;
  double spectrum_guard_rel = 0.01;
};

// Sparse direct factorization (complex LU).  Throws SolverError on an exactly
// singular matrix or a residual above tol_rel; sets flagged_near_eigenvalue
// per SolveOptions instead of failing when the solve succeeded numerically.
ComplexField solve(const DiscreteSystem& system, const Grid& grid,
                   const SolveOptions& options = {});

// Back-substitutes several systems that share one matrix (same grid,
// coefficients, and omega; different boundary/source data) through a single
// factorization.  Field values, residuals, and flags match per-system solve()
// calls exactly.  Throws SolverError if the matrices differ.
std::vector<ComplexField> solve_shared(const std::vector<const DiscreteSystem*>& systems,
                                       const Grid& grid, const SolveOptions& options = {});

// Smallest `count` generalized Dirichlet eigenvalues via shift-and-invert
// power iteration with deflation on the real assembled pencil (K, M).
// Deterministic (fixed internal seed).  Throws SolverError on
// non-convergence.
SpectrumEstimate estimate_dirichlet_eigenvalues(const Grid& grid, const CoeffSet& coeffs,
                                                int count);

// One row per refinement level of a convergence study against a reference
// solution on the inner subdomain.
struct ConvergenceRow {
  int cells = 0;           // cells per axis at this level
  double h = 0.0;          // max axis spacing
  double max_error = 0.0;  // max nodal |u_h - u_ref| over the inner mask
  std::optional<double> observed_order;  // vs previous level
};

struct ConvergenceReference {
  // Exact solution sampled at nodes (real part convention: return the complex
  // value; real references return {v, 0}).
  std::function<Complex(double, double)> exact;
  const Expr* source_re = nullptr;
  const Expr* source_im = nullptr;
  const Expr* bc = nullptr;  // defaults to sampling `exact` on the boundary
};

std::vector<ConvergenceRow> convergence_study(int dim,
                                              const std::vector<std::array<double, 2>>& bounds,
                                              const CoeffSet& coeffs, double omega,
                                              const std::vector<int>& levels,
                                              const ConvergenceReference& ref,
                                              double shrink = 0.1,
                                              const SolveOptions& options = {});

}  // namespace freqcover
