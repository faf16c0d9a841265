// SPDX-License-Identifier: Apache-2.0
//
// Smallest Dirichlet eigenvalues of the pencil (K, M), K the conservative
// stiffness of -div(a grad .) and M = diag(eps), via blocked inverse subspace
// iteration with Rayleigh-Ritz extraction.  The pencil is symmetrized as
// S = M^{-1/2} K M^{-1/2}, factored once with a sparse Cholesky.

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "assembly_detail.hpp"
#include "freqcover/solver.hpp"

namespace freqcover {

SpectrumEstimate estimate_dirichlet_eigenvalues(const Grid& grid, const CoeffSet& coeffs,
                                                int count) {
  if (count < 1) throw SolverError("eigenvalue count must be >= 1");

  const auto num = detail::number_interior(grid);
  const auto pencil = detail::assemble_real_pencil(grid, coeffs, num);
  const auto rows = static_cast<Eigen::Index>(num.node_of_row.size());
  if (count > rows) throw SolverError("eigenvalue count exceeds interior dimension");
  if ((pencil.eps_diag.array() <= 0.0).any())
    throw SolverError("eps must be positive for the eigenvalue pencil");

  // S = D^{-1/2} K D^{-1/2}, D = diag(eps).
  const Eigen::VectorXd inv_sqrt_d = pencil.eps_diag.array().rsqrt();
  Eigen::SparseMatrix<double> S = pencil.stiffness;
  Eigen::VectorXd row_abs_sum = Eigen::VectorXd::Zero(rows);
  for (int outer = 0; outer < S.outerSize(); ++outer) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(S, outer); it; ++it) {
      it.valueRef() *= inv_sqrt_d[it.row()] * inv_sqrt_d[it.col()];
      row_abs_sum[it.row()] += std::abs(it.value());
    }
  }
  // Rounding in S * w is of order eps * ||S||, so the residual target cannot
  // sit below that floor on fine grids (||S|| grows like 1/h^2).  Gershgorin
  // bounds ||S||_2 by the largest absolute row sum.
  const double resid_floor =
      16.0 * std::numeric_limits<double>::epsilon() * row_abs_sum.maxCoeff();

  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> chol(S);
  if (chol.info() != Eigen::Success)
    throw SolverError("stiffness matrix is not positive definite");

  // Iterate a block slightly wider than requested: the extra guard vectors
  // put the convergence rate at mu_count / mu_{block+1}, and the block
  // formulation (unlike one-at-a-time deflation) has no feedback from
  // earlier, slightly inexact eigenvectors, so exactly degenerate pairs and
  // tight clusters converge cleanly.
  const Eigen::Index block =
      std::min<Eigen::Index>(rows, static_cast<Eigen::Index>(count) + 4);

  // Deterministic start block.
  std::mt19937_64 gen(0x9e3779b97f4a7c15ull);
  Eigen::MatrixXd X(rows, block);
  for (Eigen::Index j = 0; j < block; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      // 53-bit uniform in [-1, 1), independent of the standard library's
      // distribution implementation.
      const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      X(i, j) = 2.0 * u - 1.0;
    }
  }

  Eigen::VectorXd ritz_values;
  bool converged = false;
  constexpr int kMaxSweeps = 5000;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    const Eigen::MatrixXd Y = chol.solve(X);
    if (!Y.allFinite())
      throw SolverError("eigenvalue iteration produced non-finite iterates");
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(Y);
    const Eigen::MatrixXd Q =
        qr.householderQ() * Eigen::MatrixXd::Identity(rows, block);
    const Eigen::MatrixXd SQ = S * Q;
    const Eigen::MatrixXd T = Q.transpose() * SQ;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        (T + T.transpose()) * 0.5);
    if (es.info() != Eigen::Success)
      throw SolverError("eigenvalue iteration did not converge");
    X = Q * es.eigenvectors();

    // Residuals of the leading Ritz pairs against the full operator; the
    // Ritz vectors are orthonormal, so no renormalization is needed.
    ritz_values = es.eigenvalues();
    const Eigen::MatrixXd R =
        SQ * es.eigenvectors() - X * ritz_values.asDiagonal();
    converged = true;
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(count); ++j) {
      const double resid = R.col(j).norm();
      if (!(resid <= std::max(1e-11 * std::abs(ritz_values[j]), resid_floor))) {
        converged = false;
        break;
      }
    }
  }
  if (!converged) throw SolverError("eigenvalue iteration did not converge");

  std::vector<double> mus(ritz_values.data(), ritz_values.data() + count);
  std::sort(mus.begin(), mus.end());
  SpectrumEstimate estimate;
  estimate.omegas.reserve(mus.size());
  for (double mu : mus) estimate.omegas.push_back(std::sqrt(std::max(mu, 0.0)));
  return estimate;
}

}  // namespace freqcover
