#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "cdc/sparse_graph.hpp"

namespace cdc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Collects human-readable notes from numerical edge cases (regularized
/// Sylvester pencils, dropped singular values, ...). Optional everywhere.
using Diagnostics = std::vector<std::string>;

/// Sparse-dense product g * X. Cost O(nnz(g) * X.cols()).
Matrix spmm(const SparseGraph& g, const Matrix& x);

struct SymEig {
  Vector eigenvalues;   // descending
  Matrix eigenvectors;  // orthonormal columns, aligned with eigenvalues
};

/// Full symmetric eigendecomposition. Input must be symmetric to 1e-10
/// (relative); intended for the small m x m and d x d systems only.
SymEig sym_eig(const Matrix& m);

/// Solve M X = rhs for symmetric positive definite M via Cholesky.
Matrix solve_spd(const Matrix& m, const Matrix& rhs);

/// Solve R B + coeff * B T = C for B with R (m x m) and T (d x d) symmetric
/// positive semidefinite and coeff > 0, by eigendecomposing both sides:
/// with R = U diag(mu) U^T and T = W diag(theta) W^T the solution is
/// B = U [ (U^T C W)_{ij} / (mu_i + coeff * theta_j) ] W^T.
/// Near-zero pencil entries (|mu_i + coeff*theta_j| < 1e-12) are regularized
/// by adding 1e-10 to the denominator and noted in diag.
Matrix solve_sylvester_spd(const Matrix& r, const Matrix& t, double coeff, const Matrix& c,
                           Diagnostics* diag = nullptr);

struct SvdWide {
  Matrix left;           // m x r
  Vector singular_values;  // length r, descending, nonnegative
  Matrix right;          // n x r, orthonormal columns
};

/// Thin SVD of a wide matrix (m <= n) computed through the m x m Gram matrix
/// Z Z^T, so the cost is O(m^2 n + m^3). Singular values below
/// 1e-10 * sigma_max are dropped (rank reduction is noted in diag) and the
/// returned r may be smaller than requested.
SvdWide svd_wide(const Matrix& z, int rank, Diagnostics* diag = nullptr);

}  // namespace cdc
