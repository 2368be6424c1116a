#pragma once

#include <cstdint>
#include <vector>

#include "cdc/filter.hpp"
#include "cdc/linalg.hpp"

namespace cdc {

/// Coefficient used on the feature Gram term of the per-view anchor
/// equation R B + coeff * B T = C. Differentiating the objective with
/// respect to B gives coeff = alpha (the lambda_v^2 factors cancel and the
/// Frobenius regularizer is B-free); derived_alpha is therefore the default.
/// paper_beta substitutes coeff = beta for literal reproduction of the
/// published update and is NOT a descent step whenever beta != alpha.
enum class SylvesterMode { derived_alpha, paper_beta };

struct SolverConfig {
  double alpha = 1.0;   // similarity-preserving weight
  double beta = 1.0;    // Frobenius regularizer on Z
  int anchors = 30;     // m
  int max_iter = 50;
  double tol = 1e-6;    // relative objective tolerance
  std::uint64_t seed = 0;
  SylvesterMode sylvester_mode = SylvesterMode::derived_alpha;

  void validate() const;  // alpha > 0, beta > 0, anchors >= 1, tol > 0
};

/// Result of the alternating solve: consensus anchor graph Z (m x n),
/// per-view anchors B^v (m x d_v), view weights lambda (positive, sum 1),
/// and the end-of-iteration objective values.
struct AnchorModel {
  Matrix z;
  std::vector<Matrix> b;
  Vector lambda;
  std::vector<double> objective_trace;
  int iterations_run = 0;
  bool converged = false;
  Diagnostics diagnostics;
};

/// Per-view anchors initialized as the centroids of a seeded k-means over
/// the filtered features; at most 2000 sampled rows per view keep the
/// initialization cost independent of n.
std::vector<Matrix> init_anchors(const std::vector<FilteredView>& h, int anchors,
                                 std::uint64_t seed);

/// Exact minimizer of the objective in Z with B and lambda fixed:
/// Z = (1+alpha) [beta I + sum_v lambda_v^2 (B^v B^v^T + alpha I)]^{-1}
///     sum_v lambda_v^2 B^v H^v^T, applied as an SPD solve.
Matrix update_Z(const std::vector<Matrix>& b, const std::vector<FilteredView>& h,
                const Vector& lambda, const SolverConfig& cfg);

/// Per-view Sylvester solve R B^v + coeff B^v T^v = (1+alpha) Z H^v with
/// R = Z Z^T and T^v = H^v^T H^v. coeff is alpha or beta per cfg (see
/// SylvesterMode). Note the view weights drop out of the stationarity
/// condition, so update_B does not take lambda.
std::vector<Matrix> update_B(const Matrix& z, const std::vector<FilteredView>& h,
                             const SolverConfig& cfg, Diagnostics* diag = nullptr);

/// M_v = ||H^v^T - B^v^T Z||_F^2 + alpha ||B^v H^v^T - Z||_F^2.
Vector view_losses(const Matrix& z, const std::vector<Matrix>& b,
                   const std::vector<FilteredView>& h, const SolverConfig& cfg);

/// lambda_v proportional to 1/M_v, normalized to sum 1: the exact minimizer
/// of sum_v lambda_v^2 M_v over the simplex. Views with M_v <= 1e-15 take
/// all the weight, split equally (limit behavior, diagnostic emitted).
Vector update_lambda(const Vector& m_v, Diagnostics* diag = nullptr);

/// sum_v lambda_v^2 M_v + beta ||Z||_F^2, evaluated straight from the
/// residual matrices.
double objective(const Matrix& z, const std::vector<Matrix>& b,
                 const std::vector<FilteredView>& h, const Vector& lambda,
                 const SolverConfig& cfg);

/// Reusable per-view decompositions of T^v = H^v^T H^v. They depend only on
/// the filtered features, so grid search shares one workspace across every
/// (alpha, beta, m) cell with the same filter order.
struct SolverWorkspace {
  std::vector<SymEig> t_eig;
};

SolverWorkspace prepare_workspace(const std::vector<FilteredView>& h);

/// Alternating optimization: init_anchors, then Z -> B -> lambda until the
/// relative objective change drops below cfg.tol or max_iter is reached.
/// The trace is non-increasing in derived_alpha mode. Throws if an iterate
/// turns non-finite, naming the offending step. initial_b, when non-empty,
/// replaces the k-means initialization (used by grid search to share the
/// initialization across cells with equal anchor counts); ws, when given,
/// must come from prepare_workspace on the same views.
AnchorModel fit(const std::vector<FilteredView>& h, const SolverConfig& cfg,
                std::vector<Matrix> initial_b = {}, const SolverWorkspace* ws = nullptr);

}  // namespace cdc
