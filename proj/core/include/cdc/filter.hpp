#pragma once

#include <vector>

#include "cdc/dataset.hpp"
#include "cdc/linalg.hpp"

namespace cdc {

/// k-order low-pass filtered representation of one view.
struct FilteredView {
  Matrix h;              // n x d_v
  int k = 0;             // filter order; k = 0 means h equals the raw features
  int source_view = 0;
};

/// Applies H <- 0.5 (A + I) H to the features k times. A must come from
/// normalize_adjacency so its spectrum lies in [-1, 1]; the k-th power of
/// the operator is never materialized (cost O(k nnz d)).
FilteredView graph_filter(const SparseGraph& a, const Matrix& x, int k);

/// One filtered view per expanded view, same filter order everywhere.
std::vector<FilteredView> filter_all(const ViewSet& vs, int k);

}  // namespace cdc
