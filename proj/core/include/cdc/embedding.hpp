#pragma once

#include <cstdint>
#include <vector>

#include "cdc/linalg.hpp"
#include "cdc/solver.hpp"

namespace cdc {

struct ClusterResult {
  std::vector<int> labels;  // length n, values in [0, clusters)
  Matrix embedding;         // n x clusters
  Vector singular_values;   // length clusters (zero-padded past rank(Z))
  Diagnostics diagnostics;
};

/// Top-c right singular vectors of the anchor graph via svd_wide. When
/// rank(Z) < c the missing columns are zero (diagnostic emitted). With
/// normalize_rows each nonzero row is scaled to unit length.
Matrix embed(const Matrix& z, int clusters, bool normalize_rows = false,
             Diagnostics* diag = nullptr);

/// Final hard clustering: seeded k-means on the spectral embedding.
ClusterResult cluster(const AnchorModel& model, int clusters, std::uint64_t seed,
                      bool normalize_rows = false);

}  // namespace cdc
