#pragma once

#include <cstdint>
#include <vector>

#include "cdc/linalg.hpp"

namespace cdc {

struct KMeansResult {
  std::vector<int> labels;  // length n, values in [0, c)
  Matrix centroids;         // c x dim
  double inertia = 0.0;     // sum of squared distances to assigned centroid
};

/// Lloyd's algorithm from a k-means++ initialization seeded with a
/// SplitMix64 stream, run to the assignment fixpoint or 300 iterations.
/// Deterministic for a fixed seed and input row order. An emptied cluster is
/// reseeded to the point farthest from its assigned centroid. If
/// inertia_trace is given, the post-assignment inertia of every Lloyd
/// iteration is appended to it (non-increasing).
KMeansResult kmeans(const Matrix& x, int clusters, std::uint64_t seed,
                    std::vector<double>* inertia_trace = nullptr);

}  // namespace cdc
