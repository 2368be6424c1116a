#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cdc {

struct Edge {
  int row;
  int col;
  double weight;
};

/// Undirected-capable sparse graph stored in CSR order. Edges are
/// canonicalized on construction: duplicate (row, col) entries are summed
/// into a single entry and entries are sorted by (row, col).
class SparseGraph {
 public:
  SparseGraph() = default;

  // Builds from a coordinate list. Throws std::invalid_argument on indices
  // outside [0, n) or negative weights. If symmetric is true the canonical
  // edge set must be closed under transpose.
  SparseGraph(int n, std::vector<Edge> edges, bool symmetric);

  // Convenience: mirrors every off-diagonal edge before canonicalizing, so
  // the result is symmetric by construction (union, not sum: mirrored
  // duplicates collapse to the max-weight entry of the pair).
  static SparseGraph symmetrized(int n, const std::vector<Edge>& edges);

  static SparseGraph identity(int n);

  int n() const { return n_; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(cols_.size()); }
  bool symmetric() const { return symmetric_; }

  std::span<const int> row_ptr() const { return row_ptr_; }
  std::span<const int> cols() const { return cols_; }
  std::span<const double> values() const { return values_; }

  // neighbors of node i as index range [row_ptr()[i], row_ptr()[i+1])
  std::span<const int> neighbors(int i) const;
  std::span<const double> neighbor_weights(int i) const;

  // weighted degree (row sum)
  double degree(int i) const;

  std::vector<Edge> edge_list() const;

  bool is_symmetric(double tol = 0.0) const;

 private:
  int n_ = 0;
  bool symmetric_ = false;
  std::vector<int> row_ptr_{0};
  std::vector<int> cols_;
  std::vector<double> values_;
};

/// A = D^{-1/2} (A~ + I) D^{-1/2} with D the degree matrix of (A~ + I).
/// Taking degrees after the self-loop keeps every degree strictly positive
/// (an isolated node becomes a unit self-loop) and the spectrum in [-1, 1].
SparseGraph normalize_adjacency(const SparseGraph& g);

}  // namespace cdc
