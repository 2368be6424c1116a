#include "cdc/sparse_graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cdc {

namespace {

// sort by (row, col), sum duplicates
std::vector<Edge> canonicalize(int n, std::vector<Edge> edges) {
  for (const Edge& e : edges) {
    if (e.row < 0 || e.row >= n || e.col < 0 || e.col >= n)
      throw std::invalid_argument("SparseGraph: edge index out of range: (" +
                                  std::to_string(e.row) + ", " + std::to_string(e.col) + ")");
    if (!(e.weight >= 0.0))
      throw std::invalid_argument("SparseGraph: negative or non-finite edge weight");
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (const Edge& e : edges) {
    if (!out.empty() && out.back().row == e.row && out.back().col == e.col)
      out.back().weight += e.weight;
    else
      out.push_back(e);
  }
  return out;
}

}  // namespace

SparseGraph::SparseGraph(int n, std::vector<Edge> edges, bool symmetric) {
  if (n < 0) throw std::invalid_argument("SparseGraph: negative node count");
  n_ = n;
  symmetric_ = symmetric;
  auto canon = canonicalize(n, std::move(edges));
  row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
  cols_.reserve(canon.size());
  values_.reserve(canon.size());
  for (const Edge& e : canon) {
    ++row_ptr_[static_cast<std::size_t>(e.row) + 1];
    cols_.push_back(e.col);
    values_.push_back(e.weight);
  }
  for (int i = 0; i < n; ++i) row_ptr_[i + 1] += row_ptr_[i];
  if (symmetric && !is_symmetric())
    throw std::invalid_argument("SparseGraph: symmetric flag set but edge set is not transpose-closed");
}

SparseGraph SparseGraph::symmetrized(int n, const std::vector<Edge>& edges) {
  std::vector<Edge> both;
  both.reserve(edges.size() * 2);
  for (const Edge& e : edges) {
    both.push_back(e);
    if (e.row != e.col) both.push_back({e.col, e.row, e.weight});
  }
  // union semantics: a duplicate pair (i,j)+(j,i) in the input would double
  // the summed weight, so collapse any summed duplicates back to the max of
  // the directed weights
  std::sort(both.begin(), both.end(), [](const Edge& a, const Edge& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<Edge> uniq;
  uniq.reserve(both.size());
  for (const Edge& e : both) {
    if (!uniq.empty() && uniq.back().row == e.row && uniq.back().col == e.col)
      uniq.back().weight = std::max(uniq.back().weight, e.weight);
    else
      uniq.push_back(e);
  }
  return SparseGraph(n, std::move(uniq), true);
}

SparseGraph SparseGraph::identity(int n) {
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) edges.push_back({i, i, 1.0});
  return SparseGraph(n, std::move(edges), true);
}

std::span<const int> SparseGraph::neighbors(int i) const {
  return {cols_.data() + row_ptr_[i], static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i])};
}

std::span<const double> SparseGraph::neighbor_weights(int i) const {
  return {values_.data() + row_ptr_[i], static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i])};
}

double SparseGraph::degree(int i) const {
  double d = 0.0;
  for (double w : neighbor_weights(i)) d += w;
  return d;
}

std::vector<Edge> SparseGraph::edge_list() const {
  std::vector<Edge> out;
  out.reserve(cols_.size());
  for (int i = 0; i < n_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      out.push_back({i, cols_[k], values_[k]});
  return out;
}

bool SparseGraph::is_symmetric(double tol) const {
  for (int i = 0; i < n_; ++i) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const int j = cols_[k];
      // binary search for (j, i)
      const int* lo = cols_.data() + row_ptr_[j];
      const int* hi = cols_.data() + row_ptr_[j + 1];
      const int* it = std::lower_bound(lo, hi, i);
      if (it == hi || *it != i) return false;
      const double wt = values_[static_cast<std::size_t>(it - cols_.data())];
      if (std::abs(wt - values_[k]) > tol) return false;
    }
  }
  return true;
}

SparseGraph normalize_adjacency(const SparseGraph& g) {
  const int n = g.n();
  std::vector<Edge> with_loops = g.edge_list();
  // add the self-loop, merging with any existing diagonal entry
  for (int i = 0; i < n; ++i) with_loops.push_back({i, i, 1.0});
  SparseGraph loopy(n, std::move(with_loops), g.symmetric());

  std::vector<double> dmh(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) dmh[i] = 1.0 / std::sqrt(loopy.degree(i));

  std::vector<Edge> scaled = loopy.edge_list();
  for (Edge& e : scaled) e.weight *= dmh[e.row] * dmh[e.col];
  return SparseGraph(n, std::move(scaled), g.symmetric());
}

}  // namespace cdc
