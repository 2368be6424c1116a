#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include "cdc/linalg.hpp"
#include "cdc/sparse_graph.hpp"

namespace cdc {

/// Multi-view container: V1 >= 0 relational graphs, V2 >= 1 attribute
/// matrices over the same n samples, optional ground-truth labels.
struct Dataset {
  int n = 0;
  int clusters = 0;
  std::vector<std::shared_ptr<const SparseGraph>> graphs;
  std::vector<std::shared_ptr<const Matrix>> attributes;
  std::optional<std::vector<int>> labels;          // remapped to 0..clusters-1
  std::vector<int> original_label_values;          // remap table, index = new id
  std::string name;

  int v1() const { return static_cast<int>(graphs.size()); }
  int v2() const { return static_cast<int>(attributes.size()); }
};

/// One (graph, features) pairing produced by view expansion. Graphs are
/// already degree-normalized; features are shared with the dataset.
struct View {
  std::shared_ptr<const SparseGraph> graph;
  std::shared_ptr<const Matrix> features;
  int graph_index = -1;      // -1 for a constructed kNN graph
  int attribute_index = 0;
};

struct ViewSet {
  std::vector<View> views;
  int count() const { return static_cast<int>(views.size()); }
};

/// Loads and validates a dataset from a JSON manifest:
///   { "n": int, "clusters": int, "graphs": [paths],
///     "attributes": [paths], "labels": path|null }
/// Paths are resolved relative to the manifest. Graphs are MatrixMarket
/// coordinate files, attributes MatrixMarket array or headerless CSV,
/// labels one integer per line. Label values are remapped to a contiguous
/// 0..clusters-1 range; the original values are kept for reporting.
Dataset load_dataset(const std::filesystem::path& manifest_path);

/// Connects each sample to its k_nn nearest neighbors (Euclidean, self
/// excluded, ties broken by the smaller row index), then symmetrizes by
/// edge-set union. All weights are 1. Requires k_nn < n.
SparseGraph build_knn_graph(const Matrix& x, int k_nn);

/// Expands (relations x attributes) into the view list consumed by
/// filtering: every (graph, attribute) pair when V1 >= 1, otherwise one
/// k-NN graph per attribute view. All graphs come out normalized.
ViewSet expand_views(const Dataset& ds, int k_nn = 5);

}  // namespace cdc
