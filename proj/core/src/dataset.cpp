#include "cdc/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cdc/io.hpp"

namespace cdc {

namespace {

using nlohmann::json;

json read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("manifest " + path.string() + ": " + e.what());
  }
  return j;
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& manifest_path) {
  const json j = read_manifest(manifest_path);
  const auto base = manifest_path.parent_path();

  Dataset ds;
  ds.name = manifest_path.parent_path().filename().string();
  if (!j.contains("n") || !j.contains("clusters"))
    throw std::runtime_error("manifest: missing required keys 'n' or 'clusters'");
  ds.n = j.at("n").get<int>();
  ds.clusters = j.at("clusters").get<int>();
  if (ds.n <= 0) throw std::runtime_error("manifest: n must be positive");
  if (ds.clusters <= 0) throw std::runtime_error("manifest: clusters must be positive");

  for (const auto& rel : j.value("graphs", json::array())) {
    auto g = std::make_shared<SparseGraph>(read_matrix_market_graph(base / rel.get<std::string>()));
    if (g->n() != ds.n)
      throw std::runtime_error("graph " + rel.get<std::string>() + " has " + std::to_string(g->n()) +
                               " nodes, manifest says n=" + std::to_string(ds.n));
    if (!g->symmetric()) {
      if (!g->is_symmetric())
        throw std::runtime_error("graph " + rel.get<std::string>() +
                                 " is not symmetric; store it as MatrixMarket symmetric or "
                                 "symmetrize it first");
      g = std::make_shared<SparseGraph>(g->n(), g->edge_list(), true);
    }
    ds.graphs.push_back(std::move(g));
  }

  for (const auto& attr : j.value("attributes", json::array())) {
    auto x = std::make_shared<Matrix>(read_dense(base / attr.get<std::string>()));
    if (x->rows() != ds.n)
      throw std::runtime_error("attribute " + attr.get<std::string>() + " has " +
                               std::to_string(x->rows()) + " rows, manifest says n=" + std::to_string(ds.n));
    if (!x->allFinite())
      throw std::runtime_error("attribute " + attr.get<std::string>() + " contains non-finite entries");
    ds.attributes.push_back(std::move(x));
  }
  if (ds.attributes.empty())
    throw std::runtime_error("manifest: at least one attribute view is required");

  if (j.contains("labels") && !j.at("labels").is_null()) {
    const auto raw = read_labels(base / j.at("labels").get<std::string>(), ds.n);
    std::map<int, int> remap;  // original value -> contiguous id, ordered by value
    for (int v : raw) remap.emplace(v, 0);
    if (static_cast<int>(remap.size()) > ds.clusters)
      throw std::runtime_error("labels contain " + std::to_string(remap.size()) +
                               " distinct values but manifest says clusters=" +
                               std::to_string(ds.clusters));
    int next = 0;
    for (auto& [value, id] : remap) {
      id = next++;
      ds.original_label_values.push_back(value);
    }
    std::vector<int> mapped(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) mapped[i] = remap.at(raw[i]);
    ds.labels = std::move(mapped);
  }
  return ds;
}

SparseGraph build_knn_graph(const Matrix& x, int k_nn) {
  const int n = static_cast<int>(x.rows());
  if (k_nn <= 0) throw std::invalid_argument("build_knn_graph: k_nn must be positive");
  if (k_nn >= n)
    throw std::invalid_argument("build_knn_graph: k_nn must be < n (self excluded, max is n-1)");
  if (!x.allFinite()) throw std::invalid_argument("build_knn_graph: non-finite features");

  const Vector norms = x.rowwise().squaredNorm();
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(k_nn));

  constexpr int kBlock = 256;
  std::vector<std::pair<double, int>> cand;
  for (int start = 0; start < n; start += kBlock) {
    const int rows = std::min(kBlock, n - start);
    // squared distances of the block against everything, GEMM-based
    Matrix d2 = (-2.0 * (x.middleRows(start, rows) * x.transpose())).rowwise() + norms.transpose();
    d2.colwise() += norms.segment(start, rows);
    for (int r = 0; r < rows; ++r) {
      const int i = start + r;
      cand.clear();
      cand.reserve(static_cast<std::size_t>(n) - 1);
      for (int jj = 0; jj < n; ++jj)
        if (jj != i) cand.emplace_back(std::max(d2(r, jj), 0.0), jj);
      // ties broken by the smaller index: pairs sort by (distance, index)
      std::nth_element(cand.begin(), cand.begin() + (k_nn - 1), cand.end());
      std::sort(cand.begin(), cand.begin() + k_nn);
      for (int t = 0; t < k_nn; ++t) edges.push_back({i, cand[static_cast<std::size_t>(t)].second, 1.0});
    }
  }
  return SparseGraph::symmetrized(n, edges);
}

ViewSet expand_views(const Dataset& ds, int k_nn) {
  ViewSet vs;
  if (ds.v1() >= 1) {
    for (int g = 0; g < ds.v1(); ++g) {
      auto normalized = std::make_shared<SparseGraph>(normalize_adjacency(*ds.graphs[g]));
      for (int a = 0; a < ds.v2(); ++a)
        vs.views.push_back({normalized, ds.attributes[a], g, a});
    }
  } else {
    for (int a = 0; a < ds.v2(); ++a) {
      auto knn = std::make_shared<SparseGraph>(normalize_adjacency(build_knn_graph(*ds.attributes[a], k_nn)));
      vs.views.push_back({std::move(knn), ds.attributes[a], -1, a});
    }
  }
  return vs;
}

}  // namespace cdc
