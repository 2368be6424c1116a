#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cdc/linalg.hpp"
#include "cdc/sparse_graph.hpp"

namespace cdc {

/// Matrix Market "coordinate real general|symmetric" reader (1-based
/// indices; integer and pattern value types are accepted, pattern entries
/// get weight 1). Symmetric files are expanded to the full edge set.
SparseGraph read_matrix_market_graph(const std::filesystem::path& path);

void write_matrix_market_graph(const std::filesystem::path& path, const SparseGraph& g);

/// Dense matrix reader. ".mtx"/".mm" parse Matrix Market array format,
/// anything else is treated as headerless comma-separated rows.
Matrix read_dense(const std::filesystem::path& path);

void write_matrix_market_array(const std::filesystem::path& path, const Matrix& m);
void write_csv(const std::filesystem::path& path, const Matrix& m);

/// One integer per line, exactly n of them.
std::vector<int> read_labels(const std::filesystem::path& path, int n);

/// One integer per line, as many as the file holds.
std::vector<int> read_labels_all(const std::filesystem::path& path);
void write_labels(const std::filesystem::path& path, const std::vector<int>& labels);

}  // namespace cdc
