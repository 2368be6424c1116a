#pragma once

#include <vector>

namespace cdc {

/// counts(i, j) = number of samples with predicted cluster i and true
/// class j. Rows/columns are padded to a square shape for the assignment.
struct ContingencyTable {
  std::vector<std::vector<long long>> counts;  // size x size, zero-padded
  int pred_classes = 0;
  int true_classes = 0;
  long long n = 0;

  static ContingencyTable from_labels(const std::vector<int>& pred, const std::vector<int>& truth);
};

/// Exact maximum-agreement assignment (Hungarian algorithm, O(size^3)).
/// Returns the column matched to each row, i.e. map[pred_id] = true_id.
std::vector<int> hungarian_map(const ContingencyTable& ct);

/// Fraction of samples matched under the optimal cluster-to-class map.
double accuracy(const std::vector<int>& pred, const std::vector<int>& truth);

/// Mutual information normalized by the arithmetic mean of the entropies
/// (geometric mean behind the flag). Defined as 0 when the mutual
/// information is 0 and a partition is a single block.
double nmi(const std::vector<int>& pred, const std::vector<int>& truth,
           bool geometric_mean = false);

/// Pair-counting index adjusted for chance; the all-pairs-together
/// degenerate case evaluates to 1 by convention.
double ari(const std::vector<int>& pred, const std::vector<int>& truth);

/// Macro-averaged F1 over classes after the optimal relabeling (weighted
/// by class support behind the flag). A class absent from the mapped
/// prediction contributes 0.
double f1(const std::vector<int>& pred, const std::vector<int>& truth,
          bool weighted = false);

}  // namespace cdc
