#include "cdc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cdc {

namespace {

void check_lengths(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size())
    throw std::invalid_argument("metrics: label vectors have different lengths (" +
                                std::to_string(pred.size()) + " vs " + std::to_string(truth.size()) + ")");
  if (pred.empty()) throw std::invalid_argument("metrics: empty label vectors");
  for (int v : pred)
    if (v < 0) throw std::invalid_argument("metrics: negative label");
  for (int v : truth)
    if (v < 0) throw std::invalid_argument("metrics: negative label");
}

std::vector<long long> bincount(const std::vector<int>& labels, int size) {
  std::vector<long long> counts(static_cast<std::size_t>(size), 0);
  for (int v : labels) ++counts[static_cast<std::size_t>(v)];
  return counts;
}

double entropy(const std::vector<long long>& counts, double n) {
  double h = 0.0;
  for (long long c : counts)
    if (c > 0) h -= (c / n) * std::log(c / n);
  return h;
}

}  // namespace

ContingencyTable ContingencyTable::from_labels(const std::vector<int>& pred,
                                               const std::vector<int>& truth) {
  check_lengths(pred, truth);
  ContingencyTable ct;
  ct.pred_classes = *std::max_element(pred.begin(), pred.end()) + 1;
  ct.true_classes = *std::max_element(truth.begin(), truth.end()) + 1;
  ct.n = static_cast<long long>(pred.size());
  const int size = std::max(ct.pred_classes, ct.true_classes);
  ct.counts.assign(static_cast<std::size_t>(size),
                   std::vector<long long>(static_cast<std::size_t>(size), 0));
  for (std::size_t i = 0; i < pred.size(); ++i)
    ++ct.counts[static_cast<std::size_t>(pred[i])][static_cast<std::size_t>(truth[i])];
  return ct;
}

namespace {

// Hungarian algorithm (row/column potentials with augmenting paths) on an
// arbitrary dense benefit matrix; returns the benefit-maximizing column for
// each row.
std::vector<int> max_benefit_assignment(const std::vector<std::vector<double>>& benefit) {
  const int size = static_cast<int>(benefit.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(size) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(size) + 1, 0.0);
  std::vector<int> match(static_cast<std::size_t>(size) + 1, 0);  // column -> row (1-based)
  std::vector<int> way(static_cast<std::size_t>(size) + 1, 0);

  for (int i = 1; i <= size; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(size) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(size) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = match[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= size; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = -benefit[static_cast<std::size_t>(i0 - 1)][static_cast<std::size_t>(j - 1)] -
                           u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= size; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> map(static_cast<std::size_t>(size), -1);
  for (int j = 1; j <= size; ++j)
    if (match[static_cast<std::size_t>(j)] > 0) map[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)] = j - 1;
  return map;
}

// Combined benefit: matched count first, then the per-pair F1 contribution
// 2 T_ij / (rowtotal_i + coltotal_j), optionally support-weighted. Matched
// count ties are common on small inputs and an arbitrary choice among them
// would make the mapped F1 depend on the prediction's label names; the
// F1-aware tie-break keeps every metric invariant under relabeling.
std::vector<std::vector<double>> tie_broken_benefit(const ContingencyTable& ct, bool weighted) {
  const int size = static_cast<int>(ct.counts.size());
  std::vector<double> row_total(static_cast<std::size_t>(size), 0.0);
  std::vector<double> col_total(static_cast<std::size_t>(size), 0.0);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) {
      row_total[static_cast<std::size_t>(i)] += static_cast<double>(ct.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      col_total[static_cast<std::size_t>(j)] += static_cast<double>(ct.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
  // any +1 in matched count must dominate the largest possible tie-break sum
  const double primary = 2.0 * (static_cast<double>(weighted ? ct.n : size) + 1.0);
  std::vector<std::vector<double>> benefit(static_cast<std::size_t>(size),
                                           std::vector<double>(static_cast<std::size_t>(size), 0.0));
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) {
      const double t = static_cast<double>(ct.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      const double denom = row_total[static_cast<std::size_t>(i)] + col_total[static_cast<std::size_t>(j)];
      double f1_part = denom > 0.0 ? 2.0 * t / denom : 0.0;
      if (weighted) f1_part *= col_total[static_cast<std::size_t>(j)];
      benefit[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = primary * t + f1_part;
    }
  return benefit;
}

}  // namespace

std::vector<int> hungarian_map(const ContingencyTable& ct) {
  return max_benefit_assignment(tie_broken_benefit(ct, false));
}

double accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
  const ContingencyTable ct = ContingencyTable::from_labels(pred, truth);
  const std::vector<int> map = hungarian_map(ct);
  long long matched = 0;
  for (std::size_t i = 0; i < ct.counts.size(); ++i)
    matched += ct.counts[i][static_cast<std::size_t>(map[i])];
  return static_cast<double>(matched) / static_cast<double>(ct.n);
}

double nmi(const std::vector<int>& pred, const std::vector<int>& truth, bool geometric_mean) {
  const ContingencyTable ct = ContingencyTable::from_labels(pred, truth);
  const double n = static_cast<double>(ct.n);
  const std::vector<long long> cp = bincount(pred, ct.pred_classes);
  const std::vector<long long> ctr = bincount(truth, ct.true_classes);

  double mi = 0.0;
  for (int i = 0; i < ct.pred_classes; ++i) {
    for (int j = 0; j < ct.true_classes; ++j) {
      const long long nij = ct.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (nij == 0) continue;
      mi += (nij / n) * std::log(n * static_cast<double>(nij) /
                                 (static_cast<double>(cp[static_cast<std::size_t>(i)]) *
                                  static_cast<double>(ctr[static_cast<std::size_t>(j)])));
    }
  }
  const double hp = entropy(cp, n);
  const double ht = entropy(ctr, n);
  const double denom = geometric_mean ? std::sqrt(hp * ht) : 0.5 * (hp + ht);
  if (denom <= 0.0) return 0.0;  // a single-block partition with zero MI
  return std::clamp(mi / denom, 0.0, 1.0);
}

double ari(const std::vector<int>& pred, const std::vector<int>& truth) {
  const ContingencyTable ct = ContingencyTable::from_labels(pred, truth);
  const auto pairs = [](long long c) { return c * (c - 1) / 2; };

  long long sum_ij = 0;
  for (int i = 0; i < ct.pred_classes; ++i)
    for (int j = 0; j < ct.true_classes; ++j)
      sum_ij += pairs(ct.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
  long long sum_p = 0;
  for (long long c : bincount(pred, ct.pred_classes)) sum_p += pairs(c);
  long long sum_t = 0;
  for (long long c : bincount(truth, ct.true_classes)) sum_t += pairs(c);

  const double total = static_cast<double>(pairs(ct.n));
  const double expected = static_cast<double>(sum_p) * static_cast<double>(sum_t) / total;
  const double max_index = 0.5 * static_cast<double>(sum_p + sum_t);
  if (max_index == expected) return 1.0;  // both partitions trivial
  return (static_cast<double>(sum_ij) - expected) / (max_index - expected);
}

double f1(const std::vector<int>& pred, const std::vector<int>& truth, bool weighted) {
  const ContingencyTable ct = ContingencyTable::from_labels(pred, truth);
  const std::vector<int> map = max_benefit_assignment(tie_broken_benefit(ct, weighted));

  // per true class j: tp, mapped-prediction count, support
  const int size = static_cast<int>(ct.counts.size());
  std::vector<long long> tp(static_cast<std::size_t>(size), 0);
  std::vector<long long> pred_count(static_cast<std::size_t>(size), 0);
  std::vector<long long> support(static_cast<std::size_t>(size), 0);
  for (int i = 0; i < size; ++i) {
    const int j = map[static_cast<std::size_t>(i)];
    tp[static_cast<std::size_t>(j)] += ct.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    for (int t = 0; t < size; ++t) pred_count[static_cast<std::size_t>(j)] += ct.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
  }
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) support[static_cast<std::size_t>(j)] += ct.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];

  double sum = 0.0;
  double weight_total = 0.0;
  for (int j = 0; j < ct.true_classes; ++j) {
    const double w = weighted ? static_cast<double>(support[static_cast<std::size_t>(j)]) : 1.0;
    weight_total += w;
    const double denom = static_cast<double>(pred_count[static_cast<std::size_t>(j)] + support[static_cast<std::size_t>(j)]);
    if (denom > 0.0) sum += w * 2.0 * static_cast<double>(tp[static_cast<std::size_t>(j)]) / denom;
  }
  return weight_total > 0.0 ? sum / weight_total : 0.0;
}

}  // namespace cdc
