#include "cdc/kmeans.hpp"

#include <algorithm>
#include <stdexcept>

#include "cdc/rng.hpp"

namespace cdc {

namespace {

constexpr int kMaxLloydIterations = 300;

// squared distances from every row of x to every centroid, GEMM-based
Matrix pairwise_sq(const Matrix& x, const Vector& xnorm2, const Matrix& centroids) {
  Vector cnorm2 = centroids.rowwise().squaredNorm();
  Matrix d2 = (-2.0 * (x * centroids.transpose())).rowwise() + cnorm2.transpose();
  d2.colwise() += xnorm2;
  return d2.cwiseMax(0.0);
}

Matrix init_plus_plus(const Matrix& x, int c, SplitMix64& rng) {
  const Eigen::Index n = x.rows();
  Matrix centroids(c, x.cols());
  std::vector<char> chosen(static_cast<std::size_t>(n), 0);

  const Eigen::Index first = static_cast<Eigen::Index>(rng.next_below(static_cast<std::uint64_t>(n)));
  centroids.row(0) = x.row(first);
  chosen[static_cast<std::size_t>(first)] = 1;

  Vector d2 = (x.rowwise() - x.row(first)).rowwise().squaredNorm();
  for (int j = 1; j < c; ++j) {
    const double total = d2.sum();
    Eigen::Index pick = -1;
    if (total > 0.0) {
      const double target = rng.next_double() * total;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2(i);
        if (acc >= target) { pick = i; break; }
      }
      if (pick < 0) pick = n - 1;
    } else {
      // all remaining mass is zero (duplicate points); take the lowest
      // unchosen index so the result stays deterministic
      for (Eigen::Index i = 0; i < n; ++i)
        if (!chosen[static_cast<std::size_t>(i)]) { pick = i; break; }
      if (pick < 0) pick = 0;
    }
    centroids.row(j) = x.row(pick);
    chosen[static_cast<std::size_t>(pick)] = 1;
    d2 = d2.cwiseMin((x.rowwise() - x.row(pick)).rowwise().squaredNorm());
  }
  return centroids;
}

}  // namespace

KMeansResult kmeans(const Matrix& x, int clusters, std::uint64_t seed,
                    std::vector<double>* inertia_trace) {
  const Eigen::Index n = x.rows();
  if (clusters <= 0) throw std::invalid_argument("kmeans: clusters must be positive");
  if (clusters > n)
    throw std::invalid_argument("kmeans: more clusters (" + std::to_string(clusters) +
                                ") than samples (" + std::to_string(n) + ")");
  if (!x.allFinite()) throw std::invalid_argument("kmeans: non-finite input");

  SplitMix64 rng(seed);
  const Vector xnorm2 = x.rowwise().squaredNorm();
  Matrix centroids = init_plus_plus(x, clusters, rng);

  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  std::vector<int> counts(static_cast<std::size_t>(clusters));

  for (int iter = 0; iter < kMaxLloydIterations; ++iter) {
    const Matrix d2 = pairwise_sq(x, xnorm2, centroids);
    bool changed = false;
    double inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Index best;
      inertia += d2.row(i).minCoeff(&best);
      if (labels[static_cast<std::size_t>(i)] != static_cast<int>(best)) {
        labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
        changed = true;
      }
    }
    if (inertia_trace) inertia_trace->push_back(inertia);
    if (!changed) break;

    centroids.setZero();
    std::fill(counts.begin(), counts.end(), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int li = labels[static_cast<std::size_t>(i)];
      centroids.row(li) += x.row(i);
      ++counts[static_cast<std::size_t>(li)];
    }
    for (int j = 0; j < clusters; ++j)
      if (counts[static_cast<std::size_t>(j)] > 0) centroids.row(j) /= counts[static_cast<std::size_t>(j)];

    // an emptied cluster steals the point farthest from its current centroid
    for (int j = 0; j < clusters; ++j) {
      if (counts[static_cast<std::size_t>(j)] > 0) continue;
      Eigen::Index far = -1;
      double far_d2 = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const int li = labels[static_cast<std::size_t>(i)];
        if (counts[static_cast<std::size_t>(li)] <= 1) continue;  // do not empty another cluster
        const double di = (x.row(i) - centroids.row(li)).squaredNorm();
        if (di > far_d2) { far_d2 = di; far = i; }
      }
      if (far < 0) continue;  // nothing stealable; leave the centroid in place
      const int old = labels[static_cast<std::size_t>(far)];
      centroids.row(j) = x.row(far);
      labels[static_cast<std::size_t>(far)] = j;
      --counts[static_cast<std::size_t>(old)];
      counts[static_cast<std::size_t>(j)] = 1;
    }
  }

  KMeansResult result;
  result.labels = std::move(labels);
  result.inertia = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    result.inertia += (x.row(i) - centroids.row(result.labels[static_cast<std::size_t>(i)])).squaredNorm();
  result.centroids = std::move(centroids);
  return result;
}

}  // namespace cdc
