#include "cdc/embedding.hpp"

#include <stdexcept>

#include "cdc/kmeans.hpp"

namespace cdc {

namespace {

struct Embedded {
  Matrix e;
  Vector sv;
};

Embedded embed_impl(const Matrix& z, int clusters, bool normalize_rows, Diagnostics* diag) {
  if (clusters > z.rows())
    throw std::invalid_argument("embed: need clusters <= anchor count, got " +
                                std::to_string(clusters) + " > " + std::to_string(z.rows()));
  const SvdWide svd = svd_wide(z, clusters, diag);
  Embedded out;
  out.e = Matrix::Zero(z.cols(), clusters);
  out.e.leftCols(svd.right.cols()) = svd.right;
  out.sv = Vector::Zero(clusters);
  out.sv.head(svd.singular_values.size()) = svd.singular_values;
  if (normalize_rows) {
    for (Eigen::Index i = 0; i < out.e.rows(); ++i) {
      const double norm = out.e.row(i).norm();
      if (norm > 0.0) out.e.row(i) /= norm;
    }
  }
  return out;
}

}  // namespace

Matrix embed(const Matrix& z, int clusters, bool normalize_rows, Diagnostics* diag) {
  return embed_impl(z, clusters, normalize_rows, diag).e;
}

ClusterResult cluster(const AnchorModel& model, int clusters, std::uint64_t seed,
                      bool normalize_rows) {
  if (!model.z.allFinite()) throw std::invalid_argument("cluster: anchor graph has non-finite values");
  ClusterResult result;
  Embedded em = embed_impl(model.z, clusters, normalize_rows, &result.diagnostics);
  result.embedding = std::move(em.e);
  result.singular_values = std::move(em.sv);
  result.labels = kmeans(result.embedding, clusters, seed).labels;
  return result;
}

}  // namespace cdc
