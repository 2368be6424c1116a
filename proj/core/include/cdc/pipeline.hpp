#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cdc/dataset.hpp"
#include "cdc/embedding.hpp"
#include "cdc/solver.hpp"
#include "cdc/synth.hpp"

namespace cdc {

struct PipelineOptions {
  int k = 2;
  double alpha = 1.0;
  double beta = 1.0;
  int anchors = 0;   // 0 -> max(clusters, 30)
  int clusters = 0;  // 0 -> manifest value
  int knn = 5;
  int max_iter = 50;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  bool normalize_rows = false;
  SylvesterMode sylvester_mode = SylvesterMode::derived_alpha;
  int embed_rank = 0;  // 0 -> clusters (spectral rank fed to the final k-means)

  std::optional<std::filesystem::path> dump_filtered_dir;
  std::optional<std::filesystem::path> dump_trace;
  std::optional<std::filesystem::path> dump_embedding;
  std::optional<std::filesystem::path> dump_labels;
};

struct MetricScores {
  double acc = 0.0;
  double nmi = 0.0;
  double ari = 0.0;
  double f1 = 0.0;
};

struct StageTimings {
  double load = 0.0;
  double filter = 0.0;
  double fit = 0.0;
  double embed = 0.0;
  double kmeans = 0.0;
  double total = 0.0;
};

struct RunReport {
  std::string dataset;
  PipelineOptions config;
  std::optional<MetricScores> metrics;  // absent when the dataset is unlabeled
  StageTimings timings;
  int iterations = 0;
  bool converged = false;
  double objective = 0.0;
  std::vector<double> lambda;
  std::vector<std::string> diagnostics;
  std::vector<int> labels;  // predicted, not serialized into the JSON report

  std::string to_json() const;  // pretty-printed report (schema in README)
};

/// load -> expand -> filter -> fit -> embed -> k-means -> metrics. Failures
/// carry the stage name. Deterministic for a fixed seed.
RunReport run_pipeline(const std::filesystem::path& manifest, const PipelineOptions& options);

/// Same pipeline on an already-loaded dataset (load time reported as 0).
RunReport run_on_dataset(const Dataset& ds, const PipelineOptions& options,
                         const std::string& dataset_name = "");

struct GridSpec {
  std::vector<int> ks;
  std::vector<double> alphas;
  std::vector<double> betas;
  std::vector<int> anchor_counts;

  /// filter order {2}, alpha/beta over {1e-3, 1, 1e1, 1e3, 1e4} and anchors
  /// over {c, 10, 30, 50, 70, 100} (values below c are dropped).
  static GridSpec defaults(int clusters);
};

struct GridCell {
  int k = 0;
  double alpha = 0.0;
  double beta = 0.0;
  int anchors = 0;
  std::optional<MetricScores> metrics;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  double seconds = 0.0;
  std::string error;  // empty on success
  bool best = false;
};

struct GridResult {
  RunReport best;
  std::vector<GridCell> cells;  // enumeration order: k, anchors, alpha, beta
  std::string csv() const;      // header + one row per cell
};

/// Runs every grid combination, sharing filtered views per k and anchor
/// initializations per (k, m). Cells are selected by ACC when ground truth
/// is available and by smallest final objective otherwise; per-cell
/// failures are recorded, not fatal.
GridResult grid_search(const std::filesystem::path& manifest, const GridSpec& spec,
                       const PipelineOptions& base);

struct ScaleBenchRow {
  int n = 0;
  double synth_s = 0.0;
  double filter_s = 0.0;
  double fit_s = 0.0;
  double embed_s = 0.0;
  double kmeans_s = 0.0;
  int iterations = 0;
  long long rss_high_water_kb = 0;  // VmHWM delta since benchmark start
  double expected_peak_mb = 0.0;    // analytic O(max(mN, Nd)) byte account
};

struct ScaleBenchResult {
  std::vector<ScaleBenchRow> rows;
  std::string csv() const;
};

/// Fits synthetic SBM datasets of each size with fixed anchors/dim/k and
/// reports wall time per stage plus the resident-memory high-water mark.
/// Sizes must be ascending (the high-water deltas are only meaningful that
/// way). Edge probabilities are rescaled by base.n / n so the expected
/// degree, and hence nnz per node, stays constant across sizes.
ScaleBenchResult scale_bench(const std::vector<int>& sizes, const SbmParams& base,
                             const PipelineOptions& options);

/// Samples per_class nodes from every ground-truth class (all of them plus a
/// comment line when a class is smaller), reorders them class-major and
/// emits their anchor-graph columns as CSV: node, label, z_1..z_m.
std::string grouping_dump_csv(const Matrix& z, const std::vector<int>& labels, int per_class,
                              std::uint64_t seed);

/// Honors the CDC_THREADS environment variable (caps OpenMP/Eigen threads).
void apply_thread_cap_from_env();

}  // namespace cdc
