#include "cdc/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "cdc/io.hpp"
#include "cdc/kmeans.hpp"
#include "cdc/metrics.hpp"
#include "cdc/rng.hpp"
#include "cdc/version.hpp"

namespace cdc {

namespace {

using nlohmann::json;

class StageTimer {
 public:
  StageTimer() : start_(std::chrono::steady_clock::now()) {}
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double dt = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return dt;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

[[noreturn]] void stage_error(const std::string& stage, const std::exception& e) {
  throw std::runtime_error("stage " + stage + ": " + e.what());
}

json options_to_json(const PipelineOptions& o, int resolved_clusters, int resolved_anchors) {
  return json{{"k", o.k},
              {"alpha", o.alpha},
              {"beta", o.beta},
              {"anchors", resolved_anchors},
              {"clusters", resolved_clusters},
              {"knn", o.knn},
              {"max_iter", o.max_iter},
              {"tol", o.tol},
              {"seed", o.seed},
              {"normalize_rows", o.normalize_rows},
              {"sylvester_mode", o.sylvester_mode == SylvesterMode::derived_alpha ? "alpha" : "beta"},
              {"embed_rank", o.embed_rank == 0 ? resolved_clusters : o.embed_rank}};
}

long long read_vm_hwm_kb() {
#ifdef __linux__
  std::ifstream status("/proc/self/status");
  std::string line;
  while (std::getline(status, line)) {
    if (line.rfind("VmHWM:", 0) == 0) {
      long long kb = 0;
      std::sscanf(line.c_str(), "VmHWM: %lld", &kb);
      return kb;
    }
  }
#endif
  return 0;
}

}  // namespace

std::string RunReport::to_json() const {
  json j;
  j["dataset"] = dataset;
  j["build"] = build_id;
  j["config"] = options_to_json(config, config.clusters, config.anchors);
  if (metrics) {
    j["metrics"] = {{"acc", metrics->acc}, {"nmi", metrics->nmi}, {"ari", metrics->ari}, {"f1", metrics->f1}};
  } else {
    j["metrics"] = nullptr;
  }
  j["timings"] = {{"load", timings.load}, {"filter", timings.filter}, {"fit", timings.fit},
                  {"embed", timings.embed}, {"kmeans", timings.kmeans}, {"total", timings.total}};
  j["iterations"] = iterations;
  j["converged"] = converged;
  j["objective"] = objective;
  j["lambda"] = lambda;
  j["diagnostics"] = diagnostics;
  return j.dump(2) + "\n";
}

RunReport run_pipeline(const std::filesystem::path& manifest, const PipelineOptions& options) {
  StageTimer timer;
  Dataset ds;
  try {
    ds = load_dataset(manifest);
  } catch (const std::exception& e) {
    stage_error("load", e);
  }
  const double t_load = timer.lap();
  RunReport report = run_on_dataset(ds, options, ds.name);
  report.timings.load = t_load;
  report.timings.total += t_load;
  return report;
}

RunReport run_on_dataset(const Dataset& ds, const PipelineOptions& options,
                         const std::string& dataset_name) {
  RunReport report;
  report.dataset = dataset_name.empty() ? ds.name : dataset_name;
  report.config = options;
  const int clusters = options.clusters > 0 ? options.clusters : ds.clusters;
  const int anchors = options.anchors > 0 ? options.anchors : std::max(clusters, 30);
  const int embed_rank = options.embed_rank > 0 ? options.embed_rank : clusters;
  report.config.clusters = clusters;
  report.config.anchors = anchors;
  report.config.embed_rank = embed_rank;

  StageTimer timer;
  std::vector<FilteredView> h;
  try {
    const ViewSet views = expand_views(ds, options.knn);
    h = filter_all(views, options.k);
    if (options.dump_filtered_dir) {
      std::filesystem::create_directories(*options.dump_filtered_dir);
      for (std::size_t v = 0; v < h.size(); ++v)
        write_matrix_market_array(*options.dump_filtered_dir / ("filtered_view" + std::to_string(v) + ".mtx"),
                                  h[v].h);
    }
  } catch (const std::exception& e) {
    stage_error("filter", e);
  }
  report.timings.filter = timer.lap();

  AnchorModel model;
  try {
    SolverConfig cfg;
    cfg.alpha = options.alpha;
    cfg.beta = options.beta;
    cfg.anchors = anchors;
    cfg.max_iter = options.max_iter;
    cfg.tol = options.tol;
    cfg.seed = options.seed;
    cfg.sylvester_mode = options.sylvester_mode;
    model = fit(h, cfg);
    if (options.dump_trace) {
      std::ofstream trace(*options.dump_trace);
      if (!trace) throw std::runtime_error("cannot write " + options.dump_trace->string());
      trace << "iteration,objective";
      for (Eigen::Index v = 0; v < model.lambda.size(); ++v) trace << ",lambda_" << (v + 1);
      trace << "\n";
      for (std::size_t t = 0; t < model.objective_trace.size(); ++t) {
        trace << (t + 1) << "," << model.objective_trace[t];
        for (Eigen::Index v = 0; v < model.lambda.size(); ++v) trace << "," << model.lambda(v);
        trace << "\n";
      }
    }
  } catch (const std::exception& e) {
    stage_error("fit", e);
  }
  report.timings.fit = timer.lap();
  report.iterations = model.iterations_run;
  report.converged = model.converged;
  report.objective = model.objective_trace.empty() ? 0.0 : model.objective_trace.back();
  report.lambda.assign(model.lambda.data(), model.lambda.data() + model.lambda.size());
  report.diagnostics = model.diagnostics;

  Matrix embedding;
  try {
    embedding = embed(model.z, std::min<int>(embed_rank, static_cast<int>(model.z.rows())),
                      options.normalize_rows, &report.diagnostics);
    if (options.dump_embedding) write_csv(*options.dump_embedding, embedding);
  } catch (const std::exception& e) {
    stage_error("embed", e);
  }
  report.timings.embed = timer.lap();

  try {
    report.labels = kmeans(embedding, clusters, options.seed).labels;
    if (options.dump_labels) write_labels(*options.dump_labels, report.labels);
  } catch (const std::exception& e) {
    stage_error("kmeans", e);
  }
  report.timings.kmeans = timer.lap();

  if (ds.labels) {
    try {
      MetricScores scores;
      scores.acc = accuracy(report.labels, *ds.labels);
      scores.nmi = nmi(report.labels, *ds.labels);
      scores.ari = ari(report.labels, *ds.labels);
      scores.f1 = f1(report.labels, *ds.labels);
      report.metrics = scores;
    } catch (const std::exception& e) {
      stage_error("metrics", e);
    }
  }
  report.timings.total = report.timings.filter + report.timings.fit + report.timings.embed +
                         report.timings.kmeans;
  return report;
}

GridSpec GridSpec::defaults(int clusters) {
  GridSpec spec;
  spec.ks = {2};
  spec.alphas = {1e-3, 1.0, 1e1, 1e3, 1e4};
  spec.betas = {1e-3, 1.0, 1e1, 1e3, 1e4};
  std::set<int> ms;
  for (int m : {clusters, 10, 30, 50, 70, 100})
    if (m >= clusters) ms.insert(m);
  spec.anchor_counts.assign(ms.begin(), ms.end());
  return spec;
}

std::string GridResult::csv() const {
  std::ostringstream out;
  out << "k,alpha,beta,anchors,acc,nmi,ari,f1,objective,iterations,converged,seconds,best,error\n";
  for (const GridCell& c : cells) {
    out << c.k << "," << c.alpha << "," << c.beta << "," << c.anchors << ",";
    if (c.metrics)
      out << c.metrics->acc << "," << c.metrics->nmi << "," << c.metrics->ari << "," << c.metrics->f1;
    else
      out << ",,,";
    out << "," << c.objective << "," << c.iterations << "," << (c.converged ? 1 : 0) << ","
        << c.seconds << "," << (c.best ? 1 : 0) << "," << c.error << "\n";
  }
  return out.str();
}

GridResult grid_search(const std::filesystem::path& manifest, const GridSpec& spec,
                       const PipelineOptions& base) {
  if (spec.ks.empty() || spec.alphas.empty() || spec.betas.empty() || spec.anchor_counts.empty())
    throw std::invalid_argument("grid_search: every grid dimension needs at least one value");

  Dataset ds;
  try {
    ds = load_dataset(manifest);
  } catch (const std::exception& e) {
    stage_error("load", e);
  }
  const int clusters = base.clusters > 0 ? base.clusters : ds.clusters;
  const bool labeled = ds.labels.has_value();

  GridResult result;
  std::size_t best_index = 0;
  bool have_best = false;

  ViewSet views = expand_views(ds, base.knn);
  for (int k : spec.ks) {
    const std::vector<FilteredView> h = filter_all(views, k);
    const SolverWorkspace ws = prepare_workspace(h);
    for (int m : spec.anchor_counts) {
      std::vector<Matrix> b0;
      std::string init_error;
      try {
        b0 = init_anchors(h, m, base.seed);
      } catch (const std::exception& e) {
        init_error = e.what();
      }
      for (double alpha : spec.alphas) {
        for (double beta : spec.betas) {
          GridCell cell;
          cell.k = k;
          cell.alpha = alpha;
          cell.beta = beta;
          cell.anchors = m;
          StageTimer timer;
          if (!init_error.empty()) {
            cell.error = init_error;
            result.cells.push_back(cell);
            continue;
          }
          try {
            SolverConfig cfg;
            cfg.alpha = alpha;
            cfg.beta = beta;
            cfg.anchors = m;
            cfg.max_iter = base.max_iter;
            cfg.tol = base.tol;
            cfg.seed = base.seed;
            cfg.sylvester_mode = base.sylvester_mode;
            AnchorModel model = fit(h, cfg, b0, &ws);

            const int embed_rank = std::min<int>(base.embed_rank > 0 ? base.embed_rank : clusters,
                                                 static_cast<int>(model.z.rows()));
            Diagnostics diag;
            const Matrix embedding = embed(model.z, embed_rank, base.normalize_rows, &diag);
            std::vector<int> labels = kmeans(embedding, clusters, base.seed).labels;

            cell.objective = model.objective_trace.empty() ? 0.0 : model.objective_trace.back();
            cell.iterations = model.iterations_run;
            cell.converged = model.converged;
            if (labeled) {
              MetricScores scores;
              scores.acc = accuracy(labels, *ds.labels);
              scores.nmi = nmi(labels, *ds.labels);
              scores.ari = ari(labels, *ds.labels);
              scores.f1 = f1(labels, *ds.labels);
              cell.metrics = scores;
            }
            cell.seconds = timer.lap();

            const bool better =
                !have_best ||
                (labeled ? cell.metrics->acc > result.cells[best_index].metrics->acc
                         : cell.objective < result.cells[best_index].objective);
            if (better) {
              have_best = true;
              best_index = result.cells.size();
              RunReport rep;
              rep.dataset = ds.name;
              rep.config = base;
              rep.config.k = k;
              rep.config.alpha = alpha;
              rep.config.beta = beta;
              rep.config.anchors = m;
              rep.config.clusters = clusters;
              rep.config.embed_rank = embed_rank;
              rep.metrics = cell.metrics;
              rep.iterations = cell.iterations;
              rep.converged = cell.converged;
              rep.objective = cell.objective;
              rep.lambda.assign(model.lambda.data(), model.lambda.data() + model.lambda.size());
              rep.diagnostics = model.diagnostics;
              rep.labels = std::move(labels);
              rep.timings.fit = cell.seconds;
              rep.timings.total = cell.seconds;
              result.best = std::move(rep);
            }
          } catch (const std::exception& e) {
            cell.error = e.what();
            cell.seconds = timer.lap();
          }
          result.cells.push_back(cell);
        }
      }
    }
  }
  if (!have_best) throw std::runtime_error("grid_search: every cell failed");
  result.cells[best_index].best = true;

  // selection-criterion sanity: the flagged cell dominates every other cell
  for (const GridCell& c : result.cells) {
    if (!c.error.empty()) continue;
    const bool dominated = labeled ? result.cells[best_index].metrics->acc >= c.metrics->acc
                                   : result.cells[best_index].objective <= c.objective;
    if (!dominated) throw std::logic_error("grid_search: best-cell selection violated");
  }
  return result;
}

std::string ScaleBenchResult::csv() const {
  std::ostringstream out;
  out << "n,synth_s,filter_s,fit_s,embed_s,kmeans_s,iterations,rss_high_water_kb,expected_peak_mb\n";
  for (const ScaleBenchRow& r : rows) {
    out << r.n << "," << r.synth_s << "," << r.filter_s << "," << r.fit_s << "," << r.embed_s << ","
        << r.kmeans_s << "," << r.iterations << "," << r.rss_high_water_kb << ","
        << r.expected_peak_mb << "\n";
  }
  return out.str();
}

ScaleBenchResult scale_bench(const std::vector<int>& sizes, const SbmParams& base,
                             const PipelineOptions& options) {
  if (sizes.empty()) throw std::invalid_argument("scale_bench: no sizes given");
  for (std::size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] <= sizes[i - 1])
      throw std::invalid_argument("scale_bench: sizes must be strictly ascending");

  ScaleBenchResult result;
  const long long hwm_start = read_vm_hwm_kb();
  for (int n : sizes) {
    ScaleBenchRow row;
    row.n = n;
    StageTimer timer;

    SbmParams params = base;
    params.n = n;
    const double scale = static_cast<double>(base.n) / static_cast<double>(n);
    params.p_in = std::min(1.0, base.p_in * scale);
    params.p_out = std::min(1.0, base.p_out * scale);
    if (!(params.p_out < params.p_in)) params.p_out = params.p_in / 2.0;
    const Dataset ds = make_sbm_dataset(params);
    row.synth_s = timer.lap();

    const ViewSet views = expand_views(ds, options.knn);
    const std::vector<FilteredView> h = filter_all(views, options.k);
    row.filter_s = timer.lap();

    SolverConfig cfg;
    cfg.alpha = options.alpha;
    cfg.beta = options.beta;
    cfg.anchors = options.anchors > 0 ? options.anchors : std::max(ds.clusters, 30);
    cfg.max_iter = options.max_iter;
    cfg.tol = options.tol;
    cfg.seed = options.seed;
    cfg.sylvester_mode = options.sylvester_mode;
    const AnchorModel model = fit(h, cfg);
    row.fit_s = timer.lap();
    row.iterations = model.iterations_run;

    const int embed_rank = std::min<int>(options.embed_rank > 0 ? options.embed_rank : ds.clusters,
                                         static_cast<int>(model.z.rows()));
    Diagnostics diag;
    const Matrix embedding = embed(model.z, embed_rank, options.normalize_rows, &diag);
    row.embed_s = timer.lap();
    const KMeansResult km = kmeans(embedding, ds.clusters, options.seed);
    row.kmeans_s = timer.lap();
    (void)km;

    row.rss_high_water_kb = read_vm_hwm_kb() - hwm_start;

    // dominant simultaneously-live buffers, all O(max(mN, Nd)):
    //   raw features X (N d), filtered copy H (V N d), anchor graph Z (m N),
    //   the m x N accumulator + product temp in update_Z, the d x N and
    //   m x N residual temps in view_losses, embedding + k-means distances
    const double dN = static_cast<double>(params.dim) * n;
    const double mN = static_cast<double>(cfg.anchors) * n;
    const double views_count = static_cast<double>(h.size());
    row.expected_peak_mb = 8.0 *
        ((1.0 + views_count) * dN + 4.0 * mN + dN + 2.0 * static_cast<double>(embed_rank + ds.clusters) * n +
         3.0 * static_cast<double>(ds.graphs.front()->nnz())) / (1024.0 * 1024.0);
    result.rows.push_back(row);
  }
  return result;
}

std::string grouping_dump_csv(const Matrix& z, const std::vector<int>& labels, int per_class,
                              std::uint64_t seed) {
  if (per_class < 1) throw std::invalid_argument("grouping_dump: per_class must be >= 1");
  if (labels.size() != static_cast<std::size_t>(z.cols()))
    throw std::invalid_argument("grouping_dump: labels/anchor-graph size mismatch");

  const int classes = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::vector<int>> members(static_cast<std::size_t>(classes));
  for (std::size_t i = 0; i < labels.size(); ++i)
    members[static_cast<std::size_t>(labels[i])].push_back(static_cast<int>(i));

  SplitMix64 rng(seed);
  std::ostringstream out;
  std::vector<std::pair<int, int>> picked;  // (node, class), class-major
  for (int cl = 0; cl < classes; ++cl) {
    auto& pool = members[static_cast<std::size_t>(cl)];
    if (static_cast<int>(pool.size()) < per_class) {
      out << "# class " << cl << ": only " << pool.size() << " of " << per_class
          << " requested nodes available\n";
    }
    const int take = std::min<int>(per_class, static_cast<int>(pool.size()));
    for (int t = 0; t < take; ++t) {
      const auto j = t + static_cast<int>(rng.next_below(pool.size() - static_cast<std::size_t>(t)));
      std::swap(pool[static_cast<std::size_t>(t)], pool[static_cast<std::size_t>(j)]);
      picked.emplace_back(pool[static_cast<std::size_t>(t)], cl);
    }
  }

  out << "node,label";
  for (Eigen::Index r = 0; r < z.rows(); ++r) out << ",z_" << (r + 1);
  out << "\n";
  for (const auto& [node, cl] : picked) {
    out << node << "," << cl;
    for (Eigen::Index r = 0; r < z.rows(); ++r) out << "," << z(r, node);
    out << "\n";
  }
  return out.str();
}

void apply_thread_cap_from_env() {
  if (const char* env = std::getenv("CDC_THREADS")) {
    const int threads = std::atoi(env);
    if (threads > 0) {
#ifdef _OPENMP
      omp_set_num_threads(threads);
#endif
      Eigen::setNbThreads(threads);
    }
  }
}

}  // namespace cdc
