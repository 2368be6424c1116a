#include <benchmark/benchmark.h>

#include "cdc/filter.hpp"
#include "cdc/kmeans.hpp"
#include "cdc/pipeline.hpp"
#include "cdc/rng.hpp"
#include "cdc/solver.hpp"
#include "cdc/synth.hpp"

namespace {

cdc::Dataset sbm(int n, int c, int dim, double avg_degree) {
  cdc::SbmParams params;
  params.n = n;
  params.clusters = c;
  params.dim = dim;
  params.p_in = std::min(1.0, avg_degree / (n / static_cast<double>(c)));
  params.p_out = params.p_in / 20.0;
  return cdc::make_sbm_dataset(params);
}

void bm_spmm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const cdc::Dataset ds = sbm(n, 8, 32, 10.0);
  const cdc::SparseGraph a = cdc::normalize_adjacency(*ds.graphs.front());
  const cdc::Matrix& x = *ds.attributes.front();
  for (auto _ : state) benchmark::DoNotOptimize(cdc::spmm(a, x));
  state.SetItemsProcessed(state.iterations() * a.nnz());
}
BENCHMARK(bm_spmm)->Arg(10000)->Arg(40000);

void bm_graph_filter(benchmark::State& state) {
  const cdc::Dataset ds = sbm(20000, 8, 32, 10.0);
  const cdc::SparseGraph a = cdc::normalize_adjacency(*ds.graphs.front());
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cdc::graph_filter(a, *ds.attributes.front(), k));
}
BENCHMARK(bm_graph_filter)->Arg(1)->Arg(2)->Arg(5);

void bm_sym_eig(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  cdc::SplitMix64 rng(1);
  cdc::Matrix m(n, n);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = rng.next_gaussian();
  m = (0.5 * (m + m.transpose())).eval();
  for (auto _ : state) benchmark::DoNotOptimize(cdc::sym_eig(m));
}
BENCHMARK(bm_sym_eig)->Arg(100)->Arg(500)->Arg(1500)->Unit(benchmark::kMillisecond);

void bm_kmeans(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  cdc::SplitMix64 rng(2);
  cdc::Matrix x(n, 8);
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.next_gaussian();
  for (auto _ : state) benchmark::DoNotOptimize(cdc::kmeans(x, 10, 0));
}
BENCHMARK(bm_kmeans)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

void bm_fit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const cdc::Dataset ds = sbm(n, 10, 20, 8.0);
  const cdc::ViewSet views = cdc::expand_views(ds);
  const auto h = cdc::filter_all(views, 2);
  cdc::SolverConfig cfg;
  cfg.anchors = 30;
  cfg.max_iter = 10;
  cfg.tol = 1e-30;
  for (auto _ : state) benchmark::DoNotOptimize(cdc::fit(h, cfg));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_fit)->Arg(10000)->Arg(20000)->Arg(40000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
