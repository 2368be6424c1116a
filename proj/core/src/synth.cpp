#include "cdc/synth.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "cdc/io.hpp"
#include "cdc/rng.hpp"

namespace cdc {

namespace {

// appends Bernoulli(p) hits over cell indices [0, cells) by geometric skips
template <typename Emit>
void skip_sample(std::int64_t cells, double p, SplitMix64& rng, Emit&& emit) {
  if (cells <= 0 || p <= 0.0) return;
  if (p >= 1.0) {
    for (std::int64_t t = 0; t < cells; ++t) emit(t);
    return;
  }
  const double log1mp = std::log1p(-p);
  std::int64_t t = -1;
  for (;;) {
    double u = rng.next_double();
    t += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-u) / log1mp));
    if (t >= cells) break;
    emit(t);
  }
}

// unrank t in [0, s*(s-1)/2) to the strictly-upper-triangle pair (i, j), i < j
std::pair<int, int> unrank_triangle(std::int64_t t, int s) {
  // row i has (s - 1 - i) cells; solve the quadratic and fix up rounding
  const double sd = static_cast<double>(s);
  std::int64_t i = static_cast<std::int64_t>(
      std::floor(sd - 0.5 - std::sqrt((sd - 0.5) * (sd - 0.5) - 2.0 * static_cast<double>(t))));
  auto row_start = [&](std::int64_t r) { return r * (2 * s - r - 1) / 2; };
  while (i > 0 && row_start(i) > t) --i;
  while (row_start(i + 1) <= t) ++i;
  const std::int64_t j = i + 1 + (t - row_start(i));
  return {static_cast<int>(i), static_cast<int>(j)};
}

}  // namespace

void SbmParams::validate() const {
  if (clusters < 1 || n < clusters)
    throw std::invalid_argument("synth: need n >= clusters >= 1");
  if (dim < 1) throw std::invalid_argument("synth: dim must be >= 1");
  if (!(p_out >= 0.0 && p_out < p_in && p_in <= 1.0))
    throw std::invalid_argument("synth: need 0 <= p_out < p_in <= 1");
}

Dataset make_sbm_dataset(const SbmParams& params) {
  params.validate();
  const int n = params.n;
  const int c = params.clusters;
  SplitMix64 rng(params.seed);

  // contiguous balanced blocks; the first (n mod c) blocks get one extra node
  std::vector<int> start(static_cast<std::size_t>(c) + 1, 0);
  for (int b = 0; b < c; ++b)
    start[static_cast<std::size_t>(b) + 1] = start[static_cast<std::size_t>(b)] + n / c + (b < n % c ? 1 : 0);

  Matrix means(c, params.dim);
  for (int b = 0; b < c; ++b)
    for (int j = 0; j < params.dim; ++j) means(b, j) = params.mean_scale * rng.next_gaussian();

  auto features = std::make_shared<Matrix>(n, params.dim);
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int b = 0; b < c; ++b) {
    for (int i = start[static_cast<std::size_t>(b)]; i < start[static_cast<std::size_t>(b) + 1]; ++i) {
      labels[static_cast<std::size_t>(i)] = b;
      for (int j = 0; j < params.dim; ++j) (*features)(i, j) = means(b, j) + rng.next_gaussian();
    }
  }

  std::vector<Edge> edges;
  for (int a = 0; a < c; ++a) {
    const int sa = start[static_cast<std::size_t>(a) + 1] - start[static_cast<std::size_t>(a)];
    const std::int64_t cells = static_cast<std::int64_t>(sa) * (sa - 1) / 2;
    skip_sample(cells, params.p_in, rng, [&](std::int64_t t) {
      auto [i, j] = unrank_triangle(t, sa);
      edges.push_back({start[static_cast<std::size_t>(a)] + i, start[static_cast<std::size_t>(a)] + j, 1.0});
    });
    for (int b = a + 1; b < c; ++b) {
      const int sb = start[static_cast<std::size_t>(b) + 1] - start[static_cast<std::size_t>(b)];
      skip_sample(static_cast<std::int64_t>(sa) * sb, params.p_out, rng, [&](std::int64_t t) {
        edges.push_back({start[static_cast<std::size_t>(a)] + static_cast<int>(t / sb),
                         start[static_cast<std::size_t>(b)] + static_cast<int>(t % sb), 1.0});
      });
    }
  }

  Dataset ds;
  ds.name = "sbm-n" + std::to_string(n);
  ds.n = n;
  ds.clusters = c;
  ds.graphs.push_back(std::make_shared<SparseGraph>(SparseGraph::symmetrized(n, edges)));
  ds.attributes.push_back(std::move(features));
  ds.labels = labels;
  ds.original_label_values.resize(static_cast<std::size_t>(c));
  for (int b = 0; b < c; ++b) ds.original_label_values[static_cast<std::size_t>(b)] = b;
  return ds;
}

void write_synth_dataset(const std::filesystem::path& dir, const SbmParams& params) {
  const Dataset ds = make_sbm_dataset(params);
  std::filesystem::create_directories(dir);
  write_matrix_market_graph(dir / "graph0.mtx", *ds.graphs.front());
  write_csv(dir / "features0.csv", *ds.attributes.front());
  write_labels(dir / "labels.txt", *ds.labels);
  std::ofstream man(dir / "manifest.json");
  if (!man) throw std::runtime_error("cannot write manifest in " + dir.string());
  man << "{\n"
      << "  \"n\": " << ds.n << ",\n"
      << "  \"clusters\": " << ds.clusters << ",\n"
      << "  \"graphs\": [\"graph0.mtx\"],\n"
      << "  \"attributes\": [\"features0.csv\"],\n"
      << "  \"labels\": \"labels.txt\"\n"
      << "}\n";
}

}  // namespace cdc
