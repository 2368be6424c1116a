#pragma once

#include <cstdint>
#include <filesystem>

#include "cdc/dataset.hpp"

namespace cdc {

/// Stochastic block model with c balanced blocks plus Gaussian features
/// whose per-block means separate the communities.
struct SbmParams {
  int n = 300;
  int clusters = 3;
  double p_in = 0.2;
  double p_out = 0.01;
  int dim = 16;
  double mean_scale = 1.0;  // block mean entries ~ mean_scale * N(0,1)
  std::uint64_t seed = 0;

  void validate() const;  // 0 <= p_out < p_in <= 1, n >= clusters >= 1, dim >= 1
};

/// Generates the dataset in memory. Edge sampling skips over non-edges
/// geometrically, so the cost is O(n + edges + n*dim) rather than O(n^2).
/// Blocks are contiguous index ranges; labels are the block ids.
Dataset make_sbm_dataset(const SbmParams& params);

/// Writes manifest.json, graph0.mtx, features0.csv and labels.txt into dir.
void write_synth_dataset(const std::filesystem::path& dir, const SbmParams& params);

}  // namespace cdc
