#include "cdc/filter.hpp"

#include <stdexcept>

namespace cdc {

FilteredView graph_filter(const SparseGraph& a, const Matrix& x, int k) {
  if (k < 0) throw std::invalid_argument("graph_filter: negative filter order");
  if (a.n() != x.rows())
    throw std::invalid_argument("graph_filter: graph/feature size mismatch");
  FilteredView fv;
  fv.k = k;
  fv.h = x;
  for (int step = 0; step < k; ++step) fv.h = 0.5 * (spmm(a, fv.h) + fv.h);
  return fv;
}

std::vector<FilteredView> filter_all(const ViewSet& vs, int k) {
  std::vector<FilteredView> out;
  out.reserve(vs.views.size());
  for (int v = 0; v < vs.count(); ++v) {
    const View& view = vs.views[static_cast<std::size_t>(v)];
    FilteredView fv = graph_filter(*view.graph, *view.features, k);
    fv.source_view = v;
    out.push_back(std::move(fv));
  }
  return out;
}

}  // namespace cdc
