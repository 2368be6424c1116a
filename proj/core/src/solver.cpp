#include "cdc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cdc/kmeans.hpp"
#include "cdc/rng.hpp"

namespace cdc {

namespace {

constexpr int kInitSampleCap = 2000;

void check_views(const std::vector<FilteredView>& h) {
  if (h.empty()) throw std::invalid_argument("solver: at least one view required");
  for (const FilteredView& v : h)
    if (v.h.rows() != h.front().h.rows())
      throw std::invalid_argument("solver: views disagree on sample count");
}

double sylvester_coeff(const SolverConfig& cfg) {
  return cfg.sylvester_mode == SylvesterMode::derived_alpha ? cfg.alpha : cfg.beta;
}

// R B + coeff B T = C solved in the joint eigenbases; the T eigebasis is
// hoisted out of the iteration loop by fit()
Matrix sylvester_from_eigs(const SymEig& er, const SymEig& et, double coeff, const Matrix& c,
                           Diagnostics* diag) {
  Matrix rhs = er.eigenvectors.transpose() * c * et.eigenvectors;
  int regularized = 0;
  for (Eigen::Index i = 0; i < rhs.rows(); ++i) {
    for (Eigen::Index j = 0; j < rhs.cols(); ++j) {
      double den = er.eigenvalues(i) + coeff * et.eigenvalues(j);
      if (std::abs(den) < 1e-12) {
        den += 1e-10;
        if (rhs(i, j) != 0.0) ++regularized;
      }
      rhs(i, j) /= den;
    }
  }
  if (regularized > 0 && diag)
    diag->push_back("update_B: regularized " + std::to_string(regularized) +
                    " near-singular pencil entries");
  return er.eigenvectors * rhs * et.eigenvectors.transpose();
}

std::vector<Matrix> update_b_impl(const Matrix& z, const std::vector<FilteredView>& h,
                                  const SolverConfig& cfg, const std::vector<SymEig>* t_eig,
                                  Diagnostics* diag) {
  Matrix r = z * z.transpose();
  r = 0.5 * (r + r.transpose());
  const SymEig er = sym_eig(r);
  const double coeff = sylvester_coeff(cfg);

  std::vector<Matrix> b;
  b.reserve(h.size());
  for (std::size_t v = 0; v < h.size(); ++v) {
    const Matrix c = (1.0 + cfg.alpha) * (z * h[v].h);
    if (t_eig) {
      b.push_back(sylvester_from_eigs(er, (*t_eig)[v], coeff, c, diag));
    } else {
      Matrix t = h[v].h.transpose() * h[v].h;
      t = 0.5 * (t + t.transpose());
      b.push_back(sylvester_from_eigs(er, sym_eig(t), coeff, c, diag));
    }
  }
  return b;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("SolverConfig: alpha must be > 0");
  if (!(beta > 0.0)) throw std::invalid_argument("SolverConfig: beta must be > 0");
  if (anchors < 1) throw std::invalid_argument("SolverConfig: anchors must be >= 1");
  if (max_iter < 1) throw std::invalid_argument("SolverConfig: max_iter must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("SolverConfig: tol must be > 0");
}

std::vector<Matrix> init_anchors(const std::vector<FilteredView>& h, int anchors,
                                 std::uint64_t seed) {
  check_views(h);
  const Eigen::Index n = h.front().h.rows();
  if (anchors > n)
    throw std::invalid_argument("init_anchors: more anchors (" + std::to_string(anchors) +
                                ") than samples (" + std::to_string(n) + ")");
  std::vector<Matrix> b;
  b.reserve(h.size());
  for (std::size_t v = 0; v < h.size(); ++v) {
    const Matrix* rows = &h[v].h;
    Matrix sample;
    if (n > kInitSampleCap) {
      // seeded sample without replacement, gathered in index order
      SplitMix64 rng = SplitMix64(seed).fork(static_cast<std::uint64_t>(v) + 1);
      std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
      std::iota(idx.begin(), idx.end(), Eigen::Index{0});
      for (int i = 0; i < kInitSampleCap; ++i) {
        const auto j = i + static_cast<Eigen::Index>(rng.next_below(static_cast<std::uint64_t>(n - i)));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
      }
      idx.resize(kInitSampleCap);
      std::sort(idx.begin(), idx.end());
      sample.resize(kInitSampleCap, h[v].h.cols());
      for (int i = 0; i < kInitSampleCap; ++i) sample.row(i) = h[v].h.row(idx[static_cast<std::size_t>(i)]);
      rows = &sample;
    }
    b.push_back(kmeans(*rows, anchors, seed).centroids);
  }
  return b;
}

Matrix update_Z(const std::vector<Matrix>& b, const std::vector<FilteredView>& h,
                const Vector& lambda, const SolverConfig& cfg) {
  check_views(h);
  const Eigen::Index m = b.front().rows();
  Matrix lhs = cfg.beta * Matrix::Identity(m, m);
  Matrix rhs = Matrix::Zero(m, h.front().h.rows());
  for (std::size_t v = 0; v < h.size(); ++v) {
    const double w = lambda(static_cast<Eigen::Index>(v)) * lambda(static_cast<Eigen::Index>(v));
    lhs.noalias() += w * (b[v] * b[v].transpose());
    lhs.diagonal().array() += w * cfg.alpha;
    rhs.noalias() += w * (b[v] * h[v].h.transpose());
  }
  return (1.0 + cfg.alpha) * solve_spd(0.5 * (lhs + lhs.transpose()), rhs);
}

std::vector<Matrix> update_B(const Matrix& z, const std::vector<FilteredView>& h,
                             const SolverConfig& cfg, Diagnostics* diag) {
  check_views(h);
  return update_b_impl(z, h, cfg, nullptr, diag);
}

Vector view_losses(const Matrix& z, const std::vector<Matrix>& b,
                   const std::vector<FilteredView>& h, const SolverConfig& cfg) {
  Vector m_v(static_cast<Eigen::Index>(h.size()));
  for (std::size_t v = 0; v < h.size(); ++v) {
    const double se = (h[v].h.transpose() - b[v].transpose() * z).squaredNorm();
    const double bg = (b[v] * h[v].h.transpose() - z).squaredNorm();
    m_v(static_cast<Eigen::Index>(v)) = se + cfg.alpha * bg;
  }
  return m_v;
}

Vector update_lambda(const Vector& m_v, Diagnostics* diag) {
  constexpr double kZero = 1e-15;
  const Eigen::Index v = m_v.size();
  if (v == 0) throw std::invalid_argument("update_lambda: empty loss vector");
  Vector lambda = Vector::Zero(v);
  const auto zero_count = (m_v.array() <= kZero).count();
  if (zero_count > 0) {
    // limit of lambda_v ~ 1/M_v: perfectly-fit views share all the weight
    for (Eigen::Index i = 0; i < v; ++i)
      if (m_v(i) <= kZero) lambda(i) = 1.0 / static_cast<double>(zero_count);
    if (diag)
      diag->push_back("update_lambda: " + std::to_string(zero_count) +
                      " view(s) with vanishing loss take all the weight");
    return lambda;
  }
  lambda = m_v.cwiseInverse();
  return lambda / lambda.sum();
}

double objective(const Matrix& z, const std::vector<Matrix>& b,
                 const std::vector<FilteredView>& h, const Vector& lambda,
                 const SolverConfig& cfg) {
  const Vector m_v = view_losses(z, b, h, cfg);
  return lambda.array().square().matrix().dot(m_v) + cfg.beta * z.squaredNorm();
}

SolverWorkspace prepare_workspace(const std::vector<FilteredView>& h) {
  check_views(h);
  SolverWorkspace ws;
  ws.t_eig.reserve(h.size());
  for (const FilteredView& v : h) {
    Matrix t = v.h.transpose() * v.h;
    t = 0.5 * (t + t.transpose());
    ws.t_eig.push_back(sym_eig(t));
  }
  return ws;
}

AnchorModel fit(const std::vector<FilteredView>& h, const SolverConfig& cfg,
                std::vector<Matrix> initial_b, const SolverWorkspace* ws) {
  cfg.validate();
  check_views(h);
  const auto views = h.size();

  AnchorModel model;
  model.b = initial_b.empty() ? init_anchors(h, cfg.anchors, cfg.seed) : std::move(initial_b);
  if (model.b.size() != views) throw std::invalid_argument("fit: initial anchors/view count mismatch");
  model.lambda = Vector::Constant(static_cast<Eigen::Index>(views), 1.0 / static_cast<double>(views));

  // T^v = H^v^T H^v never changes across iterations; decompose once
  SolverWorkspace local;
  if (!ws) {
    local = prepare_workspace(h);
    ws = &local;
  } else if (ws->t_eig.size() != views) {
    throw std::invalid_argument("fit: workspace/view count mismatch");
  }
  const std::vector<SymEig>& t_eig = ws->t_eig;

  const auto check_finite = [&](const char* step, int iter, bool ok) {
    if (!ok)
      throw std::runtime_error("fit: non-finite values after " + std::string(step) +
                               " at iteration " + std::to_string(iter + 1));
  };

  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    model.z = update_Z(model.b, h, model.lambda, cfg);
    check_finite("update_Z", iter, model.z.allFinite());

    model.b = update_b_impl(model.z, h, cfg, &t_eig, &model.diagnostics);
    for (const Matrix& bv : model.b) check_finite("update_B", iter, bv.allFinite());

    const Vector m_v = view_losses(model.z, model.b, h, cfg);
    model.lambda = update_lambda(m_v, &model.diagnostics);
    check_finite("update_lambda", iter, model.lambda.allFinite());

    const double obj = model.lambda.array().square().matrix().dot(m_v) + cfg.beta * model.z.squaredNorm();
    model.objective_trace.push_back(obj);
    model.iterations_run = iter + 1;
    if (iter > 0) {
      const double prev = model.objective_trace[static_cast<std::size_t>(iter - 1)];
      if (std::abs(prev - obj) / std::max(1.0, prev) < cfg.tol) {
        model.converged = true;
        break;
      }
    }
  }
  return model;
}

}  // namespace cdc
