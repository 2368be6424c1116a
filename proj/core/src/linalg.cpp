#include "cdc/linalg.hpp"

#include <cmath>
#include <stdexcept>

#ifdef CDC_HAVE_LAPACKE
#include <lapacke.h>
#endif

namespace cdc {

Matrix spmm(const SparseGraph& g, const Matrix& x) {
  if (g.n() != x.rows())
    throw std::invalid_argument("spmm: graph has " + std::to_string(g.n()) + " nodes but matrix has " +
                                std::to_string(x.rows()) + " rows");
  Matrix y = Matrix::Zero(x.rows(), x.cols());
  const auto row_ptr = g.row_ptr();
  const auto cols = g.cols();
  const auto vals = g.values();
  for (int i = 0; i < g.n(); ++i) {
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      y.row(i) += vals[k] * x.row(cols[k]);
    }
  }
  return y;
}

SymEig sym_eig(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("sym_eig: matrix not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument("sym_eig: matrix not symmetric within 1e-10");

  const int n = static_cast<int>(m.rows());
  SymEig out;
#ifdef CDC_HAVE_LAPACKE
  Matrix a = m;  // dsyevd overwrites with eigenvectors (ascending order)
  Vector w(n);
  const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, w.data());
  if (info != 0) throw std::runtime_error("sym_eig: dsyevd failed, info=" + std::to_string(info));
  out.eigenvalues = w.reverse();
  out.eigenvectors = a.rowwise().reverse();
#else
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) throw std::runtime_error("sym_eig: eigensolver failed");
  out.eigenvalues = es.eigenvalues().reverse();
  out.eigenvectors = es.eigenvectors().rowwise().reverse();
#endif
  return out;
}

Matrix solve_spd(const Matrix& m, const Matrix& rhs) {
  if (m.rows() != m.cols() || m.rows() != rhs.rows())
    throw std::invalid_argument("solve_spd: dimension mismatch");
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("solve_spd: matrix is not positive definite");
  return llt.solve(rhs);
}

Matrix solve_sylvester_spd(const Matrix& r, const Matrix& t, double coeff, const Matrix& c,
                           Diagnostics* diag) {
  if (r.rows() != c.rows() || t.rows() != c.cols())
    throw std::invalid_argument("solve_sylvester_spd: dimension mismatch");
  if (!(coeff > 0.0)) throw std::invalid_argument("solve_sylvester_spd: coeff must be positive");

  const SymEig er = sym_eig(r);
  const SymEig et = sym_eig(t);
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
    diag->push_back("solve_sylvester_spd: regularized " + std::to_string(regularized) +
                    " near-singular pencil entries");
  return er.eigenvectors * rhs * et.eigenvectors.transpose();
}

SvdWide svd_wide(const Matrix& z, int rank, Diagnostics* diag) {
  const int m = static_cast<int>(z.rows());
  const int n = static_cast<int>(z.cols());
  if (rank > m || m > n)
    throw std::invalid_argument("svd_wide: need rank <= rows <= cols");

  Matrix gram = z * z.transpose();
  gram = 0.5 * (gram + gram.transpose());  // exact symmetry for sym_eig
  const SymEig eig = sym_eig(gram);

  Vector sigma = eig.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  const double cutoff = 1e-10 * std::max(sigma(0), 0.0);
  int r = 0;
  while (r < rank && sigma(r) > cutoff) ++r;
  if (r < rank && diag)
    diag->push_back("svd_wide: rank reduced from " + std::to_string(rank) + " to " +
                    std::to_string(r));

  SvdWide out;
  out.left = eig.eigenvectors.leftCols(r);
  out.singular_values = sigma.head(r);
  out.right = z.transpose() * (out.left * out.singular_values.cwiseInverse().asDiagonal());
  return out;
}

}  // namespace cdc
