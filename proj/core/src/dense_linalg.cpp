#include "pcapp/dense_linalg.hpp"

#include "pcapp/errors.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace pcapp {

namespace {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw InvalidInput(std::string(what) + ": non-finite entries");
  }
}

// dsyevr over eigenvalue indices [first, last] (1-based, ascending order in
// LAPACK's convention). Returns pairs reordered to descending.
EigenDecomposition syevr(const Matrix& a, lapack_int first, lapack_int last) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  const lapack_int count = last - first + 1;
  Matrix work = a;
  Vector w(n);
  Matrix z(n, count);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(std::max<lapack_int>(count, 1)));
  lapack_int found = 0;
  const bool all = (first == 1 && last == n);
  const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', all ? 'A' : 'I', 'L', n,
                                         work.data(), n, 0.0, 0.0, first, last, 0.0, &found,
                                         w.data(), z.data(), n, support.data());
  if (info != 0 || found != count) {
    throw DegenerateCovariance("symmetric eigensolver failed (dsyevr info=" +
                               std::to_string(info) + ")");
  }
  EigenDecomposition out;
  out.values = w.head(count).reverse();
  out.vectors = z.rowwise().reverse();
  normalize_column_signs(out.vectors);
  return out;
}

}  // namespace

SymmetricMatrix::SymmetricMatrix(Matrix entries) {
  if (entries.rows() != entries.cols()) {
    throw InvalidInput("SymmetricMatrix: matrix is not square");
  }
  require_finite(entries, "SymmetricMatrix");
  entries_ = 0.5 * (entries + entries.transpose());
}

SymmetricMatrix SymmetricMatrix::from_symmetric(Matrix entries) {
  if (entries.rows() != entries.cols()) {
    throw InvalidInput("SymmetricMatrix: matrix is not square");
  }
  require_finite(entries, "SymmetricMatrix");
  SymmetricMatrix out;
  out.entries_ = std::move(entries);
  return out;
}

void normalize_column_signs(Matrix& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    Eigen::Index pivot = 0;
    vectors.col(j).cwiseAbs().maxCoeff(&pivot);
    if (vectors(pivot, j) < 0.0) vectors.col(j) *= -1.0;
  }
}

RightSingularPairs right_singular_pairs(const Matrix& m) {
  require_finite(m, "right_singular_pairs");
  const lapack_int rows = static_cast<lapack_int>(m.rows());
  const lapack_int cols = static_cast<lapack_int>(m.cols());
  const lapack_int r = std::min(rows, cols);
  RightSingularPairs out;
  if (r == 0) return out;
  Matrix work = m;
  out.values.resize(r);
  Matrix u(rows, r);
  Matrix vt(r, cols);
  const lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'S', rows, cols, work.data(), rows,
                                         out.values.data(), u.data(), rows, vt.data(), r);
  if (info != 0) {
    throw DegenerateCovariance("singular value decomposition failed (dgesdd info=" +
                               std::to_string(info) + ")");
  }
  out.vectors = vt.transpose();
  return out;
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == m.cols() && m.isApprox(m.transpose(), 0.0)) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

EigenDecomposition sym_eig(const SymmetricMatrix& m) {
  if (m.dim() == 0) throw InvalidInput("sym_eig: empty matrix");
  require_finite(m.matrix(), "sym_eig");
  const auto n = static_cast<lapack_int>(m.dim());
  return syevr(m.matrix(), 1, n);
}

EigenDecomposition sym_eig_top(const SymmetricMatrix& m, Eigen::Index count) {
  if (count < 1 || count > m.dim()) {
    throw InvalidInput("sym_eig_top: count " + std::to_string(count) + " outside [1, " +
                       std::to_string(m.dim()) + "]");
  }
  require_finite(m.matrix(), "sym_eig_top");
  const auto n = static_cast<lapack_int>(m.dim());
  return syevr(m.matrix(), n - static_cast<lapack_int>(count) + 1, n);
}

SymmetricMatrix truncate_rank(const SymmetricMatrix& m, Eigen::Index s) {
  if (s < 1 || s > m.dim()) {
    throw InvalidInput("truncate_rank: rank " + std::to_string(s) + " outside [1, " +
                       std::to_string(m.dim()) + "]");
  }
  if (s == m.dim()) return m;
  const EigenDecomposition top = sym_eig_top(m, s);
  Matrix approx = top.vectors * top.values.asDiagonal() * top.vectors.transpose();
  return SymmetricMatrix(std::move(approx));
}

GeneralizedEigenResult generalized_eig_from_spectrum(const EigenDecomposition& s_top,
                                                     const PencilProjector& project,
                                                     Eigen::Index s_rank,
                                                     double eps_rel) {
  if (s_rank < 1 || s_rank > s_top.values.size()) {
    throw InvalidInput("generalized_eig: truncation rank " + std::to_string(s_rank) +
                       " outside [1, " + std::to_string(s_top.values.size()) + "]");
  }
  if (!(eps_rel >= 0.0) || !std::isfinite(eps_rel)) {
    throw InvalidInput("generalized_eig: eps_rel must be a finite nonnegative number");
  }
  const double lambda_max = s_top.values(0);
  if (!(lambda_max > 0.0)) {
    throw DegenerateCovariance("generalized_eig: covariance has no positive variance");
  }
  const double eps = eps_rel * lambda_max;

  // Values are descending, so the positive ones form a prefix.
  Eigen::Index retained = 0;
  while (retained < s_rank && s_top.values(retained) > 0.0) ++retained;

  const Vector scale =
      (s_top.values.head(retained).array() + eps).rsqrt().matrix();
  const Matrix whitening = s_top.vectors.leftCols(retained) * scale.asDiagonal();

  Matrix projected = project(whitening);
  if (projected.rows() != retained || projected.cols() != retained) {
    throw InvalidInput("generalized_eig: projector returned a matrix of the wrong shape");
  }
  projected = 0.5 * (projected + projected.transpose()).eval();
  const EigenDecomposition inner = sym_eig(SymmetricMatrix::from_symmetric(std::move(projected)));

  GeneralizedEigenResult out;
  out.values = inner.values;
  out.vectors = whitening * inner.vectors;
  normalize_column_signs(out.vectors);
  out.eps_used = eps;
  out.truncation_rank = s_rank;
  out.retained = retained;
  return out;
}

GeneralizedEigenResult generalized_eig(const SymmetricMatrix& s_plus, const SymmetricMatrix& s,
                                       Eigen::Index s_rank, double eps_rel) {
  if (s_plus.dim() != s.dim()) {
    throw InvalidInput("generalized_eig: dimension mismatch (" + std::to_string(s_plus.dim()) +
                       " vs " + std::to_string(s.dim()) + ")");
  }
  if (s_rank < 1 || s_rank > s.dim()) {
    throw InvalidInput("generalized_eig: truncation rank " + std::to_string(s_rank) +
                       " outside [1, " + std::to_string(s.dim()) + "]");
  }
  const EigenDecomposition top = s_rank == s.dim() ? sym_eig(s) : sym_eig_top(s, s_rank);
  const Matrix& numerator = s_plus.matrix();
  return generalized_eig_from_spectrum(
      top, [&numerator](const Matrix& r) -> Matrix { return r.transpose() * numerator * r; },
      s_rank, eps_rel);
}

}  // namespace pcapp
