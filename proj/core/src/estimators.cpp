#include "pcapp/estimators.hpp"

#include "pcapp/errors.hpp"
#include "pcapp/subspace_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace pcapp {

namespace {

void require_data(const Matrix& x, const char* what) {
  if (x.rows() < 1 || x.cols() < 1) {
    throw InvalidInput(std::string(what) + ": empty data matrix");
  }
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  require_data(a, what);
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidInput(std::string(what) + ": shape mismatch (" + std::to_string(a.rows()) +
                       "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                       "x" + std::to_string(b.cols()) + ")");
  }
}

void require_k(int k, Eigen::Index d, const char* what) {
  if (k < 1 || k > d) {
    throw InvalidInput(std::string(what) + ": k = " + std::to_string(k) + " outside [1, " +
                       std::to_string(d) + "]");
  }
}

// Below this fraction of the leading eigenvalue a Gram eigenvalue is
// treated as numerically zero.
constexpr double kGramRankTol = 1e-12;

// Leading eigenpairs of X'X/n obtained from the n x n Gram matrix XX'/n.
// Columns for nonpositive Gram eigenvalues are left at zero.
EigenDecomposition spectrum_via_gram(const Matrix& x, Eigen::Index count) {
  const double n = static_cast<double>(x.rows());
  Matrix gram = Matrix::Zero(x.rows(), x.rows());
  gram.selfadjointView<Eigen::Lower>().rankUpdate(x, 1.0 / n);
  gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
  const EigenDecomposition g = sym_eig_top(SymmetricMatrix::from_symmetric(std::move(gram)), count);

  EigenDecomposition out;
  out.values = g.values;
  out.vectors = Matrix::Zero(x.cols(), count);
  for (Eigen::Index j = 0; j < count; ++j) {
    const double mu = g.values(j);
    if (!(mu > 0.0)) continue;
    out.vectors.col(j) = x.transpose() * g.vectors.col(j) / std::sqrt(n * mu);
    out.vectors.col(j).normalize();
  }
  normalize_column_signs(out.vectors);
  return out;
}

bool gram_rank_ok(const Vector& values, Eigen::Index count) {
  return values(0) > 0.0 && values(count - 1) > kGramRankTol * values(0);
}

SubspaceEstimate orthonormal_estimate(Matrix basis, std::string name, const Vector& values) {
  SubspaceEstimate out;
  out.basis = std::move(basis);
  out.constraint_tag = ConstraintTag::orthonormal;
  out.method_name = std::move(name);
  for (Eigen::Index j = 0; j < values.size(); ++j) {
    out.diagnostics["eigenvalue_" + std::to_string(j + 1)] = values(j);
  }
  return out;
}

// Whitening map for a covariance: V_r diag((lambda + eps)^{-1/2}) over the
// numerically nonzero spectrum.
// Whitening taken from the SVD of the data rather than of X'X / n, so the
// numerical null space is resolved at eps * sigma_1 instead of eps * sigma_1^2.
Matrix regularized_whitening(const Matrix& x, double eps_rel) {
  const RightSingularPairs svd = right_singular_pairs(x);
  const Vector& sigma = svd.values;
  if (sigma.size() == 0 || !(sigma(0) > 0.0)) {
    throw DegenerateCovariance("cca: view covariance has no positive variance");
  }
  const double n = static_cast<double>(x.rows());
  const double rank_tol = static_cast<double>(std::max(x.rows(), x.cols())) *
                          std::numeric_limits<double>::epsilon() * sigma(0);
  Eigen::Index r = 0;
  while (r < sigma.size() && sigma(r) > rank_tol) ++r;
  const Vector variances = sigma.head(r).array().square() / n;
  const double eps = eps_rel * variances(0);
  const Vector scale = (variances.array() + eps).rsqrt().matrix();
  return svd.vectors.leftCols(r) * scale.asDiagonal();
}

// Columns scaled to unit mean square; all-zero columns stay zero.
Matrix unit_scaled_columns(const Matrix& x) {
  Matrix out = x;
  const double n = static_cast<double>(x.rows());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double rms = x.col(j).norm() / std::sqrt(n);
    if (rms > 0.0) out.col(j) /= rms;
  }
  return out;
}

struct CanonicalPairs {
  Matrix weights;  // X-side, d x k
  Vector correlations;
};

CanonicalPairs canonical_pairs(const Matrix& x, const Matrix& x_plus, int k, double eps_rel) {
  const Matrix wx = regularized_whitening(x, eps_rel);
  const Matrix wy = regularized_whitening(x_plus, eps_rel);
  if (wx.cols() < k || wy.cols() < k) {
    throw DegenerateCovariance("cca_top_k: a view has rank below k after regularization");
  }
  const Matrix kernel =
      ((x * wx).transpose() * (x_plus * wy)) / static_cast<double>(x.rows());
  Eigen::BDCSVD<Matrix> svd(kernel, Eigen::ComputeThinU);
  return {wx * svd.matrixU().leftCols(k), svd.singularValues().head(k)};
}

// The k eigenpairs of largest |value|, in that order.
EigenDecomposition largest_by_magnitude(const EigenDecomposition& e, Eigen::Index k) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(e.values.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(e.values(a)) > std::abs(e.values(b));
  });
  EigenDecomposition out;
  out.values.resize(k);
  out.vectors.resize(e.vectors.rows(), k);
  for (Eigen::Index j = 0; j < k; ++j) {
    out.values(j) = e.values(order[j]);
    out.vectors.col(j) = e.vectors.col(order[j]);
  }
  return out;
}

}  // namespace

SymmetricMatrix sample_cov(const Matrix& x) {
  require_data(x, "sample_cov");
  if (!x.allFinite()) throw InvalidInput("sample_cov: non-finite entries");
  Matrix s = Matrix::Zero(x.cols(), x.cols());
  s.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose(), 1.0 / static_cast<double>(x.rows()));
  s.triangularView<Eigen::StrictlyUpper>() = s.transpose();
  return SymmetricMatrix::from_symmetric(std::move(s));
}

SymmetricMatrix contrastive_cov(const Matrix& x, const Matrix& x_plus) {
  require_same_shape(x, x_plus, "contrastive_cov");
  const Matrix cross = (x.transpose() * x_plus) / static_cast<double>(x.rows());
  // a + b == b + a in floating point, so this is exactly symmetric.
  Matrix sym = 0.5 * (cross + cross.transpose());
  return SymmetricMatrix::from_symmetric(std::move(sym));
}

int default_truncation_rank(int d, int k) {
  const int tenth = static_cast<int>(std::ceil(0.1 * d));
  return std::min(d, std::max(2 * k, tenth));
}

SubspaceEstimate pca(const SymmetricMatrix& s, int k) {
  require_k(k, s.dim(), "pca");
  const EigenDecomposition top = sym_eig_top(s, k);
  return orthonormal_estimate(top.vectors, "pca", top.values);
}

SubspaceEstimate pca(const Matrix& x, int k, Route route) {
  require_data(x, "pca");
  require_k(k, x.cols(), "pca");
  const bool wide = x.cols() > x.rows() && k <= x.rows();
  if (route == Route::factored || (route == Route::automatic && wide)) {
    if (k > x.rows()) throw InvalidInput("pca: factored route needs k <= n");
    const EigenDecomposition top = spectrum_via_gram(x, k);
    if (gram_rank_ok(top.values, k)) return orthonormal_estimate(top.vectors, "pca", top.values);
    if (route == Route::factored) {
      throw DegenerateCovariance("pca: sample covariance rank below k on the factored route");
    }
  }
  return pca(sample_cov(x), k);
}

std::string_view to_string(EigenOrdering ordering) {
  return ordering == EigenOrdering::magnitude ? "magnitude" : "signed";
}

EigenOrdering parse_eigen_ordering(std::string_view text) {
  if (text == "signed") return EigenOrdering::signed_value;
  if (text == "magnitude") return EigenOrdering::magnitude;
  throw InvalidInput("unknown eigenvalue ordering '" + std::string(text) +
                     "' (expected signed or magnitude)");
}

SubspaceEstimate pca_plus(const Matrix& x, const Matrix& x_plus, int k, Route route,
                          EigenOrdering ordering) {
  require_same_shape(x, x_plus, "pca_plus");
  require_k(k, x.cols(), "pca_plus");
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();

  const bool wide = d > 2 * n;
  if (route == Route::factored || (route == Route::automatic && wide)) {
    // S+ = Y' J Y / (2n) with Y = [X; X+] and J the block swap, so its
    // nonzero spectrum lives in the row space of Y. Build an orthonormal
    // basis Q = Y' P D^{-1/2} of that space from the Gram matrix G = Y Y'.
    Matrix gram(2 * n, 2 * n);
    gram.topLeftCorner(n, n) = x * x.transpose();
    gram.topRightCorner(n, n) = x * x_plus.transpose();
    gram.bottomLeftCorner(n, n) = gram.topRightCorner(n, n).transpose();
    gram.bottomRightCorner(n, n) = x_plus * x_plus.transpose();
    gram = 0.5 * (gram + gram.transpose()).eval();
    const EigenDecomposition g = sym_eig(SymmetricMatrix::from_symmetric(gram));

    Eigen::Index r = 0;
    const double tol = kGramRankTol * g.values(0);
    while (r < g.values.size() && g.values(r) > tol) ++r;

    if (r >= k) {
      const Matrix coeff = g.vectors.leftCols(r) *
                           g.values.head(r).array().rsqrt().matrix().asDiagonal();
      // X Q and X+ Q come straight out of the Gram blocks.
      const Matrix xq = gram.topRows(n) * coeff;
      const Matrix xpq = gram.bottomRows(n) * coeff;
      const Matrix cross = xq.transpose() * xpq / static_cast<double>(n);
      Matrix inner = 0.5 * (cross + cross.transpose());
      const SymmetricMatrix inner_sym = SymmetricMatrix::from_symmetric(std::move(inner));
      // Outside span(Y) the spectrum is zero, which never outranks a nonzero
      // eigenvalue by magnitude.
      const EigenDecomposition t = ordering == EigenOrdering::magnitude
                                       ? largest_by_magnitude(sym_eig(inner_sym), k)
                                       : sym_eig_top(inner_sym, k);
      // Under signed ranking, fewer than k positive eigenvalues would let the
      // zero eigenspace outside span(Y) outrank them; defer to the dense route.
      if (ordering == EigenOrdering::magnitude || t.values(k - 1) >= 0.0 || r == d) {
        Matrix basis = x.transpose() * coeff.topRows(n) * t.vectors +
                       x_plus.transpose() * coeff.bottomRows(n) * t.vectors;
        basis.colwise().normalize();
        normalize_column_signs(basis);
        SubspaceEstimate out = orthonormal_estimate(std::move(basis), "pca_plus", t.values);
        return out;
      }
    }
    if (route == Route::factored) {
      throw DegenerateCovariance("pca_plus: factored route cannot resolve the top-k eigenspace");
    }
  }
  const SymmetricMatrix s_plus = contrastive_cov(x, x_plus);
  const EigenDecomposition top = ordering == EigenOrdering::magnitude
                                     ? largest_by_magnitude(sym_eig(s_plus), k)
                                     : sym_eig_top(s_plus, k);
  return orthonormal_estimate(top.vectors, "pca_plus", top.values);
}

SubspaceEstimate pca_plus_plus(const Matrix& x, const Matrix& x_plus, int k, int s,
                               double eps_rel, Route route) {
  require_same_shape(x, x_plus, "pca_plus_plus");
  require_k(k, x.cols(), "pca_plus_plus");
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  if (s < k) {
    throw InvalidTruncation("pca_plus_plus: truncation rank s = " + std::to_string(s) +
                            " is below k = " + std::to_string(k));
  }
  if (s > d) {
    throw InvalidInput("pca_plus_plus: truncation rank s = " + std::to_string(s) +
                       " exceeds d = " + std::to_string(d));
  }

  const bool use_gram = route == Route::factored || (route == Route::automatic && d > n && s <= n);
  EigenDecomposition spectrum;
  if (use_gram) {
    if (s > n) throw InvalidInput("pca_plus_plus: factored route needs s <= n");
    spectrum = spectrum_via_gram(x, s);
    // Numerically-zero Gram eigenvalues are exact zeros of S_n's spectrum.
    for (Eigen::Index j = 0; j < s; ++j) {
      if (!(spectrum.values(j) > kGramRankTol * spectrum.values(0))) spectrum.values(j) = 0.0;
    }
  } else {
    const SymmetricMatrix cov = sample_cov(x);
    spectrum = s == d ? sym_eig(cov) : sym_eig_top(cov, s);
  }

  const double inv_n = 1.0 / static_cast<double>(n);
  const GeneralizedEigenResult gen = generalized_eig_from_spectrum(
      spectrum,
      [&](const Matrix& r) -> Matrix {
        const Matrix xr = x * r;
        const Matrix xpr = x_plus * r;
        return (xr.transpose() * xpr) * inv_n;
      },
      s, eps_rel);
  if (gen.retained < k) {
    throw DegenerateCovariance("pca_plus_plus: only " + std::to_string(gen.retained) +
                               " usable directions for k = " + std::to_string(k));
  }

  SubspaceEstimate out;
  out.basis = gen.vectors.leftCols(k);
  out.constraint_tag = ConstraintTag::s_orthonormal;
  out.method_name = "pca_plus_plus";
  for (int j = 0; j < k; ++j) {
    out.diagnostics["eigenvalue_" + std::to_string(j + 1)] = gen.values(j);
  }
  out.diagnostics["eps_used"] = gen.eps_used;
  out.diagnostics["retained"] = static_cast<double>(gen.retained);
  out.diagnostics["truncation_rank"] = static_cast<double>(s);
  return out;
}

ForegroundBackground synthesize_fg_bg(const Matrix& x, const Matrix& x_plus) {
  require_same_shape(x, x_plus, "synthesize_fg_bg");
  return {0.5 * (x + x_plus), 0.5 * (x - x_plus)};
}

SubspaceEstimate cpca(const Matrix& x_f, const Matrix& x_b, double alpha, int k) {
  require_same_shape(x_f, x_b, "cpca");
  require_k(k, x_f.cols(), "cpca");
  if (!std::isfinite(alpha)) throw InvalidInput("cpca: alpha must be finite");
  Matrix diff = sample_cov(x_f).matrix();
  if (alpha != 0.0) diff -= alpha * sample_cov(x_b).matrix();
  const EigenDecomposition top = sym_eig_top(SymmetricMatrix::from_symmetric(std::move(diff)), k);
  return orthonormal_estimate(top.vectors, "cpca", top.values);
}

SubspaceEstimate cpca_pp(const Matrix& x_f, const Matrix& x_b, int k, int s, double eps_rel) {
  require_same_shape(x_f, x_b, "cpca_pp");
  require_k(k, x_f.cols(), "cpca_pp");
  if (s < k) {
    throw InvalidTruncation("cpca_pp: truncation rank s = " + std::to_string(s) +
                            " is below k = " + std::to_string(k));
  }
  const GeneralizedEigenResult gen = generalized_eig(sample_cov(x_f), sample_cov(x_b), s, eps_rel);
  if (gen.retained < k) {
    throw DegenerateCovariance("cpca_pp: only " + std::to_string(gen.retained) +
                               " usable directions for k = " + std::to_string(k));
  }
  SubspaceEstimate out;
  out.basis = gen.vectors.leftCols(k);
  out.constraint_tag = ConstraintTag::s_orthonormal;
  out.method_name = "cpca_pp";
  for (int j = 0; j < k; ++j) {
    out.diagnostics["eigenvalue_" + std::to_string(j + 1)] = gen.values(j);
  }
  out.diagnostics["eps_used"] = gen.eps_used;
  return out;
}

SubspaceEstimate cca_top_k(const Matrix& x, const Matrix& x_plus, int k, double eps_rel,
                           bool standardize) {
  require_same_shape(x, x_plus, "cca_top_k");
  require_k(k, x.cols(), "cca_top_k");
  if (!(eps_rel >= 0.0) || !std::isfinite(eps_rel)) {
    throw InvalidInput("cca_top_k: eps_rel must be a finite nonnegative number");
  }
  if (!x.allFinite() || !x_plus.allFinite()) throw InvalidInput("cca_top_k: non-finite entries");
  const CanonicalPairs pairs =
      standardize ? canonical_pairs(unit_scaled_columns(x), unit_scaled_columns(x_plus), k, eps_rel)
                  : canonical_pairs(x, x_plus, k, eps_rel);
  SubspaceEstimate out;
  out.basis = orthonormalize(pairs.weights, 0.0);
  out.constraint_tag = ConstraintTag::orthonormal;
  out.method_name = "cca";
  for (int j = 0; j < k; ++j) {
    out.diagnostics["correlation_" + std::to_string(j + 1)] = pairs.correlations(j);
  }
  return out;
}

}  // namespace pcapp
