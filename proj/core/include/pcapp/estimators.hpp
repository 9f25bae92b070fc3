#pragma once

#include "pcapp/dense_linalg.hpp"

#include <map>
#include <string>
#include <string_view>
#include <utility>

namespace pcapp {

enum class ConstraintTag {
  orthonormal,    ///< basis' basis = I
  s_orthonormal,  ///< basis' (S_n)_s basis = I
};

struct SubspaceEstimate {
  Matrix basis;  ///< d x k
  ConstraintTag constraint_tag = ConstraintTag::orthonormal;
  std::string method_name;
  std::map<std::string, double> diagnostics;
};

/// How covariance spectra are obtained.
///
/// `dense` forms d x d covariances. `factored` works through n x n (or
/// 2n x 2n) Gram matrices of the data, which is much cheaper when d >> n.
/// Both routes compute the same subspace; `automatic` picks by shape.
enum class Route { automatic, dense, factored };

/// (1/n) X' X. Throws InvalidInput on empty input.
SymmetricMatrix sample_cov(const Matrix& x);

/// (X' X+ + X+' X) / (2n); symmetric but not necessarily PSD.
SymmetricMatrix contrastive_cov(const Matrix& x, const Matrix& x_plus);

/// Top-k eigenvectors of S.
SubspaceEstimate pca(const SymmetricMatrix& s, int k);

/// Standard PCA on the rows of X.
SubspaceEstimate pca(const Matrix& x, int k, Route route = Route::automatic);

/// How pca_plus ranks eigenvectors of the indefinite contrastive covariance.
/// `magnitude` ranks by |eigenvalue|, which lets large negative eigenvalues
/// from background cross terms enter the top k.
enum class EigenOrdering { signed_value, magnitude };

std::string_view to_string(EigenOrdering ordering);
EigenOrdering parse_eigen_ordering(std::string_view text);

/// Alignment-only contrastive PCA: top-k eigenvectors of the contrastive
/// covariance, ranked by signed eigenvalue unless `ordering` says otherwise.
/// Diagnostics list the selected eigenvalues in ranking order.
SubspaceEstimate pca_plus(const Matrix& x, const Matrix& x_plus, int k,
                          Route route = Route::automatic,
                          EigenOrdering ordering = EigenOrdering::signed_value);

/// Hard-uniformity contrastive PCA: maximize tr(V' S+ V) subject to
/// V' (S_n)_s V = I. Solved as a generalized eigenproblem; the basis holds
/// the generalized eigenvectors of the k largest eigenvalues.
///
/// Throws InvalidTruncation when s < k.
SubspaceEstimate pca_plus_plus(const Matrix& x, const Matrix& x_plus, int k, int s,
                               double eps_rel = 1e-10, Route route = Route::automatic);

/// Library default truncation rank: min(d, max(2k, ceil(0.1 d))).
int default_truncation_rank(int d, int k);

struct ForegroundBackground {
  Matrix foreground;  ///< (X + X+) / 2
  Matrix background;  ///< (X - X+) / 2
};

ForegroundBackground synthesize_fg_bg(const Matrix& x, const Matrix& x_plus);

/// PCA on cov(X_f) - alpha cov(X_b), signed ordering.
SubspaceEstimate cpca(const Matrix& x_f, const Matrix& x_b, double alpha, int k);

/// Generalized eigenvectors of (cov(X_f), truncate_rank(cov(X_b), s)).
SubspaceEstimate cpca_pp(const Matrix& x_f, const Matrix& x_b, int k, int s,
                         double eps_rel = 1e-10);

/// Two-view CCA. Each view's covariance is whitened with the relative
/// regularizer; the returned basis is the orthonormalized X-side projection.
/// Diagnostics carry the top-k canonical correlations.
///
/// With `standardize`, every feature of each view is first scaled to unit
/// second moment (all-zero features are left alone) and the basis is reported
/// in those standardized coordinates. Canonical weights are not equivariant
/// under feature rescaling, so the two settings measure different subspaces;
/// only the unstandardized form commutes with rotations of the feature space.
SubspaceEstimate cca_top_k(const Matrix& x, const Matrix& x_plus, int k,
                           double eps_rel = 1e-10, bool standardize = true);

}  // namespace pcapp
