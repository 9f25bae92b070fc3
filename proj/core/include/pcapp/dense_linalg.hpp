#pragma once

#include <Eigen/Dense>

#include <functional>

namespace pcapp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense real symmetric matrix. The stored array is symmetrized on
/// construction, so entries(i, j) == entries(j, i) exactly afterwards.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;

  /// Throws InvalidInput for non-square or non-finite input.
  explicit SymmetricMatrix(Matrix entries);

  /// Wraps a matrix that is already exactly symmetric (no copy-and-average).
  static SymmetricMatrix from_symmetric(Matrix entries);

  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

 private:
  Matrix entries_;
};

/// Eigenpairs of a symmetric matrix, eigenvalues in descending order.
struct EigenDecomposition {
  Vector values;
  Matrix vectors;
};

/// Solution of S_plus v = lambda S v restricted to the retained spectrum of S.
struct GeneralizedEigenResult {
  Vector values;           ///< descending
  Matrix vectors;          ///< d x r, v_j' S_s v_j ~= 1
  double eps_used = 0.0;   ///< absolute regularizer eps_rel * lambda_1(S)
  Eigen::Index truncation_rank = 0;
  Eigen::Index retained = 0;  ///< r: directions of S_s with positive eigenvalue
};

/// Full eigendecomposition (LAPACK dsyevr). Columns are sign-normalized so
/// that the largest-magnitude entry of each is positive.
EigenDecomposition sym_eig(const SymmetricMatrix& m);

/// Leading `count` eigenpairs only; cheaper than sym_eig for count << dim.
EigenDecomposition sym_eig_top(const SymmetricMatrix& m, Eigen::Index count);

/// Best rank-s approximation sum_{j<=s} lambda_j v_j v_j'.
SymmetricMatrix truncate_rank(const SymmetricMatrix& m, Eigen::Index s);

/// Regularized whitening solver for the symmetric-definite pencil
/// (S_plus, truncate_rank(S, s)).
///
/// S is eigendecomposed to rank s; directions whose eigenvalue is not
/// positive are dropped, the rest are whitened by (lambda + eps)^{-1/2}
/// with eps = eps_rel * lambda_1(S). The projected S_plus is symmetrized and
/// eigendecomposed, and the eigenvectors are mapped back through the
/// whitening.
GeneralizedEigenResult generalized_eig(const SymmetricMatrix& s_plus,
                                       const SymmetricMatrix& s,
                                       Eigen::Index s_rank, double eps_rel);

/// Computes R' S_plus R for a whitening basis R (d x r). Lets callers that
/// hold the data matrices avoid materializing S_plus.
using PencilProjector = std::function<Matrix(const Matrix& whitening)>;

/// Same algorithm as generalized_eig, starting from precomputed leading
/// eigenpairs of S (descending, at least s_rank of them) and a projector for
/// the numerator matrix.
GeneralizedEigenResult generalized_eig_from_spectrum(const EigenDecomposition& s_top,
                                                     const PencilProjector& project,
                                                     Eigen::Index s_rank,
                                                     double eps_rel);

struct RightSingularPairs {
  Vector values;   ///< descending
  Matrix vectors;  ///< cols x min(rows, cols)
};

/// Thin SVD of a general matrix, keeping singular values and right singular
/// vectors only.
RightSingularPairs right_singular_pairs(const Matrix& m);

/// Flip each column so its largest-magnitude entry is positive.
void normalize_column_signs(Matrix& vectors);

/// Operator (spectral) norm of a dense matrix.
double spectral_norm(const Matrix& m);

}  // namespace pcapp
