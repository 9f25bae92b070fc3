#pragma once

#include "pcapp/dense_linalg.hpp"

#include <string_view>
#include <vector>

namespace pcapp {

enum class SubspaceNorm { operator_norm, frobenius };

std::string_view to_string(SubspaceNorm norm);
SubspaceNorm parse_subspace_norm(std::string_view text);

struct PrincipalAngleSet {
  Vector cosines;  ///< descending, clamped to [0, 1]
  Vector angles;   ///< ascending, radians
  Vector sines;    ///< ascending; accurate for small angles
  bool column_count_mismatch = false;
};

/// Orthonormal basis of span(u) via thin QR, or `u` itself when it is
/// already orthonormal within `tol` (operator norm of u'u - I).
Matrix orthonormalize(const Matrix& u, double tol = 1e-6);

/// Principal angles between span(u) and span(u_prime). Inputs that are not
/// orthonormal are re-orthonormalized first. When the column counts differ,
/// min(k, k') angles are returned and the mismatch is flagged.
PrincipalAngleSet principal_angles(const Matrix& u, const Matrix& u_prime);

/// ||sin Theta|| in the operator (largest sine) or Frobenius norm.
double sin_theta_dist(const Matrix& u, const Matrix& u_prime,
                      SubspaceNorm norm = SubspaceNorm::operator_norm);

/// Greedy nearest-magnitude matching: population values are visited in
/// descending order and each takes the closest unused sample value.
/// Returns, for every population index, the chosen sample index.
std::vector<std::size_t> match_to_population(const std::vector<double>& sample_values,
                                             const std::vector<double>& population_values);

}  // namespace pcapp
