#include "pcapp/subspace_metrics.hpp"

#include "pcapp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace pcapp {

std::string_view to_string(SubspaceNorm norm) {
  return norm == SubspaceNorm::frobenius ? "frobenius" : "operator";
}

SubspaceNorm parse_subspace_norm(std::string_view text) {
  if (text == "operator") return SubspaceNorm::operator_norm;
  if (text == "frobenius") return SubspaceNorm::frobenius;
  throw InvalidInput("unknown subspace norm '" + std::string(text) + "'");
}

Matrix orthonormalize(const Matrix& u, double tol) {
  if (u.cols() == 0) return u;
  const Matrix gram = u.transpose() * u;
  const Matrix defect = gram - Matrix::Identity(u.cols(), u.cols());
  if (spectral_norm(defect) <= tol) return u;
  Eigen::HouseholderQR<Matrix> qr(u);
  return qr.householderQ() * Matrix::Identity(u.rows(), u.cols());
}

PrincipalAngleSet principal_angles(const Matrix& u, const Matrix& u_prime) {
  if (u.rows() != u_prime.rows()) {
    throw InvalidInput("principal_angles: ambient dimensions differ (" +
                       std::to_string(u.rows()) + " vs " + std::to_string(u_prime.rows()) +
                       ")");
  }
  if (u.cols() == 0 || u_prime.cols() == 0) {
    throw InvalidInput("principal_angles: empty basis");
  }
  // Work with the wider basis as the reference so the residual below yields
  // exactly min(k, k') sines.
  const bool swap = u.cols() < u_prime.cols();
  const Matrix wide = orthonormalize(swap ? u_prime : u);
  const Matrix narrow = orthonormalize(swap ? u : u_prime);
  const Eigen::Index count = narrow.cols();

  const Matrix cross = wide.transpose() * narrow;
  Eigen::JacobiSVD<Matrix> svd_cos(cross);
  Vector cosines = svd_cos.singularValues().cwiseMin(1.0).cwiseMax(0.0);

  // Singular values of the residual (I - W W') N are the sines; they stay
  // accurate where arccos of a cosine near 1 does not.
  const Matrix residual = narrow - wide * cross;
  Eigen::JacobiSVD<Matrix> svd_sin(residual);
  Vector sines = svd_sin.singularValues().cwiseMin(1.0).cwiseMax(0.0);
  std::sort(sines.data(), sines.data() + sines.size());

  PrincipalAngleSet out;
  out.column_count_mismatch = u.cols() != u_prime.cols();
  out.cosines = cosines;
  out.angles.resize(count);
  out.sines.resize(count);
  for (Eigen::Index j = 0; j < count; ++j) {
    const double c = cosines(j);
    const double theta = c * c >= 0.5 ? std::asin(sines(j)) : std::acos(c);
    out.angles(j) = theta;
    out.sines(j) = std::sin(theta);
  }
  // Mixed formulas can break monotonicity by an ulp.
  std::sort(out.angles.data(), out.angles.data() + count);
  std::sort(out.sines.data(), out.sines.data() + count);
  return out;
}

double sin_theta_dist(const Matrix& u, const Matrix& u_prime, SubspaceNorm norm) {
  const PrincipalAngleSet angles = principal_angles(u, u_prime);
  if (norm == SubspaceNorm::frobenius) return angles.sines.norm();
  return angles.sines.maxCoeff();
}

std::vector<std::size_t> match_to_population(const std::vector<double>& sample_values,
                                             const std::vector<double>& population_values) {
  if (sample_values.size() < population_values.size()) {
    throw InvalidInput("match_to_population: fewer sample values than population values");
  }
  std::vector<std::size_t> order(population_values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return population_values[a] > population_values[b];
  });

  std::vector<bool> used(sample_values.size(), false);
  std::vector<std::size_t> assignment(population_values.size());
  for (const std::size_t p : order) {
    std::size_t best = sample_values.size();
    double best_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sample_values.size(); ++i) {
      if (used[i]) continue;
      const double gap = std::abs(sample_values[i] - population_values[p]);
      if (gap < best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    used[best] = true;
    assignment[p] = best;
  }
  return assignment;
}

}  // namespace pcapp
