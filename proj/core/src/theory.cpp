#include "pcapp/theory.hpp"

#include "pcapp/errors.hpp"

#include <algorithm>
#include <cmath>

namespace pcapp::theory {

namespace {

bool positive(double v) { return v > 0.0 && std::isfinite(v); }

}  // namespace

Prediction fixed_aspect_error(double lambda_weakest, double c) {
  if (!positive(lambda_weakest) || !(c >= 0.0) || !std::isfinite(c)) {
    throw InvalidInput("fixed_aspect_error: need lambda > 0 and c >= 0");
  }
  if (!bbp_detectable(lambda_weakest, c)) return {1.0, true};
  const double retained = (1.0 - c / (lambda_weakest * lambda_weakest)) / (1.0 + c / lambda_weakest);
  const double squared = std::clamp(1.0 - retained, 0.0, 1.0);
  return {std::sqrt(squared), false};
}

double growing_spike_error(double c_eff) {
  if (!(c_eff >= 0.0) || !std::isfinite(c_eff)) {
    throw InvalidInput("growing_spike_error: effective ratio must be nonnegative");
  }
  return std::sqrt(c_eff / (1.0 + c_eff));
}

double pca_plus_alignment_bound(double lambda_signal, double lambda_background, double c) {
  if (!positive(lambda_signal) || !positive(lambda_background) || !positive(c)) {
    throw InvalidInput("pca_plus_alignment_bound: inputs must be positive");
  }
  return std::min(1.0, 2.0 * lambda_signal / std::sqrt(lambda_background * c));
}

bool bbp_detectable(double lambda, double c) {
  // Compare squares so that (sqrt(2), 2) lands on the boundary.
  return lambda >= 0.0 && lambda * lambda >= c * (1.0 - 1e-15);
}

double finite_sample_bound_shape(const FiniteSampleParams& p) {
  if (!positive(p.lambda_signal_max) || !positive(p.lambda_signal_min) ||
      !positive(p.lambda_background_max) || p.k < 1 || p.m < 1 || p.d < 1 || p.n < 1) {
    throw InvalidInput("finite_sample_bound_shape: inputs must be positive");
  }
  const double n = p.n;
  const double a1 = p.lambda_signal_max;
  const double b1 = p.lambda_background_max;
  const double bracket = a1 * std::sqrt(p.k / n) + b1 * std::sqrt(p.m / n) +
                         std::sqrt(a1 * b1) * std::sqrt(std::max(p.k, p.m) / n) +
                         (std::sqrt(a1) + std::sqrt(b1) + 1.0) * std::sqrt(p.d / n);
  return bracket * std::sqrt(std::log(n + p.d)) / p.lambda_signal_min;
}

}  // namespace pcapp::theory
