#pragma once

namespace pcapp::theory {

struct Prediction {
  double dist = 0.0;            ///< predicted sin-theta distance in [0, 1]
  bool below_threshold = false;  ///< spike under the detectability threshold
};

/// Limit of the PCA++ subspace error when d/n -> c with fixed spikes:
/// dist^2 = 1 - (1 - c / lambda^2) / (1 + c / lambda).
/// Below the detectability threshold (lambda < sqrt(c)) the prediction is 1
/// with `below_threshold` set.
Prediction fixed_aspect_error(double lambda_weakest, double c);

/// Limit when spikes grow with d/n and d / (n lambda) -> c_eff:
/// dist = sqrt(c_eff / (1 + c_eff)).
double growing_spike_error(double c_eff);

/// Upper bound on the squared first-axis alignment of PCA+ under a strong
/// background: min(1, 2 lambda_A / sqrt(lambda_B c)).
double pca_plus_alignment_bound(double lambda_signal, double lambda_background, double c);

/// lambda >= sqrt(c) (boundary inclusive).
bool bbp_detectable(double lambda, double c);

struct FiniteSampleParams {
  double lambda_signal_max = 0.0;   ///< lambda_{A,1}
  double lambda_signal_min = 0.0;   ///< lambda_{A,k}
  double lambda_background_max = 0.0;  ///< lambda_{B,1}
  int k = 1;
  int m = 1;
  int d = 1;
  int n = 1;
};

/// Shape of the finite-sample distance bound for PCA+ with the universal
/// constant set to 1. Unbounded; meant for qualitative overlays only.
double finite_sample_bound_shape(const FiniteSampleParams& params);

}  // namespace pcapp::theory
