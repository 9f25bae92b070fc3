#pragma once

#include "pcapp/dense_linalg.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pcapp {

enum class FactorDistribution { gaussian, beta22 };

std::string_view to_string(FactorDistribution dist);
FactorDistribution parse_factor_distribution(std::string_view text);

/// (signal_index, background_index), both zero-based: background column
/// `background_index` is placed on the coordinate of signal column
/// `signal_index` instead of its default coordinate.
using OverlapPair = std::pair<int, int>;

/// Contrastive factor model x = A w + B h + e, x+ = A w + B h' + e'.
///
/// Signal spikes occupy coordinates 0..k-1 in order. Background spikes occupy
/// the last m coordinates in reverse order, so the largest background
/// variance sits on coordinate d-1.
struct FactorModelSpec {
  int d = 0;
  std::vector<double> signal_variances;
  std::vector<double> background_variances;
  double noise_variance = 1.0;
  std::vector<OverlapPair> overlap_pairs;
  FactorDistribution factor_distribution = FactorDistribution::gaussian;
  /// When set, A and B are both rotated by one Haar-random orthogonal matrix.
  std::optional<std::uint64_t> rotate_seed;

  int k() const { return static_cast<int>(signal_variances.size()); }
  int m() const { return static_cast<int>(background_variances.size()); }

  /// Throws InvalidSpec when the invariants do not hold.
  void validate() const;
};

struct Loadings {
  Matrix A;  ///< d x k
  Matrix B;  ///< d x m
};

struct PairedDataset {
  Matrix X;       ///< n x d
  Matrix X_plus;  ///< n x d
  Matrix truth;   ///< d x k orthonormal basis of span(A)
};

Loadings build_loadings(const FactorModelSpec& spec);

/// Draws n positive pairs. Row i of X and X_plus shares one signal draw w_i;
/// background and noise draws are independent across the pair. All factors
/// are iid mean 0, variance 1 under `distribution`.
///
/// noise_variance may be 0 here (pure factor data); the spec-level invariant
/// only constrains FactorModelSpec.
PairedDataset sample_pairs(const Loadings& loadings, int n, double noise_variance,
                           FactorDistribution distribution, std::uint64_t seed);

/// E[x x'] = A A' + B B' + noise_variance * I.
SymmetricMatrix population_covariance(const Loadings& loadings, double noise_variance);

/// Orthonormal basis of span(A) obtained by normalizing A's columns.
Matrix signal_basis(const Loadings& loadings);

/// Haar-distributed d x d orthogonal matrix.
Matrix random_orthogonal(int d, std::uint64_t seed);

}  // namespace pcapp
