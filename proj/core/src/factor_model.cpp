#include "pcapp/factor_model.hpp"

#include "pcapp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

namespace pcapp {

namespace {

void check_variances(const std::vector<double>& values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw InvalidSpec(std::string(what) + " variances must be finite and positive");
    }
    if (i > 0 && values[i] > values[i - 1]) {
      throw InvalidSpec(std::string(what) + " variances must be in descending order");
    }
  }
}

// Standardized Beta(2, 2): variance of Beta(2, 2) is 1/20.
class Beta22 {
 public:
  template <class Rng>
  double operator()(Rng& rng) {
    const double a = gamma_(rng);
    const double b = gamma_(rng);
    return (a / (a + b) - 0.5) * std::sqrt(20.0);
  }

 private:
  std::gamma_distribution<double> gamma_{2.0, 1.0};
};

template <class Sampler, class Rng>
Matrix draw(Eigen::Index rows, Eigen::Index cols, Sampler& sampler, Rng& rng) {
  Matrix out(rows, cols);
  // Column-major fill; the draw order is part of the seed contract.
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = sampler(rng);
  }
  return out;
}

}  // namespace

std::string_view to_string(FactorDistribution dist) {
  switch (dist) {
    case FactorDistribution::gaussian:
      return "gaussian";
    case FactorDistribution::beta22:
      return "beta22";
  }
  return "gaussian";
}

FactorDistribution parse_factor_distribution(std::string_view text) {
  if (text == "gaussian") return FactorDistribution::gaussian;
  if (text == "beta22") return FactorDistribution::beta22;
  throw InvalidSpec("unknown factor distribution '" + std::string(text) + "'");
}

void FactorModelSpec::validate() const {
  if (d < 1) throw InvalidSpec("ambient dimension d must be positive");
  check_variances(signal_variances, "signal");
  check_variances(background_variances, "background");
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) {
    throw InvalidSpec("noise variance must be finite and nonnegative");
  }
  if (overlap_pairs.empty() && k() + m() > d) {
    throw InvalidSpec("k + m = " + std::to_string(k() + m()) + " exceeds d = " +
                      std::to_string(d));
  }
  if (k() > d) throw InvalidSpec("more signal columns than dimensions");
  std::set<int> signals, backgrounds;
  for (const auto& [sig, bg] : overlap_pairs) {
    if (sig < 0 || sig >= k() || bg < 0 || bg >= m()) {
      throw InvalidSpec("overlap pair (" + std::to_string(sig) + "," + std::to_string(bg) +
                        ") out of range");
    }
    if (!signals.insert(sig).second || !backgrounds.insert(bg).second) {
      throw InvalidSpec("overlap pairs must use each signal and background index once");
    }
  }
}

Loadings build_loadings(const FactorModelSpec& spec) {
  spec.validate();
  const int d = spec.d;
  const int k = spec.k();
  const int m = spec.m();

  Loadings out{Matrix::Zero(d, k), Matrix::Zero(d, m)};
  for (int j = 0; j < k; ++j) out.A(j, j) = std::sqrt(spec.signal_variances[j]);

  std::vector<int> coordinate(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) coordinate[j] = d - 1 - j;
  for (const auto& [sig, bg] : spec.overlap_pairs) coordinate[bg] = sig;

  std::set<int> used;
  for (int j = 0; j < m; ++j) {
    const bool shared = std::any_of(spec.overlap_pairs.begin(), spec.overlap_pairs.end(),
                                    [j](const OverlapPair& p) { return p.second == j; });
    if (!shared && (coordinate[j] < k || coordinate[j] < 0)) {
      throw InvalidSpec("background column " + std::to_string(j) +
                        " collides with the signal block");
    }
    if (!used.insert(coordinate[j]).second) {
      throw InvalidSpec("background columns collide on coordinate " +
                        std::to_string(coordinate[j]));
    }
    out.B(coordinate[j], j) = std::sqrt(spec.background_variances[j]);
  }

  if (spec.rotate_seed) {
    const Matrix q = random_orthogonal(d, *spec.rotate_seed);
    out.A = q * out.A;
    out.B = q * out.B;
  }
  return out;
}

Matrix signal_basis(const Loadings& loadings) {
  return loadings.A.colwise().normalized();
}

Matrix random_orthogonal(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const Matrix g = draw(d, d, normal, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  // Sign fix on R's diagonal makes the distribution Haar.
  const Matrix& r = qr.matrixQR();
  for (int j = 0; j < d; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

PairedDataset sample_pairs(const Loadings& loadings, int n, double noise_variance,
                           FactorDistribution distribution, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("sample_pairs: n must be positive");
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) {
    throw InvalidInput("sample_pairs: noise variance must be finite and nonnegative");
  }
  if (loadings.A.rows() != loadings.B.rows()) {
    throw InvalidInput("sample_pairs: A and B have different row counts");
  }
  const Eigen::Index d = loadings.A.rows();
  const Eigen::Index k = loadings.A.cols();
  const Eigen::Index m = loadings.B.cols();

  std::mt19937_64 rng(seed);
  auto fill = [&](Eigen::Index rows, Eigen::Index cols) -> Matrix {
    if (distribution == FactorDistribution::beta22) {
      Beta22 beta;
      return draw(rows, cols, beta, rng);
    }
    std::normal_distribution<double> normal;
    return draw(rows, cols, normal, rng);
  };

  const Matrix w = fill(n, k);
  const Matrix h = fill(n, m);
  const Matrix h_plus = fill(n, m);

  PairedDataset out;
  const Matrix shared = w * loadings.A.transpose();
  out.X = shared + h * loadings.B.transpose();
  out.X_plus = shared + h_plus * loadings.B.transpose();
  if (noise_variance > 0.0) {
    const double sigma = std::sqrt(noise_variance);
    out.X += sigma * fill(n, d);
    out.X_plus += sigma * fill(n, d);
  }
  out.truth = signal_basis(loadings);
  return out;
}

SymmetricMatrix population_covariance(const Loadings& loadings, double noise_variance) {
  Matrix sigma = loadings.A * loadings.A.transpose() + loadings.B * loadings.B.transpose();
  sigma.diagonal().array() += noise_variance;
  return SymmetricMatrix(std::move(sigma));
}

}  // namespace pcapp
