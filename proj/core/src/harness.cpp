#include "pcapp/harness.hpp"

#include "pcapp/errors.hpp"
#include "pcapp/estimators.hpp"
#include "pcapp/theory.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <thread>
#include <tuple>

namespace pcapp::harness {

namespace {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double weakest_signal(const FactorModelSpec& model) {
  return *std::min_element(model.signal_variances.begin(), model.signal_variances.end());
}

SubspaceEstimate estimate(const MethodEntry& method, const PairedDataset& data, int d) {
  switch (method.kind) {
    case MethodKind::pca:
      return pca(data.X, method.k);
    case MethodKind::pca_plus:
      return pca_plus(data.X, data.X_plus, method.k, Route::automatic, method.ordering);
    case MethodKind::pca_plus_plus:
      return pca_plus_plus(data.X, data.X_plus, method.k, method.s.resolve(d), method.eps_rel);
    case MethodKind::cpca: {
      const ForegroundBackground fb = synthesize_fg_bg(data.X, data.X_plus);
      return cpca(fb.foreground, fb.background, method.alpha, method.k);
    }
    case MethodKind::cpca_pp: {
      const ForegroundBackground fb = synthesize_fg_bg(data.X, data.X_plus);
      return cpca_pp(fb.foreground, fb.background, method.k, method.s.resolve(d), method.eps_rel);
    }
    case MethodKind::cca:
      return cca_top_k(data.X, data.X_plus, method.k, method.eps_rel);
  }
  throw InvalidInput("unknown method kind");
}

PairedDataset make_dataset(const SweepPoint& point, std::uint64_t seed) {
  const Loadings loadings = build_loadings(point.model);
  return sample_pairs(loadings, point.n, point.model.noise_variance,
                      point.model.factor_distribution, seed);
}

TrialRecord measure(const ExperimentConfig& config, const SweepPoint& point,
                    const MethodEntry& method, int trial, const PairedDataset& data) {
  TrialRecord rec;
  rec.preset = point.preset_label;
  rec.method = method.label;
  rec.n = point.n;
  rec.d = point.d;
  rec.aspect_ratio = point.aspect_ratio;
  rec.trial = trial;
  if (uses_truncation(method.kind)) rec.s = method.s.resolve(point.d);

  const auto start = std::chrono::steady_clock::now();
  try {
    const SubspaceEstimate est = estimate(method, data, point.d);
    rec.dist = sin_theta_dist(est.basis, data.truth, config.norm);
  } catch (const std::exception&) {
    rec.dist = std::numeric_limits<double>::quiet_NaN();
  }
  if (config.record_timing) {
    rec.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return rec;
}

}  // namespace

std::string_view to_string(MethodKind kind) {
  switch (kind) {
    case MethodKind::pca:
      return "pca";
    case MethodKind::pca_plus:
      return "pca_plus";
    case MethodKind::pca_plus_plus:
      return "pca_plus_plus";
    case MethodKind::cpca:
      return "cpca";
    case MethodKind::cpca_pp:
      return "cpca_pp";
    case MethodKind::cca:
      return "cca";
  }
  return "pca";
}

MethodKind parse_method_kind(std::string_view text) {
  for (MethodKind k : {MethodKind::pca, MethodKind::pca_plus, MethodKind::pca_plus_plus,
                       MethodKind::cpca, MethodKind::cpca_pp, MethodKind::cca}) {
    if (text == to_string(k)) return k;
  }
  throw ConfigError("unknown method '" + std::string(text) + "'");
}

bool uses_truncation(MethodKind kind) {
  return kind == MethodKind::pca_plus_plus || kind == MethodKind::cpca_pp;
}

TruncationRule TruncationRule::parse(std::string_view text) {
  const std::string t(text);
  if (t == "full" || t == "d") return full();
  try {
    std::size_t used = 0;
    if (!t.empty() && t.back() == 'd') {
      const double f = std::stod(t.substr(0, t.size() - 1), &used);
      if (used != t.size() - 1 || !(f > 0.0) || f > 1.0) throw ConfigError("");
      return fraction(f);
    }
    const int s = std::stoi(t, &used);
    if (used != t.size() || s < 1) throw ConfigError("");
    return fixed(s);
  } catch (const std::exception&) {
    throw ConfigError("invalid truncation rank '" + t + "' (expected N, F·d as e.g. 0.1d, or full)");
  }
}

int TruncationRule::resolve(int d) const {
  switch (kind) {
    case Kind::fixed:
      return static_cast<int>(value);
    case Kind::fraction:
      return std::clamp(static_cast<int>(std::lround(value * d)), 1, d);
    case Kind::full:
      return d;
  }
  return d;
}

std::string TruncationRule::describe() const {
  switch (kind) {
    case Kind::fixed:
      return std::to_string(static_cast<int>(value));
    case Kind::fraction:
      return format_number(value) + "d";
    case Kind::full:
      return "full";
  }
  return "full";
}

std::string_view to_string(TheoryOverlay overlay) {
  switch (overlay) {
    case TheoryOverlay::none:
      return "none";
    case TheoryOverlay::fixed_aspect:
      return "fixed";
    case TheoryOverlay::growing_spike:
      return "growing";
  }
  return "none";
}

TheoryOverlay parse_theory_overlay(std::string_view text) {
  if (text == "none") return TheoryOverlay::none;
  if (text == "fixed") return TheoryOverlay::fixed_aspect;
  if (text == "growing") return TheoryOverlay::growing_spike;
  throw ConfigError("unknown theory overlay '" + std::string(text) + "'");
}

void ExperimentConfig::validate() const {
  if (name.empty()) throw ConfigError("experiment name is empty");
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (sample_sizes.empty()) throw ConfigError("no sample sizes");
  for (int n : sample_sizes) {
    if (n < 1) throw ConfigError("sample sizes must be positive");
  }
  if (aspect_ratios.empty()) throw ConfigError("no aspect ratios");
  for (double r : aspect_ratios) {
    if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("aspect ratios must be positive");
  }
  if (!(scale_factor > 0.0) || !std::isfinite(scale_factor)) {
    throw ConfigError("scale_factor must be positive");
  }
  if (model.signal_variances.empty()) throw ConfigError("model has no signal variances");
  if (!signal_to_background.empty()) {
    if (model.background_variances.size() != 1) {
      throw ConfigError("a signal_to_background sweep needs exactly one background variance");
    }
    for (double v : signal_to_background) {
      if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("signal_to_background must be positive");
    }
  }
  if (methods.empty()) throw ConfigError("no methods configured");
  std::set<std::string> labels;
  for (const MethodEntry& m : methods) {
    if (m.label.empty() || m.label.find_first_of(",\n\r\"") != std::string::npos) {
      throw ConfigError("method label '" + m.label + "' is not CSV-safe");
    }
    if (m.label == "theory") throw ConfigError("'theory' is reserved for overlay rows");
    if (!labels.insert(m.label).second) throw ConfigError("duplicate method label " + m.label);
    if (m.k < 1) throw ConfigError("method " + m.label + ": k must be positive");
    if (uses_truncation(m.kind) && m.s.kind == TruncationRule::Kind::fixed && m.s.value < m.k) {
      throw ConfigError("method " + m.label + ": truncation rank s must be >= k");
    }
    if (!(m.eps_rel >= 0.0)) throw ConfigError("method " + m.label + ": eps_rel must be >= 0");
  }
  try {
    FactorModelSpec probe = model;
    probe.d = std::max(1, static_cast<int>(model.signal_variances.size() +
                                           model.background_variances.size()));
    probe.rotate_seed.reset();
    if (!signal_to_background.empty()) probe.background_variances = {1.0};
    probe.validate();
  } catch (const InvalidSpec& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
}

std::vector<SweepPoint> expand_points(const ExperimentConfig& config) {
  config.validate();
  std::vector<SweepPoint> points;
  const bool multi_n = config.sample_sizes.size() > 1;
  std::vector<std::optional<double>> strengths;
  if (config.signal_to_background.empty()) {
    strengths.emplace_back();
  } else {
    for (double v : config.signal_to_background) strengths.emplace_back(v);
  }

  for (int n : config.sample_sizes) {
    for (double ratio : config.aspect_ratios) {
      for (const auto& strength : strengths) {
        SweepPoint p;
        p.n = n;
        p.aspect_ratio = ratio;
        p.d = static_cast<int>(std::lround(config.scale_factor * ratio * n));
        p.signal_to_background = strength;
        p.model = config.model;
        p.model.d = p.d;
        for (double& v : p.model.signal_variances) v *= config.scale_factor;
        for (double& v : p.model.background_variances) v *= config.scale_factor;
        if (strength) {
          const double a1 = p.model.signal_variances.front();
          p.model.background_variances = {(a1 / *strength) * (a1 / *strength)};
        }
        p.preset_label = config.name;
        if (multi_n) p.preset_label += "[n=" + std::to_string(n) + "]";
        if (strength) p.preset_label += "[sb=" + format_number(*strength) + "]";
        try {
          p.model.validate();
        } catch (const InvalidSpec& e) {
          throw ConfigError("sweep point n=" + std::to_string(n) + " d=" + std::to_string(p.d) +
                            ": " + e.what());
        }
        points.push_back(std::move(p));
      }
    }
  }
  return points;
}

std::uint64_t trial_seed(std::uint64_t base_seed, int trial, const SweepPoint& point) {
  const std::uint64_t stream = base_seed + static_cast<std::uint64_t>(trial);
  std::seed_seq seq{static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(point.n), static_cast<std::uint32_t>(point.d),
                    static_cast<std::uint32_t>(std::lround(
                        point.signal_to_background.value_or(0.0) * 1e6))};
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

TrialRecord run_trial(const ExperimentConfig& config, const SweepPoint& point,
                      const MethodEntry& method, int trial) {
  const PairedDataset data = make_dataset(point, trial_seed(config.base_seed, trial, point));
  return measure(config, point, method, trial, data);
}

std::vector<TrialRecord> run_point_trial(const ExperimentConfig& config, const SweepPoint& point,
                                         int trial) {
  const PairedDataset data = make_dataset(point, trial_seed(config.base_seed, trial, point));
  std::vector<TrialRecord> out;
  out.reserve(config.methods.size());
  for (const MethodEntry& method : config.methods) {
    out.push_back(measure(config, point, method, trial, data));
  }
  return out;
}

std::vector<TrialRecord> theory_rows(const ExperimentConfig& config) {
  std::vector<TrialRecord> out;
  if (config.overlay == TheoryOverlay::none) return out;
  for (const SweepPoint& p : expand_points(config)) {
    TrialRecord rec;
    rec.preset = p.preset_label;
    rec.method = "theory";
    rec.n = p.n;
    rec.d = p.d;
    rec.aspect_ratio = p.aspect_ratio;
    rec.trial = 0;
    const double lambda = weakest_signal(p.model);
    const double c = static_cast<double>(p.d) / p.n;
    rec.dist = config.overlay == TheoryOverlay::fixed_aspect
                   ? theory::fixed_aspect_error(lambda, c).dist
                   : theory::growing_spike_error(c / lambda);
    out.push_back(std::move(rec));
  }
  return out;
}

void sort_records(std::vector<TrialRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const TrialRecord& a, const TrialRecord& b) {
    return std::tie(a.preset, a.method, a.aspect_ratio, a.trial, a.n, a.d) <
           std::tie(b.preset, b.method, b.aspect_ratio, b.trial, b.n, b.d);
  });
}

SweepResult run_sweep(const ExperimentConfig& config, int threads) {
  const std::vector<SweepPoint> points = expand_points(config);
  const std::size_t total = points.size() * static_cast<std::size_t>(config.trials);

  std::vector<std::vector<TrialRecord>> slots(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t task = next++; task < total; task = next++) {
      const SweepPoint& point = points[task / config.trials];
      const int trial = static_cast<int>(task % config.trials);
      slots[task] = run_point_trial(config, point, trial);
    }
  };

  unsigned count = threads > 0 ? static_cast<unsigned>(threads) : std::thread::hardware_concurrency();
  count = std::max(1u, std::min<unsigned>(count, static_cast<unsigned>(std::max<std::size_t>(total, 1))));
  if (count == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(count);
    for (unsigned i = 0; i < count; ++i) pool.emplace_back(worker);
  }

  SweepResult result;
  for (auto& slot : slots) {
    for (auto& rec : slot) result.records.push_back(std::move(rec));
  }
  for (auto& rec : theory_rows(config)) result.records.push_back(std::move(rec));
  sort_records(result.records);
  result.summaries = summarize(result.records);
  return result;
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
  using Key = std::tuple<std::string, std::string, double>;
  std::map<Key, std::vector<double>> groups;
  std::map<Key, int> failures;
  for (const TrialRecord& r : records) {
    const Key key{r.preset, r.method, r.aspect_ratio};
    auto& values = groups[key];
    if (std::isnan(r.dist)) {
      ++failures[key];
    } else {
      values.push_back(r.dist);
    }
  }

  std::vector<SummaryRow> out;
  out.reserve(groups.size());
  for (const auto& [key, values] : groups) {
    SummaryRow row;
    std::tie(row.preset, row.method, row.aspect_ratio) = key;
    const auto failed = failures.find(key);
    row.failed = failed == failures.end() ? 0 : failed->second;
    row.trials = static_cast<int>(values.size()) + row.failed;
    if (values.empty()) {
      row.mean_dist = std::numeric_limits<double>::quiet_NaN();
      row.sd_dist = std::numeric_limits<double>::quiet_NaN();
    } else {
      double sum = 0.0;
      for (double v : values) sum += v;
      row.mean_dist = sum / static_cast<double>(values.size());
      double sq = 0.0;
      for (double v : values) sq += (v - row.mean_dist) * (v - row.mean_dist);
      row.sd_dist = values.size() > 1 ? std::sqrt(sq / static_cast<double>(values.size() - 1)) : 0.0;
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::string format_cell(const SummaryRow& row) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f (%.3f)", row.mean_dist, row.sd_dist);
  return buf;
}

}  // namespace pcapp::harness
