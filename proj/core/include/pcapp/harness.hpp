#pragma once

#include "pcapp/estimators.hpp"
#include "pcapp/factor_model.hpp"
#include "pcapp/subspace_metrics.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pcapp::harness {

enum class MethodKind { pca, pca_plus, pca_plus_plus, cpca, cpca_pp, cca };

std::string_view to_string(MethodKind kind);
MethodKind parse_method_kind(std::string_view text);
bool uses_truncation(MethodKind kind);

/// Truncation rank as written in a config: a fixed count ("10"), a fraction
/// of the dimension ("0.1d"), or the full dimension ("full").
struct TruncationRule {
  enum class Kind { fixed, fraction, full };
  Kind kind = Kind::fixed;
  double value = 2.0;

  static TruncationRule fixed(int s) { return {Kind::fixed, static_cast<double>(s)}; }
  static TruncationRule fraction(double f) { return {Kind::fraction, f}; }
  static TruncationRule full() { return {Kind::full, 0.0}; }
  static TruncationRule parse(std::string_view text);

  int resolve(int d) const;
  std::string describe() const;
};

struct MethodEntry {
  std::string label;  ///< the `method` column; unique within a config
  MethodKind kind = MethodKind::pca_plus_plus;
  int k = 1;
  TruncationRule s = TruncationRule::fixed(2);
  double eps_rel = 1e-10;
  double alpha = 1.0;  ///< cpca only
  EigenOrdering ordering = EigenOrdering::signed_value;  ///< pca_plus only
};

enum class TheoryOverlay { none, fixed_aspect, growing_spike };

std::string_view to_string(TheoryOverlay overlay);
TheoryOverlay parse_theory_overlay(std::string_view text);

struct ExperimentConfig {
  std::string name;
  std::string description;
  FactorModelSpec model;  ///< model.d is ignored; each sweep point derives d
  std::vector<int> sample_sizes;
  std::vector<double> aspect_ratios;
  /// Optional sweep over lambda_{A,1} / sqrt(lambda_{B,1}) (single background
  /// column). Each value sets the background variance of its sweep point.
  std::vector<double> signal_to_background;
  std::vector<MethodEntry> methods;
  int trials = 50;
  std::uint64_t base_seed = 0;
  SubspaceNorm norm = SubspaceNorm::operator_norm;
  /// Growing-spike multiplier applied to d and to every spike variance.
  double scale_factor = 1.0;
  TheoryOverlay overlay = TheoryOverlay::none;
  /// When false, elapsed_seconds is written as 0 so that repeated runs
  /// produce byte-identical CSV files.
  bool record_timing = true;

  /// Throws ConfigError.
  void validate() const;
};

/// One cell of the sweep grid (sample size x aspect ratio x background
/// strength) with its resolved model.
struct SweepPoint {
  std::string preset_label;  ///< config name, suffixed when n or strength vary
  int n = 0;
  int d = 0;
  double aspect_ratio = 0.0;
  std::optional<double> signal_to_background;
  FactorModelSpec model;
};

std::vector<SweepPoint> expand_points(const ExperimentConfig& config);

struct TrialRecord {
  std::string preset;
  std::string method;
  int n = 0;
  int d = 0;
  double aspect_ratio = 0.0;
  std::optional<int> s;
  int trial = 0;
  double dist = 0.0;  ///< NaN marks a failed trial
  double elapsed_seconds = 0.0;
};

struct SummaryRow {
  std::string preset;
  std::string method;
  double aspect_ratio = 0.0;
  double mean_dist = 0.0;
  double sd_dist = 0.0;
  int trials = 0;
  int failed = 0;
};

struct SweepResult {
  std::vector<TrialRecord> records;
  std::vector<SummaryRow> summaries;
};

/// Seed of the dataset for one trial at one sweep point. Trial t starts from
/// base_seed + t; the point's (n, d) are mixed in so grid cells differ.
std::uint64_t trial_seed(std::uint64_t base_seed, int trial, const SweepPoint& point);

/// Runs one method on one trial. Estimator failures produce dist = NaN.
TrialRecord run_trial(const ExperimentConfig& config, const SweepPoint& point,
                      const MethodEntry& method, int trial);

/// Runs every method on a single shared dataset for (point, trial).
std::vector<TrialRecord> run_point_trial(const ExperimentConfig& config, const SweepPoint& point,
                                         int trial);

/// Theory overlay rows (method "theory"), empty when the config has none.
std::vector<TrialRecord> theory_rows(const ExperimentConfig& config);

/// Full grid. Output order is canonical regardless of `threads`
/// (0 = hardware concurrency).
SweepResult run_sweep(const ExperimentConfig& config, int threads = 0);

/// Canonical sort: preset, method, aspect_ratio, trial (then n, d).
void sort_records(std::vector<TrialRecord>& records);

/// Groups by (preset, method, aspect_ratio); NaN trials are counted in
/// `failed` and excluded from mean and sample standard deviation.
std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records);

inline constexpr std::string_view kRecordsHeader =
    "preset,method,n,d,aspect_ratio,s,trial,dist,elapsed_seconds";
inline constexpr std::string_view kSummaryHeader =
    "preset,method,aspect_ratio,mean_dist,sd_dist,trials,failed";

void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

/// Throws IOError when the file cannot be written.
void emit_csv(const std::vector<TrialRecord>& records, const std::filesystem::path& path);
void emit_summary(const std::vector<SummaryRow>& rows, const std::filesystem::path& path);

/// "mean (sd)" with three decimals.
std::string format_cell(const SummaryRow& row);

struct PresetInfo {
  std::string name;
  std::string description;
};

/// Compiled-in experiment catalog. Throws ConfigError for unknown names.
ExperimentConfig preset(std::string_view name);
std::vector<PresetInfo> list_presets();

/// Standard aspect-ratio grid {0.1, 0.3, ..., 1.7, 1.8}.
std::vector<double> standard_ratio_grid();

/// Line-oriented `key = value` config. A `preset = <name>` line seeds the
/// config from the catalog; every other key overrides one field.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace pcapp::harness
