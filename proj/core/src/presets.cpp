#include "pcapp/errors.hpp"
#include "pcapp/harness.hpp"

#include <functional>
#include <utility>

namespace pcapp::harness {

namespace {

MethodEntry method(std::string label, MethodKind kind, int k,
                   TruncationRule s = TruncationRule::fixed(2)) {
  MethodEntry m;
  m.label = std::move(label);
  m.kind = kind;
  m.k = k;
  m.s = s;
  return m;
}

// One signal spike on coordinate 0, one background spike on the last one.
ExperimentConfig one_spike(std::string name, int n) {
  ExperimentConfig c;
  c.name = std::move(name);
  c.model.signal_variances = {10.0};
  c.model.background_variances = {500.0};
  c.sample_sizes = {n};
  c.aspect_ratios = standard_ratio_grid();
  return c;
}

// Five signal and five background spikes, s = 10.
ExperimentConfig five_spike(std::string name, std::vector<double> background) {
  ExperimentConfig c;
  c.name = std::move(name);
  c.model.signal_variances = {50.0, 25.0, 20.0, 15.0, 10.0};
  c.model.background_variances = std::move(background);
  c.sample_sizes = {500};
  c.aspect_ratios = standard_ratio_grid();
  c.methods = {method("pca_plus_plus", MethodKind::pca_plus_plus, 5, TruncationRule::fixed(10))};
  c.overlay = TheoryOverlay::fixed_aspect;
  return c;
}

ExperimentConfig growing(ExperimentConfig c) {
  c.scale_factor = 10.0;
  c.overlay = TheoryOverlay::growing_spike;
  return c;
}

ExperimentConfig fixed_ratio_table(std::string name, std::vector<double> background) {
  ExperimentConfig c;
  c.name = std::move(name);
  c.model.signal_variances = {20.0, 20.0, 15.0, 10.0, 10.0};
  c.model.background_variances = std::move(background);
  c.sample_sizes = {100, 500, 5000};
  c.aspect_ratios = {0.4};
  MethodEntry by_magnitude = method("pca_plus_abs", MethodKind::pca_plus, 5);
  by_magnitude.ordering = EigenOrdering::magnitude;
  c.methods = {method("pca", MethodKind::pca, 5), method("pca_plus", MethodKind::pca_plus, 5),
               by_magnitude,
               method("pca_plus_plus", MethodKind::pca_plus_plus, 5, TruncationRule::fixed(10))};
  c.overlay = TheoryOverlay::fixed_aspect;
  return c;
}

ExperimentConfig baselines(std::string name, std::vector<double> background) {
  ExperimentConfig c = five_spike(std::move(name), std::move(background));
  MethodEntry cpca_entry = method("cpca", MethodKind::cpca, 5);
  cpca_entry.alpha = 1.0;
  c.methods = {cpca_entry,
               method("cpca_pp", MethodKind::cpca_pp, 5, TruncationRule::fixed(10)),
               method("cca", MethodKind::cca, 5),
               method("pca_plus_plus", MethodKind::pca_plus_plus, 5, TruncationRule::fixed(10))};
  return c;
}

ExperimentConfig overlap(std::string name, double shared_a, double shared_b) {
  ExperimentConfig c = five_spike(std::move(name), {500.0, 400.0, 300.0, shared_a, shared_b});
  c.model.overlap_pairs = {{3, 3}, {4, 4}};
  return c;
}

ExperimentConfig beta(std::string name) {
  ExperimentConfig c = five_spike(std::move(name), {500.0, 400.0, 300.0, 200.0, 100.0});
  c.model.factor_distribution = FactorDistribution::beta22;
  return c;
}

ExperimentConfig degenerate(std::string name) {
  ExperimentConfig c = five_spike(std::move(name), {500.0, 500.0, 300.0, 50.0, 50.0});
  c.model.signal_variances = {50.0, 50.0, 20.0, 15.0, 10.0};
  return c;
}

struct CatalogEntry {
  const char* name;
  const char* description;
  std::function<ExperimentConfig()> build;
};

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"fig1-left",
       "one signal (lambda_A=10) and one background spike, n=2000, d=800; "
       "sweeps lambda_A/sqrt(lambda_B) over 8 points in [0.3125, 0.666]; PCA, PCA+, PCA++ (s=2)",
       [] {
         ExperimentConfig c = one_spike("fig1-left", 2000);
         c.aspect_ratios = {0.4};
         c.signal_to_background.clear();
         for (int i = 0; i < 8; ++i) c.signal_to_background.push_back(0.3125 + i * (0.666 - 0.3125) / 7.0);
         c.methods = {method("pca", MethodKind::pca, 1), method("pca_plus", MethodKind::pca_plus, 1),
                      method("pca_plus_plus", MethodKind::pca_plus_plus, 1)};
         return c;
       }},
      {"fig1-right",
       "lambda_A=10, lambda_B=500, n=500, d/n in {0.1..1.8}; PCA, PCA+, "
       "PCA++ (s=2); fixed-ratio theory overlay",
       [] {
         ExperimentConfig c = one_spike("fig1-right", 500);
         c.methods = {method("pca", MethodKind::pca, 1), method("pca_plus", MethodKind::pca_plus, 1),
                      method("pca_plus_plus", MethodKind::pca_plus_plus, 1)};
         c.overlay = TheoryOverlay::fixed_aspect;
         return c;
       }},
      {"fig2-left",
       "lambda_A=10, lambda_B=500, n=1000, d/n in {0.1..1.8}; PCA++ with s=2 "
       "versus untruncated",
       [] {
         ExperimentConfig c = one_spike("fig2-left", 1000);
         c.methods = {method("pca_plus_plus", MethodKind::pca_plus_plus, 1),
                      method("pca_plus_plus_full", MethodKind::pca_plus_plus, 1,
                             TruncationRule::full())};
         return c;
       }},
      {"fig2-right",
       "lambda_A=10, lambda_B=500, n=1000, d/n in {0.1..1.8}; PCA++ with "
       "s in {2, 0.1d, 0.2d, 0.4d}",
       [] {
         ExperimentConfig c = one_spike("fig2-right", 1000);
         c.methods = {method("pca_plus_plus_s2", MethodKind::pca_plus_plus, 1),
                      method("pca_plus_plus_s0.1d", MethodKind::pca_plus_plus, 1,
                             TruncationRule::fraction(0.1)),
                      method("pca_plus_plus_s0.2d", MethodKind::pca_plus_plus, 1,
                             TruncationRule::fraction(0.2)),
                      method("pca_plus_plus_s0.4d", MethodKind::pca_plus_plus, 1,
                             TruncationRule::fraction(0.4))};
         return c;
       }},
      {"fig3-left",
       "k=5 signal [50,25,20,15,10], m=5 background [500,400,300,200,100], "
       "n=500, s=10, d/n in {0.1..1.8}; PCA+ and PCA++; fixed-ratio theory overlay",
       [] {
         ExperimentConfig c = five_spike("fig3-left", {500.0, 400.0, 300.0, 200.0, 100.0});
         c.methods.insert(c.methods.begin(), method("pca_plus", MethodKind::pca_plus, 5));
         return c;
       }},
      {"fig3-right",
       "fig3-left with d and every spike scaled by 10; growing-spike theory "
       "overlay",
       [] {
         ExperimentConfig c =
             growing(five_spike("fig3-right", {500.0, 400.0, 300.0, 200.0, 100.0}));
         c.methods.insert(c.methods.begin(), method("pca_plus", MethodKind::pca_plus, 5));
         return c;
       }},
      {"table1",
       "d/n=0.4, signal [20,20,15,10,10], large background [500,500,200,100,100], "
       "n in {100,500,5000}; PCA, PCA+ (signed and magnitude ordering), PCA++ (s=10)",
       [] { return fixed_ratio_table("table1", {500.0, 500.0, 200.0, 100.0, 100.0}); }},
      {"table2",
       "as table1 with mild background [100,100,50,25,25]",
       [] { return fixed_ratio_table("table2", {100.0, 100.0, 50.0, 25.0, 25.0}); }},
      {"appendix-overlap-moderate-fixed",
       "Overlap robustness: background [500,400,300] plus [25,12.5] sharing the two weakest "
       "signal coordinates; fixed ratio",
       [] { return overlap("appendix-overlap-moderate-fixed", 25.0, 12.5); }},
      {"appendix-overlap-moderate-growing",
       "Overlap robustness (moderate shared background), growing-spike scaling",
       [] { return growing(overlap("appendix-overlap-moderate-growing", 25.0, 12.5)); }},
      {"appendix-overlap-large-fixed",
       "Overlap robustness: shared background [100,50]; fixed ratio",
       [] { return overlap("appendix-overlap-large-fixed", 100.0, 50.0); }},
      {"appendix-overlap-large-growing",
       "Overlap robustness (large shared background), growing-spike scaling",
       [] { return growing(overlap("appendix-overlap-large-growing", 100.0, 50.0)); }},
      {"appendix-beta-fixed",
       "fig3-left setup with standardized Beta(2,2) factors and noise; fixed ratio",
       [] { return beta("appendix-beta-fixed"); }},
      {"appendix-beta-growing",
       "fig3-right setup with standardized Beta(2,2) factors and noise",
       [] { return growing(beta("appendix-beta-growing")); }},
      {"appendix-degenerate",
       "Repeated spikes: signal [50,50,20,15,10], background [500,500,300,50,50]; fixed ratio",
       [] { return degenerate("appendix-degenerate"); }},
      {"appendix-degenerate-growing",
       "Repeated spikes, growing-spike scaling",
       [] { return growing(degenerate("appendix-degenerate-growing")); }},
      {"appendix-g-moderate",
       "Baselines on synthesized foreground/background: cPCA (alpha=1), cPCA++ (s=10), CCA, "
       "PCA++; background [100,50,40,30,20]",
       [] { return baselines("appendix-g-moderate", {100.0, 50.0, 40.0, 30.0, 20.0}); }},
      {"appendix-g-large",
       "Baselines as appendix-g-moderate with background [500,400,300,200,100]",
       [] { return baselines("appendix-g-large", {500.0, 400.0, 300.0, 200.0, 100.0}); }},
  };
  return entries;
}

}  // namespace

std::vector<double> standard_ratio_grid() {
  return {0.1, 0.3, 0.5, 0.7, 0.9, 1.1, 1.3, 1.5, 1.7, 1.8};
}

ExperimentConfig preset(std::string_view name) {
  for (const CatalogEntry& e : catalog()) {
    if (name == e.name) {
      ExperimentConfig c = e.build();
      c.description = e.description;
      return c;
    }
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

std::vector<PresetInfo> list_presets() {
  std::vector<PresetInfo> out;
  for (const CatalogEntry& e : catalog()) out.push_back({e.name, e.description});
  return out;
}

}  // namespace pcapp::harness
