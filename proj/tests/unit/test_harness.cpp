#include <pcapp/errors.hpp>
#include <pcapp/harness.hpp>
#include <pcapp/theory.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace pcapp::harness {
namespace {

ExperimentConfig small_config() {
  std::istringstream in(R"(
name = tiny
model.signal_variances = 20, 10
model.background_variances = 80, 40
sweep.n = 60
sweep.aspect_ratios = 0.2, 0.5
trials = 3
base_seed = 5
record_timing = false
method.plain = pca k=2
method.plus = pca_plus k=2
method.pp = pca_plus_plus k=2 s=4
)");
  return parse_config(in);
}

std::string records_text(const SweepResult& r) {
  std::ostringstream out;
  write_records_csv(out, r.records);
  return out.str();
}

std::string summary_text(const SweepResult& r) {
  std::ostringstream out;
  write_summary_csv(out, r.summaries);
  return out.str();
}

int line_count(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

TEST(TruncationRule, ParseResolveDescribe) {
  EXPECT_EQ(TruncationRule::parse("10").resolve(300), 10);
  EXPECT_EQ(TruncationRule::parse("0.1d").resolve(300), 30);
  EXPECT_EQ(TruncationRule::parse("0.4d").resolve(50), 20);
  EXPECT_EQ(TruncationRule::parse("full").resolve(77), 77);
  EXPECT_EQ(TruncationRule::parse("0.1d").resolve(3), 1);
  EXPECT_EQ(TruncationRule::parse("0.2d").describe(), "0.2d");
  EXPECT_EQ(TruncationRule::parse("full").describe(), "full");
  EXPECT_EQ(TruncationRule::parse("2").describe(), "2");
  for (const char* bad : {"", "0", "-3", "abc", "1.5d", "0d", "3x"}) {
    EXPECT_THROW(TruncationRule::parse(bad), ConfigError) << bad;
  }
}

TEST(Enums, TextRoundTrips) {
  for (MethodKind k : {MethodKind::pca, MethodKind::pca_plus, MethodKind::pca_plus_plus,
                       MethodKind::cpca, MethodKind::cpca_pp, MethodKind::cca}) {
    EXPECT_EQ(parse_method_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_method_kind("ica"), ConfigError);
  EXPECT_EQ(parse_theory_overlay("growing"), TheoryOverlay::growing_spike);
  EXPECT_EQ(parse_theory_overlay(to_string(TheoryOverlay::fixed_aspect)), TheoryOverlay::fixed_aspect);
  EXPECT_THROW(parse_theory_overlay("both"), ConfigError);
  EXPECT_TRUE(uses_truncation(MethodKind::cpca_pp));
  EXPECT_FALSE(uses_truncation(MethodKind::cca));
}

TEST(ParseConfig, ReadsEveryField) {
  std::istringstream in(R"(
# comment line
name = custom-run   # trailing comment
description = hand written
model.signal_variances = 50, 25
model.background_variances = 500, 25
model.noise_variance = 2
model.overlap_pairs = 1:1
model.distribution = beta22
model.rotate_seed = 17
sweep.n = 100, 200
sweep.aspect_ratios = 0.5
trials = 4
base_seed = 9
norm = frobenius
scale_factor = 2
overlay = growing
record_timing = no
method.a = pca_plus_plus k=2 s=0.2d eps_rel=1e-8
method.b = cpca k=1 alpha=0.5
method.c = pca_plus k=2 order=magnitude
)");
  const ExperimentConfig c = parse_config(in);
  EXPECT_EQ(c.name, "custom-run");
  EXPECT_EQ(c.description, "hand written");
  EXPECT_EQ(c.model.signal_variances, (std::vector<double>{50, 25}));
  EXPECT_EQ(c.model.background_variances, (std::vector<double>{500, 25}));
  EXPECT_EQ(c.model.noise_variance, 2.0);
  ASSERT_EQ(c.model.overlap_pairs.size(), 1u);
  EXPECT_EQ(c.model.overlap_pairs[0], (OverlapPair{1, 1}));
  EXPECT_EQ(c.model.factor_distribution, FactorDistribution::beta22);
  EXPECT_EQ(c.model.rotate_seed.value(), 17u);
  EXPECT_EQ(c.sample_sizes, (std::vector<int>{100, 200}));
  EXPECT_EQ(c.aspect_ratios, (std::vector<double>{0.5}));
  EXPECT_EQ(c.trials, 4);
  EXPECT_EQ(c.base_seed, 9u);
  EXPECT_EQ(c.norm, SubspaceNorm::frobenius);
  EXPECT_EQ(c.scale_factor, 2.0);
  EXPECT_EQ(c.overlay, TheoryOverlay::growing_spike);
  EXPECT_FALSE(c.record_timing);
  ASSERT_EQ(c.methods.size(), 3u);
  EXPECT_EQ(c.methods[0].label, "a");
  EXPECT_EQ(c.methods[0].kind, MethodKind::pca_plus_plus);
  EXPECT_EQ(c.methods[0].k, 2);
  EXPECT_EQ(c.methods[0].s.kind, TruncationRule::Kind::fraction);
  EXPECT_EQ(c.methods[0].eps_rel, 1e-8);
  EXPECT_EQ(c.methods[1].kind, MethodKind::cpca);
  EXPECT_EQ(c.methods[1].alpha, 0.5);
  EXPECT_EQ(c.methods[1].ordering, EigenOrdering::signed_value);
  EXPECT_EQ(c.methods[2].ordering, EigenOrdering::magnitude);
}

TEST(ParseConfig, PresetSeedsAndKeysOverride) {
  std::istringstream in("trials = 2\npreset = table1\nsweep.n = 100\n");
  const ExperimentConfig c = parse_config(in);
  EXPECT_EQ(c.name, "table1");
  EXPECT_EQ(c.trials, 2);
  EXPECT_EQ(c.sample_sizes, (std::vector<int>{100}));
  EXPECT_EQ(c.methods.size(), preset("table1").methods.size());
}

TEST(ParseConfig, Errors) {
  const char* bad[] = {
      "preset = nope\n",
      "preset = table1\nbogus.key = 1\n",
      "preset = table1\ntrials = many\n",
      "preset = table1\ntrials = 0\n",
      "preset = table1\nsweep.aspect_ratios = 0.1, -1\n",
      "preset = table1\nmethod.x = pca_plus_plus k=5 s=2\n",
      "preset = table1\nmethod.x = pca k=1 q=3\n",
      "preset = table1\nmethod.theory = pca k=1\n",
      "preset = table1\nmodel.distribution = cauchy\n",
      "preset = table1\nnorm = nuclear\n",
      "preset = table1\nmethod.x = pca_plus k=1 order=absolute\n",
      "preset = table1\nmodel.overlap_pairs = 1-1\n",
      "preset = table1\nmodel.signal_variances = 1, 2\n",
      "just a line without equals\n",
      "name = x\nmodel.signal_variances = 1\n",  // no methods
  };
  for (const char* text : bad) {
    std::istringstream in(text);
    EXPECT_THROW(parse_config(in), ConfigError) << text;
  }
}

TEST(LoadConfig, MissingFileIsConfigError) {
  EXPECT_THROW(load_config("/nonexistent/dir/config.txt"), ConfigError);
}

TEST(Presets, CatalogIsCompleteAndValid) {
  const std::set<std::string> required = {
      "fig1-left", "fig1-right", "fig2-left", "fig2-right", "fig3-left", "fig3-right",
      "table1", "table2", "appendix-overlap-moderate-fixed", "appendix-overlap-moderate-growing",
      "appendix-overlap-large-fixed", "appendix-overlap-large-growing", "appendix-beta-fixed",
      "appendix-beta-growing", "appendix-degenerate", "appendix-g-moderate", "appendix-g-large"};
  std::set<std::string> names;
  for (const PresetInfo& info : list_presets()) {
    names.insert(info.name);
    EXPECT_FALSE(info.description.empty());
    const ExperimentConfig c = preset(info.name);
    EXPECT_NO_THROW(c.validate()) << info.name;
    EXPECT_NO_THROW(expand_points(c)) << info.name;
    EXPECT_EQ(c.trials, 50) << info.name;
  }
  for (const auto& name : required) EXPECT_TRUE(names.count(name)) << name;
  EXPECT_THROW(preset("fig9"), ConfigError);
}

TEST(Presets, TableSetups) {
  const ExperimentConfig t1 = preset("table1");
  EXPECT_EQ(t1.sample_sizes, (std::vector<int>{100, 500, 5000}));
  EXPECT_EQ(t1.aspect_ratios, (std::vector<double>{0.4}));
  EXPECT_EQ(t1.model.signal_variances, (std::vector<double>{20, 20, 15, 10, 10}));
  EXPECT_EQ(t1.model.background_variances, (std::vector<double>{500, 500, 200, 100, 100}));
  EXPECT_EQ(preset("table2").model.background_variances, (std::vector<double>{100, 100, 50, 25, 25}));
  std::set<MethodKind> kinds;
  for (const MethodEntry& m : t1.methods) {
    kinds.insert(m.kind);
    EXPECT_EQ(m.k, 5);
    if (m.kind == MethodKind::pca_plus_plus) EXPECT_EQ(m.s.resolve(2000), 10);
  }
  EXPECT_EQ(kinds, (std::set<MethodKind>{MethodKind::pca, MethodKind::pca_plus, MethodKind::pca_plus_plus}));
  const auto points = expand_points(t1);
  ASSERT_EQ(points.size(), 3u);
  EXPECT_EQ(points[2].d, 2000);
  EXPECT_EQ(points[0].d, 40);
  EXPECT_EQ(points[2].preset_label, "table1[n=5000]");
}

TEST(Presets, SpikeFigures) {
  const ExperimentConfig f3r = preset("fig3-right");
  EXPECT_EQ(f3r.scale_factor, 10.0);
  EXPECT_EQ(f3r.overlay, TheoryOverlay::growing_spike);
  EXPECT_EQ(f3r.aspect_ratios, standard_ratio_grid());
  const auto pts = expand_points(f3r);
  EXPECT_EQ(pts.front().d, 500);
  EXPECT_EQ(pts.front().model.signal_variances.back(), 100.0);
  EXPECT_EQ(preset("fig3-left").overlay, TheoryOverlay::fixed_aspect);

  const ExperimentConfig f1l = preset("fig1-left");
  EXPECT_EQ(f1l.sample_sizes, (std::vector<int>{2000}));
  ASSERT_EQ(f1l.signal_to_background.size(), 8u);
  EXPECT_NEAR(f1l.signal_to_background.front(), 0.3125, 1e-12);
  EXPECT_NEAR(f1l.signal_to_background.back(), 0.666, 1e-12);
  const auto sb = expand_points(f1l);
  EXPECT_EQ(sb.front().d, 800);
  EXPECT_NEAR(10.0 / std::sqrt(sb.front().model.background_variances[0]), 0.3125, 1e-12);
  EXPECT_NE(sb.front().preset_label, sb.back().preset_label);

  std::set<int> ranks;
  for (const MethodEntry& m : preset("fig2-right").methods) ranks.insert(m.s.resolve(1000));
  EXPECT_EQ(ranks, (std::set<int>{2, 100, 200, 400}));

  const ExperimentConfig g = preset("appendix-g-large");
  std::set<MethodKind> kinds;
  for (const MethodEntry& m : g.methods) kinds.insert(m.kind);
  EXPECT_EQ(kinds, (std::set<MethodKind>{MethodKind::cpca, MethodKind::cpca_pp, MethodKind::cca,
                                        MethodKind::pca_plus_plus}));
  EXPECT_EQ(g.model.background_variances, (std::vector<double>{500, 400, 300, 200, 100}));

  const ExperimentConfig ov = preset("appendix-overlap-large-fixed");
  EXPECT_EQ(ov.model.overlap_pairs, (std::vector<OverlapPair>{{3, 3}, {4, 4}}));
  EXPECT_EQ(preset("appendix-beta-growing").model.factor_distribution, FactorDistribution::beta22);
  EXPECT_EQ(preset("appendix-degenerate").model.signal_variances,
            (std::vector<double>{50, 50, 20, 15, 10}));
}

TEST(TheoryRows, FixedAndGrowingOverlays) {
  const auto fixed = theory_rows(preset("fig3-left"));
  ASSERT_EQ(fixed.size(), 10u);
  for (const TrialRecord& r : fixed) {
    EXPECT_EQ(r.method, "theory");
    EXPECT_DOUBLE_EQ(r.dist, theory::fixed_aspect_error(10.0, static_cast<double>(r.d) / r.n).dist);
  }
  EXPECT_NEAR(fixed.back().dist, 0.40963, 1e-5);
  const auto growing = theory_rows(preset("fig3-right"));
  ASSERT_EQ(growing.size(), 10u);
  EXPECT_NEAR(growing.back().dist, 0.39057, 1e-5);
  EXPECT_TRUE(theory_rows(preset("fig1-left")).empty());
}

TEST(RunSweep, OneTrialGivesOneRecordPerMethodAndRatio) {
  ExperimentConfig c = small_config();
  c.trials = 1;
  const SweepResult r = run_sweep(c, 1);
  EXPECT_EQ(r.records.size(), 3u * 2u);
  for (const SummaryRow& s : r.summaries) {
    EXPECT_EQ(s.trials, 1);
    EXPECT_EQ(s.sd_dist, 0.0);
  }
}

TEST(RunSweep, OrderIsIndependentOfThreadCount) {
  const ExperimentConfig c = small_config();
  const SweepResult one = run_sweep(c, 1);
  const SweepResult four = run_sweep(c, 4);
  EXPECT_EQ(records_text(one), records_text(four));
  EXPECT_EQ(summary_text(one), summary_text(four));
  for (std::size_t i = 1; i < one.records.size(); ++i) {
    const TrialRecord& a = one.records[i - 1];
    const TrialRecord& b = one.records[i];
    EXPECT_LE(std::tie(a.preset, a.method, a.aspect_ratio, a.trial),
              std::tie(b.preset, b.method, b.aspect_ratio, b.trial));
  }
}

TEST(RunSweep, ReproducibleFiles) {
  const ExperimentConfig c = small_config();
  const auto dir = std::filesystem::temp_directory_path() / "pcapp_harness_repro";
  std::filesystem::create_directories(dir);
  const auto read = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  emit_csv(run_sweep(c, 2).records, dir / "a.csv");
  emit_csv(run_sweep(c, 3).records, dir / "b.csv");
  EXPECT_EQ(read(dir / "a.csv"), read(dir / "b.csv"));
  EXPECT_GT(read(dir / "a.csv").size(), 100u);
  std::filesystem::remove_all(dir);
}

TEST(RunSweep, SeedChangesData) {
  ExperimentConfig c = small_config();
  const std::string base = records_text(run_sweep(c, 1));
  c.base_seed = 6;
  EXPECT_NE(records_text(run_sweep(c, 1)), base);
}

TEST(RunSweep, SharedDatasetAcrossMethods) {
  // With identical views every contrastive method reduces to PCA, so the
  // distances agree exactly only if the methods saw the same draw.
  std::istringstream in(R"(
name = shared
model.signal_variances = 10
model.noise_variance = 0
sweep.n = 40
sweep.aspect_ratios = 0.25
trials = 2
method.a = pca k=1
method.b = pca_plus k=1
)");
  const SweepResult r = run_sweep(parse_config(in), 1);
  ASSERT_EQ(r.records.size(), 4u);
  EXPECT_NEAR(r.records[0].dist, r.records[2].dist, 1e-10);
  EXPECT_NEAR(r.records[1].dist, r.records[3].dist, 1e-10);
}

TEST(RunTrial, ExactRecoveryForContrastiveMethods) {
  std::istringstream in(R"(
name = clean
model.signal_variances = 9, 4, 1
model.noise_variance = 0
sweep.n = 80
sweep.aspect_ratios = 0.25
trials = 1
method.plus = pca_plus k=3
method.pp = pca_plus_plus k=3 s=3
method.cca = cca k=3
)");
  const ExperimentConfig c = parse_config(in);
  const SweepPoint point = expand_points(c).front();
  for (const MethodEntry& m : c.methods) {
    EXPECT_LE(run_trial(c, point, m, 0).dist, 1e-6) << m.label;
  }
}

TEST(RunTrial, EstimatorFailureBecomesNaN) {
  // Noise-free rank-2 data cannot support three canonical pairs.
  std::istringstream in(R"(
name = failing
model.signal_variances = 9, 4
model.noise_variance = 0
sweep.n = 30
sweep.aspect_ratios = 0.5
trials = 2
record_timing = false
method.cca = cca k=3
)");
  const SweepResult r = run_sweep(parse_config(in), 1);
  ASSERT_EQ(r.records.size(), 2u);
  for (const TrialRecord& rec : r.records) EXPECT_TRUE(std::isnan(rec.dist));
  ASSERT_EQ(r.summaries.size(), 1u);
  EXPECT_EQ(r.summaries[0].failed, 2);
  EXPECT_EQ(r.summaries[0].trials, 2);
  EXPECT_TRUE(std::isnan(r.summaries[0].mean_dist));
  std::ostringstream out;
  write_records_csv(out, r.records);
  EXPECT_NE(out.str().find(",nan,"), std::string::npos);
}

TEST(Summarize, ExcludesFailedTrials) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<TrialRecord> recs;
  for (double v : {0.1, 0.3, nan}) {
    TrialRecord r;
    r.preset = "p";
    r.method = "m";
    r.aspect_ratio = 0.4;
    r.dist = v;
    recs.push_back(r);
  }
  const auto rows = summarize(recs);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(rows[0].mean_dist, 0.2, 1e-15);
  EXPECT_NEAR(rows[0].sd_dist, std::sqrt(0.02), 1e-15);
  EXPECT_EQ(rows[0].trials, 3);
  EXPECT_EQ(rows[0].failed, 1);
  EXPECT_EQ(format_cell(rows[0]), "0.200 (0.141)");
}

TEST(Csv, HeaderOnlyAndSingleRecord) {
  std::ostringstream empty;
  write_records_csv(empty, {});
  EXPECT_EQ(empty.str(), std::string(kRecordsHeader) + "\n");

  TrialRecord r;
  r.preset = "table1[n=5000]";
  r.method = "pca_plus_plus";
  r.n = 5000;
  r.d = 2000;
  r.aspect_ratio = 0.4;
  r.s = 10;
  r.trial = 3;
  r.dist = 0.2125;
  r.elapsed_seconds = 1.5;
  std::ostringstream one;
  write_records_csv(one, {r});
  EXPECT_EQ(line_count(one.str()), 2);
  EXPECT_EQ(one.str(), std::string(kRecordsHeader) +
                           "\ntable1[n=5000],pca_plus_plus,5000,2000,0.4,10,3,0.2125,1.5\n");

  r.s.reset();
  std::ostringstream no_s;
  write_records_csv(no_s, {r});
  EXPECT_NE(no_s.str().find(",0.4,,3,"), std::string::npos);

  std::ostringstream summary;
  write_summary_csv(summary, {});
  EXPECT_EQ(summary.str(), std::string(kSummaryHeader) + "\n");
}

TEST(Csv, EmitToUnwritablePathThrows) {
  EXPECT_THROW(emit_csv({}, "/nonexistent/dir/out.csv"), IOError);
  EXPECT_THROW(emit_summary({}, "/nonexistent/dir/out.csv"), IOError);
}

TEST(TrialSeed, DiffersAcrossTrialsAndPoints) {
  const auto points = expand_points(small_config());
  std::set<std::uint64_t> seeds;
  for (const SweepPoint& p : points)
    for (int t = 0; t < 5; ++t) seeds.insert(trial_seed(0, t, p));
  EXPECT_EQ(seeds.size(), points.size() * 5);
  EXPECT_EQ(trial_seed(3, 1, points[0]), trial_seed(3, 1, points[0]));
  EXPECT_EQ(trial_seed(3, 1, points[0]), trial_seed(4, 0, points[0]));
}

}  // namespace
}  // namespace pcapp::harness
