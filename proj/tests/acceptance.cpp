// Copyright 2026 The overlapdyn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "oracles/ref_stats.hpp"
#include "oracles/tick_sim.hpp"

#include "odyn/error.hpp"
#include "odyn/features.hpp"
#include "odyn/model.hpp"
#include "odyn/overlap.hpp"
#include "odyn/pipeline.hpp"
#include "odyn/stats.hpp"
#include "odyn/synth.hpp"

namespace fs = std::filesystem;
using namespace odyn;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

fs::path scratch(const std::string& tag) {
  std::random_device rd;
  fs::path p = fs::temp_directory_path() / fmt::format("odyn_acc_{}_{}", tag, rd());
  fs::create_directories(p);
  return p;
}

SynthSpec corpus_spec(std::uint64_t seed, double extrav_high_factor) {
  SynthSpec s;
  s.n_conversations = 60;
  s.seed = seed;
  if (extrav_high_factor != 1.0) s.effects.push_back({Trait::Extrav, Level::High, extrav_high_factor});
  return s;
}

// ---------------------------------------------------------------------------

Outcome worked_example() {
  SpeakerProfile p, q, j;
  p.speaker_id = "p";
  q.speaker_id = "q";
  j.speaker_id = "j";
  p.possession[index_of(Trait::Extrav)] = true;
  q.possession[index_of(Trait::Extrav)] = true;
  j.possession[index_of(Trait::Extrav)] = false;
  const std::vector<PairCounts> counts = {
      {"i", "p", 5, 0, 0}, {"i", "q", 10, 0, 0}, {"i", "j", 12, 0, 0}};
  const auto v = trait_feature("i", counts, {&p, &q, &j}, Trait::Extrav, SsKind::Iss);
  if (!v) return {false, "feature MISSING"};
  return {*v == 7.5, fmt::format("Extrav ISS = {}", *v)};
}

Outcome interval_oracle() {
  std::mt19937_64 rng(20261016);
  long discrepancies = 0, events = 0, episodes = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto conv = oracle::random_conversation(rng, 4, 40);
    const auto got = conversation_events(conv);
    const auto want = oracle::events(conv);
    events += static_cast<long>(want.size());
    if (got.size() != want.size()) {
      ++discrepancies;
    } else {
      for (std::size_t k = 0; k < got.size(); ++k) {
        if (got[k].initiator != want[k].initiator || got[k].holder != want[k].holder ||
            got[k].kind != want[k].kind || got[k].overlap_start != want[k].overlap_start ||
            got[k].overlap_end != want[k].overlap_end) {
          ++discrepancies;
        }
      }
    }
    const auto tl = build_floor_timeline(conv.all_ipus());
    const auto counts = multiparty_overlap_counts(tl, conv.roster);
    const auto ref = oracle::episodes(conv);
    if (counts != ref) ++discrepancies;
    for (const auto& c : ref) episodes += c.two_spk + c.three_plus_spk;
  }
  return {discrepancies == 0,
          fmt::format("{} discrepancies over 1000 conversations ({} events, {} episode credits)",
                      discrepancies, events, episodes)};
}

Outcome statistics_oracles() {
  const auto base = one_way_anova({{1, 2, 3}, {4, 5, 6}});
  // Definitional sums of squares: grand mean 3.5, SSB = 2*3*1.5^2, SSW = 2 + 2.
  const double f_ref = (13.5 / 1) / (4.0 / 4);
  const bool f_ok = std::fabs(base.f - f_ref) < 1e-9;

  std::mt19937_64 rng(7);
  std::normal_distribution<double> n(0, 1);
  std::uniform_int_distribution<int> size(2, 20);
  double worst_f = 0, worst_p = 0;
  for (int i = 0; i < 500; ++i) {
    std::vector<double> a(size(rng)), b(size(rng));
    const double shift = 0.1 * (i % 10);
    for (auto& x : a) x = n(rng);
    for (auto& x : b) x = n(rng) + shift;
    const auto r = one_way_anova({a, b});
    const auto t = oracle::pooled_t(a, b);
    worst_f = std::max(worst_f, std::fabs(r.f - t.t * t.t) / std::max(1.0, t.t * t.t));
    worst_p = std::max(worst_p, std::fabs(r.p - t.p));
  }
  const bool identity_ok = worst_f < 1e-9 && worst_p < 1e-9;

  int rejections = 0;
  for (int i = 0; i < 10000; ++i) {
    std::vector<std::vector<double>> g(3, std::vector<double>(10));
    for (auto& grp : g)
      for (auto& x : grp) x = n(rng);
    if (one_way_anova(g).p < 0.05) ++rejections;
  }
  const double rate = rejections / 10000.0;
  const bool null_ok = std::fabs(rate - 0.05) <= 0.01;
  return {f_ok && identity_ok && null_ok,
          fmt::format("F = {:.12g}; max |F - t^2| rel {:.2g}, max |dp| {:.2g}; null rate {:.4f}",
                      base.f, worst_f, worst_p, rate)};
}

Outcome planted_effect() {
  const fs::path dir = scratch("planted");
  PipelineConfig cfg;
  const Bundle bundle = cmd_synth(corpus_spec(7, 2.0), cfg, dir / "bundle");
  const auto rows = bundle_features(bundle, cfg);

  const auto anova = anova_report(rows, Trait::Extrav, cfg.alpha);
  const AnovaResult* two_spk = nullptr;
  for (const auto& r : anova)
    if (r.feature == "2 spks overlap") two_spk = &r;
  bool l_lt_h = false;
  std::string posthoc;
  for (const auto& p : two_spk->posthoc) {
    if (p.describe() == "L < H") l_lt_h = true;
    posthoc += (posthoc.empty() ? "" : ", ") + p.describe();
  }
  const bool anova_ok = two_spk->p < 0.01 && l_lt_h;

  cfg.seed = 11;
  cfg.label_mode = LabelMode::Lh2;
  cfg.split_test = SplitTest::Paired;
  const auto report = run_experiment(rows, Trait::Extrav, cfg.experiment());
  const bool model_ok = report.f1.model_mean > report.f1.baseline_mean && report.f1.test.p < 0.05;
  fs::remove_all(dir);
  return {anova_ok && model_ok,
          fmt::format("(a) 2-spk ANOVA p = {:.3g}, post hoc [{}]; (b) LH2 F1 {:.3f} vs {:.3f}, "
                      "paired p = {:.3g}",
                      two_spk->p, posthoc, report.f1.model_mean, report.f1.baseline_mean,
                      report.f1.test.p)};
}

struct NullTally {
  int runs = 0;
  int non_significant = 0;
  int skipped = 0;
};

Outcome null_safety(std::string& note) {
  const fs::path dir = scratch("null");
  NullTally paired, corrected, unpaired;
  std::uint64_t seed = 1;
  while (paired.runs < 100) {
    PipelineConfig cfg;
    const Bundle bundle = cmd_synth(corpus_spec(seed, 1.0), cfg, dir / "b");
    const auto rows = bundle_features(bundle, cfg);
    cfg.seed = seed + 1000;
    cfg.label_mode = LabelMode::Lh2;
    ++seed;
    try {
      const auto r = run_experiment(rows, Trait::Extrav, cfg.experiment());
      ++paired.runs;
      if (!(r.f1.test.p < 0.05)) ++paired.non_significant;
      cfg.split_test = SplitTest::Corrected;
      const auto c = run_experiment(rows, Trait::Extrav, cfg.experiment());
      ++corrected.runs;
      if (!(c.f1.test.p < 0.05)) ++corrected.non_significant;
      cfg.split_test = SplitTest::Unpaired;
      const auto u = run_experiment(rows, Trait::Extrav, cfg.experiment());
      ++unpaired.runs;
      if (!(u.f1.test.p < 0.05)) ++unpaired.non_significant;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InsufficientCompleteCases) throw;
      ++paired.skipped;
    }
  }
  fs::remove_all(dir);
  note = fmt::format("same corpora, other split tests: corrected resampled {}/{}, unpaired {}/{} "
                     "non-significant",
                     corrected.non_significant, corrected.runs, unpaired.non_significant,
                     unpaired.runs);
  return {paired.non_significant >= 90,
          fmt::format("default paired t-test: {}/100 Extrav LH2 F1 comparisons non-significant "
                      "({} corpora skipped for too few complete cases)",
                      paired.non_significant, paired.skipped)};
}

std::vector<double> dense(const FeatureRow& r) {
  std::vector<double> v;
  for (const auto& x : r.values()) v.push_back(x.value());
  return v;
}

Outcome protocol_invariants() {
  const fs::path dir = scratch("protocol");
  PipelineConfig cfg;
  cfg.seed = 99;
  const Bundle bundle = cmd_synth(corpus_spec(3, 1.0), cfg, dir / "bundle");
  const auto rows = bundle_features(bundle, cfg);
  const Trait trait = Trait::Consc;
  const std::size_t t = index_of(trait);
  const ExperimentConfig exp = cfg.experiment();

  // Leakage: perturb split 0's test rows; imputed training rows and the split-0
  // model must not notice.
  const std::uint64_t split_seed = derive_seed(exp.seed, 0);
  const SplitPlan plan = make_split(rows, exp.test_frac, split_seed, 0);
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < rows.size(); ++i) pos[rows[i].speaker_id] = i;
  auto perturbed = rows;
  for (const auto& id : plan.test_ids) {
    auto& r = perturbed[pos[id]];
    for (std::size_t f = 0; f < kNumFeatures; ++f) r.set_value(f, *r.values()[f] * 1000 + 77);
  }
  auto train_of = [&](const std::vector<FeatureRow>& src) {
    std::vector<FeatureRow> tr;
    for (const auto& id : plan.train_ids) tr.push_back(src[pos[id]]);
    return knn_impute(tr, exp.knn_k);
  };
  const auto clean_train = train_of(rows);
  const auto dirty_train = train_of(perturbed);
  bool imputation_same = clean_train.size() == dirty_train.size();
  for (std::size_t i = 0; imputation_same && i < clean_train.size(); ++i)
    imputation_same = clean_train[i].values() == dirty_train[i].values();

  std::vector<std::vector<double>> x;
  std::vector<Level> y;
  for (const auto& r : clean_train) {
    x.push_back(dense(r));
    y.push_back(r.labels[t]);
  }
  const auto nb = GaussianNb::fit(x, y);
  std::vector<Level> truth, pred;
  for (const auto& id : plan.test_ids) {
    truth.push_back(perturbed[pos[id]].labels[t]);
    pred.push_back(nb.predict(dense(perturbed[pos[id]])));
  }
  const auto expected = macro_prf(truth, pred, {Level::Low, Level::Moderate, Level::High});
  const auto clean_report = run_experiment(rows, trait, exp);
  const auto dirty_report = run_experiment(perturbed, trait, exp);
  const bool model_same =
      std::fabs(dirty_report.splits[0].model.macro.f1 - expected.macro.f1) < 1e-15 &&
      std::fabs(dirty_report.splits[0].model.macro.precision - expected.macro.precision) < 1e-15;
  const bool baseline_same =
      dirty_report.splits[0].baseline.macro.f1 == clean_report.splits[0].baseline.macro.f1;
  const bool leakage_ok = imputation_same && model_same && baseline_same;

  // Reproducibility: byte-identical report files.
  cmd_eval(bundle, cfg, dir / "r1");
  cmd_eval(bundle, cfg, dir / "r2");
  cmd_anova(bundle, cfg, dir / "r1");
  cmd_anova(bundle, cfg, dir / "r2");
  bool identical = true;
  for (const char* f : {"eval_lmh3.csv", "eval_lmh3.json", "anova.csv", "anova.json"})
    identical = identical && read_file(dir / "r1" / f) == read_file(dir / "r2" / f);

  // Split sizes on assorted corpus sizes.
  bool sizes_ok = true;
  int checked = 0;
  for (std::size_t n = 10; n <= rows.size(); n += 7) {
    std::vector<FeatureRow> subset(rows.begin(), rows.begin() + static_cast<long>(n));
    for (std::uint64_t s = 0; s < 5; ++s) {
      SplitPlan p;
      try {
        p = make_split(subset, 0.3, s);
      } catch (const Error&) {
        continue;
      }
      ++checked;
      sizes_ok = sizes_ok && p.test_ids.size() == static_cast<std::size_t>(std::llround(0.3 * n)) &&
                 p.test_ids.size() + p.train_ids.size() == n;
      for (const auto& id : p.test_ids) sizes_ok = sizes_ok && rows[pos[id]].complete();
    }
  }
  fs::remove_all(dir);
  return {leakage_ok && identical && sizes_ok && checked > 0,
          fmt::format("leakage {} (imputation {}, model {}, baseline {}); byte-identical {}; "
                      "split sizes {} over {} plans",
                      leakage_ok ? "ok" : "FAIL", imputation_same, model_same, baseline_same,
                      identical, sizes_ok, checked)};
}

Outcome report_shape() {
  const fs::path dir = scratch("shape");
  PipelineConfig cfg;
  cfg.seed = 5;
  const fs::path raw = dir / "teams_ipus.csv";
  const fs::path scores = dir / "teams_scores.csv";
  // A corpus in the ingest format, produced independently of the bundle writer.
  {
    const auto corpus = generate_synthetic(corpus_spec(21, 1.0));
    std::ostringstream ipus, sc;
    write_ipu_csv(ipus, corpus.ipus);
    write_scores_csv(sc, corpus.profiles);
    write_file(raw, ipus.str());
    write_file(scores, sc.str());
  }
  const Bundle bundle = cmd_ingest(raw, std::nullopt, scores, cfg, dir / "bundle");
  cmd_anova(bundle, cfg, dir / "out");
  cmd_eval(bundle, cfg, dir / "out");
  cfg.label_mode = LabelMode::Lh2;
  cmd_eval(bundle, cfg, dir / "out");

  auto lines = [](const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
  };
  const auto anova = lines(read_file(dir / "out" / "anova.csv"));
  const auto lmh3 = lines(read_file(dir / "out" / "eval_lmh3.csv"));
  const auto lh2 = lines(read_file(dir / "out" / "eval_lh2.csv"));
  const bool anova_ok =
      anova.size() == 61 &&
      anova[0] == "trait,feature,F,p,stars,mean_L,mean_M,mean_H,sample_size,posthoc";
  const std::string eval_header =
      "trait,label_mode,model_P,model_R,model_F1,baseline_P,baseline_R,baseline_F1,"
      "stars_P,stars_R,stars_F1,p_P,p_R,p_F1";
  const bool eval_ok = lmh3.size() == 6 && lh2.size() == 6 && lmh3[0] == eval_header &&
                       lh2[0] == eval_header && lh2[1].rfind("Extrav,LH2,", 0) == 0;

  bool readme_ok = false;
#ifdef ODYN_SOURCE_DIR
  const fs::path readme = fs::path(ODYN_SOURCE_DIR) / "README.md";
  if (fs::exists(readme)) {
    const std::string text = read_file(readme);
    readme_ok = text.find("not reproducible") != std::string::npos &&
                text.find("ingest") != std::string::npos;
  }
#endif
  fs::remove_all(dir);
  return {anova_ok && eval_ok && readme_ok,
          fmt::format("ingest round-trip ok; anova.csv {} rows, eval CSVs {} + {} rows; README "
                      "disclaimer {}",
                      anova.size() - 1, lmh3.size() - 1, lh2.size() - 1,
                      readme_ok ? "present" : "missing")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    double budget_s;
    std::function<Outcome(std::string&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "worked example (5 + 10) / 2 = 7.5", 1, [](std::string&) { return worked_example(); }},
      {2, "interval algebra vs tick-grid oracle", 10, [](std::string&) { return interval_oracle(); }},
      {3, "statistics oracles", 30, [](std::string&) { return statistics_oracles(); }},
      {4, "planted effect end to end", 60, [](std::string&) { return planted_effect(); }},
      {5, "null safety over 100 corpora", 600, [](std::string& note) { return null_safety(note); }},
      {6, "protocol invariants", 120, [](std::string&) { return protocol_invariants(); }},
      {7, "corpus disclaimer and report shape", 120, [](std::string&) { return report_shape(); }},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    std::string note;
    Outcome out;
    try {
      out = c.run(note);
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = seconds_since(t0);
    const bool in_time = elapsed <= c.budget_s;
    const bool pass = out.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("%s  criterion %d: %s | %s | %.2fs (budget %.0fs)\n", pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), out.detail.c_str(), elapsed, c.budget_s);
    if (!note.empty()) std::printf("      note: %s\n", note.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
