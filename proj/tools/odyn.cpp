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

// odyn: overlap-dynamics feature extraction, ANOVA, and personality
// recognition evaluation over IPU-annotated multiparty dialogue.
//
// Exit codes: 0 success, 2 input error, 1 internal error.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "odyn/error.hpp"
#include "odyn/pipeline.hpp"
#include "odyn/synth.hpp"

namespace {

using odyn::PipelineConfig;

// Flags that mirror PipelineConfig; only explicitly given ones override.
struct ConfigFlags {
  std::string config_file;
  std::optional<double> pause_threshold, min_ipu, test_frac, lmh_band, alpha;
  std::optional<int> knn_k, splits;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> label_mode, baseline, split_test;
  bool holdout_median = false, per_minute = false, unpaired = false;

  void add_to(CLI::App* app, bool hygiene, bool analysis, bool eval) {
    app->add_option("--config", config_file, "JSON config file")->check(CLI::ExistingFile);
    if (hygiene) {
      app->add_option("--pause-threshold", pause_threshold, "merge gap in seconds (0.2)");
      app->add_option("--min-ipu", min_ipu, "minimum IPU duration in seconds (0.5)");
    }
    if (analysis) {
      app->add_option("--lmh-band", lmh_band, "Low/High band around the median (0.5)");
      app->add_flag("--holdout-median", holdout_median,
                    "label each speaker against the median of the others");
      app->add_flag("--per-minute", per_minute, "normalize counts per conversation minute");
      app->add_option("--alpha", alpha, "significance level (0.05)");
    }
    if (eval) {
      app->add_option("--knn-k", knn_k, "neighbors for imputation (5)");
      app->add_option("--splits", splits, "train/test splits (10)");
      app->add_option("--test-frac", test_frac, "test fraction (0.3)");
      app->add_option("--label-mode", label_mode, "LMH3 or LH2")
          ->check(CLI::IsMember({"LMH3", "LH2"}));
      app->add_option("--baseline", baseline, "uniform or prior")
          ->check(CLI::IsMember({"uniform", "prior"}));
      app->add_flag("--unpaired", unpaired, "independent instead of paired t-test");
      app->add_option("--t-test", split_test, "paired, unpaired or corrected")
          ->check(CLI::IsMember({"paired", "unpaired", "corrected"}));
    }
  }

  PipelineConfig resolve(PipelineConfig base) const {
    if (!config_file.empty()) base = odyn::load_config_file(config_file, base);
    if (pause_threshold) base.pause_threshold = *pause_threshold;
    if (min_ipu) base.min_ipu = *min_ipu;
    if (test_frac) base.test_frac = *test_frac;
    if (lmh_band) base.lmh_band = *lmh_band;
    if (alpha) base.alpha = *alpha;
    if (knn_k) base.knn_k = *knn_k;
    if (splits) base.splits = *splits;
    if (seed) base.seed = *seed;
    if (label_mode) base.label_mode = *label_mode == "LH2" ? odyn::LabelMode::Lh2
                                                           : odyn::LabelMode::Lmh3;
    if (baseline) base.baseline = *baseline == "prior" ? odyn::BaselineMode::Prior
                                                       : odyn::BaselineMode::Uniform;
    if (holdout_median) base.holdout_median = true;
    if (per_minute) base.per_minute = true;
    if (split_test) base.split_test = *odyn::split_test_from_string(*split_test);
    if (unpaired) base.split_test = odyn::SplitTest::Unpaired;
    base.validate();
    return base;
  }
};

std::vector<odyn::Trait> parse_traits(const std::vector<std::string>& names) {
  std::vector<odyn::Trait> out;
  for (const auto& n : names) {
    auto t = odyn::trait_from_string(n);
    if (!t) throw odyn::Error(odyn::ErrorKind::InvalidConfig, "unknown trait '" + n + "'");
    out.push_back(*t);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Overlap dynamics and personality recognition toolkit"};
  app.require_subcommand(1);

  ConfigFlags flags;
  std::string bundle_dir, out_dir;
  std::vector<std::string> trait_names;

  auto* ingest = app.add_subcommand("ingest", "normalize IPUs and scores into a bundle");
  std::string ipu_path, scores_path, format;
  ingest->add_option("--ipus", ipu_path, "IPU CSV/TSV file")->required()->check(CLI::ExistingFile);
  ingest->add_option("--scores", scores_path, "Big-5 scores CSV")
      ->required()
      ->check(CLI::ExistingFile);
  ingest->add_option("--format", format, "csv or tsv (default: by extension)")
      ->check(CLI::IsMember({"csv", "tsv"}));
  ingest->add_option("--out", out_dir, "bundle directory")->required();
  flags.add_to(ingest, true, true, true);

  auto* features = app.add_subcommand("features", "export features, events, and timelines");
  features->add_option("--bundle", bundle_dir)->required()->check(CLI::ExistingDirectory);
  features->add_option("--out", out_dir)->required();
  flags.add_to(features, false, true, false);

  auto* anova = app.add_subcommand("anova", "one-way ANOVA per trait and feature");
  anova->add_option("--bundle", bundle_dir)->required()->check(CLI::ExistingDirectory);
  anova->add_option("--out", out_dir)->required();
  anova->add_option("--trait", trait_names, "restrict to traits (repeatable)");
  flags.add_to(anova, false, true, false);

  auto* eval = app.add_subcommand("eval", "Naive Bayes vs. random baseline over splits");
  eval->add_option("--bundle", bundle_dir)->required()->check(CLI::ExistingDirectory);
  eval->add_option("--out", out_dir)->required();
  eval->add_option("--seed", flags.seed, "master seed")->required();
  eval->add_option("--trait", trait_names, "restrict to traits (repeatable)");
  flags.add_to(eval, false, true, true);

  auto* synth = app.add_subcommand("synth", "generate a synthetic bundle");
  odyn::SynthSpec spec;
  std::string spec_file;
  std::vector<std::string> effects;
  std::uint64_t synth_seed = 0;
  synth->add_option("--out", out_dir)->required();
  synth->add_option("--seed", synth_seed, "generator seed")->required();
  synth->add_option("--spec", spec_file, "JSON synth spec")->check(CLI::ExistingFile);
  auto* n_conv = synth->add_option("--conversations", spec.n_conversations);
  auto* sizes = synth->add_option("--team-sizes", spec.team_sizes)->delimiter(',');
  auto* dur = synth->add_option("--duration", spec.duration, "seconds");
  auto* rate = synth->add_option("--ipu-rate", spec.base_ipu_rate, "onsets per pause second");
  auto* talk = synth->add_option("--mean-talk", spec.mean_talk, "seconds");
  auto* prob = synth->add_option("--overlap-prob", spec.base_overlap_prob);
  synth->add_option("--effect", effects, "Trait:Level:factor (repeatable)");
  flags.add_to(synth, true, false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (ingest->parsed()) {
      std::optional<odyn::IpuFormat> fmt;
      if (format == "csv") fmt = odyn::IpuFormat::Csv;
      if (format == "tsv") fmt = odyn::IpuFormat::Tsv;
      const auto b = odyn::cmd_ingest(ipu_path, fmt, scores_path, flags.resolve({}), out_dir);
      std::cout << "bundle " << out_dir << " (" << b.conversations.size() << " conversations, "
                << b.profiles.size() << " speakers, hash " << b.content_hash << ")\n";
    } else if (synth->parsed()) {
      if (!spec_file.empty()) {
        // Explicit flags still win over the file.
        odyn::SynthSpec from_file = odyn::synth_spec_from_json(odyn::read_file(spec_file));
        if (!n_conv->count()) spec.n_conversations = from_file.n_conversations;
        if (!sizes->count()) spec.team_sizes = from_file.team_sizes;
        if (!dur->count()) spec.duration = from_file.duration;
        if (!rate->count()) spec.base_ipu_rate = from_file.base_ipu_rate;
        if (!talk->count()) spec.mean_talk = from_file.mean_talk;
        if (!prob->count()) spec.base_overlap_prob = from_file.base_overlap_prob;
        spec.score_mean = from_file.score_mean;
        spec.score_sd = from_file.score_sd;
        spec.lmh_band = from_file.lmh_band;
        spec.effects = from_file.effects;
      }
      for (const auto& e : effects) spec.effects.push_back(odyn::parse_effect(e));
      spec.seed = synth_seed;
      PipelineConfig config = flags.resolve({});
      config.seed = synth_seed;
      const auto b = odyn::cmd_synth(spec, config, out_dir);
      std::cout << "bundle " << out_dir << " (" << b.conversations.size() << " conversations, "
                << b.profiles.size() << " speakers, hash " << b.content_hash << ")\n";
    } else {
      const auto bundle = odyn::load_bundle(bundle_dir);
      PipelineConfig config = flags.resolve(bundle.config);
      if (features->parsed()) {
        odyn::cmd_features(bundle, config, out_dir);
      } else if (anova->parsed()) {
        const auto results = odyn::cmd_anova(bundle, config, out_dir, parse_traits(trait_names));
        std::cout << results.size() << " ANOVA rows written to " << out_dir << "\n";
      } else if (eval->parsed()) {
        const auto reports = odyn::cmd_eval(bundle, config, out_dir, parse_traits(trait_names));
        std::cout << reports.size() << " evaluation reports written to " << out_dir << "\n";
      }
    }
  } catch (const odyn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.is_input_error() ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
