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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "odyn/annotation.hpp"
#include "odyn/features.hpp"
#include "odyn/model.hpp"
#include "odyn/stats.hpp"

namespace odyn {

struct PipelineConfig {
  double pause_threshold = 0.2;  // seconds
  double min_ipu = 0.5;          // seconds
  int knn_k = 5;
  int splits = 10;
  double test_frac = 0.3;
  double lmh_band = 0.5;
  std::optional<std::uint64_t> seed;
  LabelMode label_mode = LabelMode::Lmh3;
  bool holdout_median = false;
  bool per_minute = false;
  SplitTest split_test = SplitTest::Paired;
  BaselineMode baseline = BaselineMode::Uniform;
  double alpha = 0.05;

  // Throws InvalidConfig.
  void validate() const;

  LabelOptions label_options() const { return {lmh_band, holdout_median}; }
  FeatureOptions feature_options() const { return {per_minute}; }
  // Requires a seed.
  ExperimentConfig experiment() const;
};

std::string config_to_json(const PipelineConfig& config);
// Keys present in `json` override `base`; unknown keys are an InvalidConfig.
PipelineConfig config_from_json(const std::string& json, PipelineConfig base = {});
PipelineConfig load_config_file(const std::filesystem::path& path, PipelineConfig base = {});

// On-disk corpus produced by `ingest` and `synth`:
//   ipus.csv      merged + filtered IPUs, conversation/roster/start order
//   roster.csv    conversation_id,speaker_id (keeps speakers left with no IPUs)
//   scores.csv    Big-5 scores
//   config.json   configuration snapshot
//   manifest.json counts and a SHA-256 over the three data files
struct Bundle {
  std::vector<Conversation> conversations;
  std::vector<SpeakerProfile> profiles;  // scores only; labels not yet assigned
  PipelineConfig config;
  std::string content_hash;
};

// Applies hygiene, checks IPU/score consistency, writes the bundle, and
// returns it.
Bundle write_bundle(const std::filesystem::path& dir, const std::vector<IpuRecord>& raw_ipus,
                    const std::vector<SpeakerProfile>& profiles, const PipelineConfig& config);
Bundle load_bundle(const std::filesystem::path& dir);

Bundle cmd_ingest(const std::filesystem::path& ipu_path, std::optional<IpuFormat> format,
                  const std::filesystem::path& scores_path, const PipelineConfig& config,
                  const std::filesystem::path& out_dir);

// Labelled profiles and the 12-feature table for a bundle.
std::vector<FeatureRow> bundle_features(const Bundle& bundle, const PipelineConfig& config);

// features.csv, events.jsonl, overlap_counts.csv, timelines/<conversation>.json
void cmd_features(const Bundle& bundle, const PipelineConfig& config,
                  const std::filesystem::path& out_dir);

// anova.csv + anova.json over `traits` (all five when empty).
std::vector<AnovaResult> cmd_anova(const Bundle& bundle, const PipelineConfig& config,
                                   const std::filesystem::path& out_dir,
                                   const std::vector<Trait>& traits = {});

// eval_<mode>.csv + eval_<mode>.json. Throws InvalidConfig without a seed.
std::vector<EvalReport> cmd_eval(const Bundle& bundle, const PipelineConfig& config,
                                 const std::filesystem::path& out_dir,
                                 const std::vector<Trait>& traits = {});

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace odyn
