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
#include <string>
#include <vector>

#include "odyn/annotation.hpp"
#include "odyn/features.hpp"
#include "odyn/pipeline.hpp"

namespace odyn {

// Multiplies a speaker's overlap-initiation probability when their label for
// `trait` equals `level`. Effects on several traits multiply together.
struct PlantedEffect {
  Trait trait = Trait::Extrav;
  Level level = Level::High;
  double factor = 1.0;
};

struct SynthSpec {
  int n_conversations = 60;
  std::vector<int> team_sizes = {3, 4};
  double duration = 1800.0;         // seconds per conversation
  double base_ipu_rate = 0.1;       // talk-spurt onsets per second of pause
  double mean_talk = 2.0;           // seconds
  double base_overlap_prob = 0.15;  // per (holder IPU, partner)
  double score_mean = 3.4;
  double score_sd = 0.6;
  double lmh_band = 0.5;
  std::vector<PlantedEffect> effects;
  std::uint64_t seed = 0;

  // Throws InvalidSpec.
  void validate() const;
};

struct SynthCorpus {
  std::vector<IpuRecord> ipus;  // raw, before merge/filter
  std::vector<SpeakerProfile> profiles;
};

// Scores come from a normal truncated to [1, 5]; speech from per-speaker
// alternating talk/pause renewal processes with exponential holding times;
// planted overlaps start uniformly inside a partner's IPU and end before it
// (NSS) or after it (ISS) with equal probability.
SynthCorpus generate_synthetic(const SynthSpec& spec);

std::string synth_spec_to_json(const SynthSpec& spec);
SynthSpec synth_spec_from_json(const std::string& json, SynthSpec base = {});

// "Extrav:High:2.0"
PlantedEffect parse_effect(const std::string& text);

// Generates a corpus and writes it as a bundle through the same hygiene as
// `ingest`; the spec is saved alongside as synth_spec.json.
Bundle cmd_synth(const SynthSpec& spec, const PipelineConfig& config,
                 const std::filesystem::path& out_dir);

}  // namespace odyn
