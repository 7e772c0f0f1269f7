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

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "odyn/annotation.hpp"
#include "odyn/overlap.hpp"

namespace odyn {

enum class Trait { Extrav, Agree, Consc, Neuro, Open };
inline constexpr std::size_t kNumTraits = 5;
inline constexpr std::array<Trait, kNumTraits> kAllTraits = {
    Trait::Extrav, Trait::Agree, Trait::Consc, Trait::Neuro, Trait::Open};

std::string_view to_string(Trait t);
std::optional<Trait> trait_from_string(std::string_view name);  // case-insensitive

// Declaration order is the fixed tie-break order used by the classifier.
enum class Level { Low, Moderate, High };

std::string_view to_string(Level level);
char level_letter(Level level);  // L / M / H
std::optional<Level> level_from_string(std::string_view name);

template <typename T>
using PerTrait = std::array<T, kNumTraits>;

inline std::size_t index_of(Trait t) { return static_cast<std::size_t>(t); }

struct SpeakerProfile {
  std::string speaker_id;
  PerTrait<double> scores{};
  PerTrait<bool> possession{};
  PerTrait<Level> lmh{};
};

inline constexpr double kDefaultLmhBand = 0.5;

// Scores CSV: `speaker_id,extrav,agree,consc,neuro,open`, values in [1,5].
std::vector<SpeakerProfile> parse_scores_file(const std::filesystem::path& path);
std::vector<SpeakerProfile> parse_scores_stream(std::istream& in);
void write_scores_csv(std::ostream& out, const std::vector<SpeakerProfile>& profiles);

// Per-trait sample median; even counts average the two middle values.
PerTrait<double> compute_medians(const std::vector<SpeakerProfile>& profiles);

// Low below median - band, High above median + band, Moderate in between with
// both edges inclusive. Comparisons allow 1e-9 slack so decimal boundaries
// such as 3.2 + 0.5 == 3.7 land on Moderate.
Level label_lmh(double score, double median, double band = kDefaultLmhBand);

struct LabelOptions {
  double band = kDefaultLmhBand;
  // Median over everyone except the labelled speaker.
  bool holdout_median = false;
};

// Fills possession (score >= median) and L/M/H labels in place.
void assign_labels(std::vector<SpeakerProfile>& profiles, const LabelOptions& options = {});

// (sum over possessing partners of the count against them) / (#possessing
// partners); nullopt when no partner possesses `trait`. `counts` holds speaker
// i's outgoing PairCounts (initiator == i) and may include other pairs, which
// are ignored.
std::optional<double> trait_feature(const std::string& speaker,
                                    const std::vector<PairCounts>& counts,
                                    const std::vector<const SpeakerProfile*>& partners,
                                    Trait trait, SsKind kind);

inline constexpr std::size_t kNumFeatures = 12;

struct FeatureRow {
  std::string speaker_id;
  std::string conversation_id;
  PerTrait<std::optional<double>> trait_iss{};
  PerTrait<std::optional<double>> trait_nss{};
  double two_spk = 0;
  double three_plus_spk = 0;
  PerTrait<Level> labels{};

  // ISS x5, NSS x5, 2-spk, 3+-spk, in trait order.
  std::array<std::optional<double>, kNumFeatures> values() const;
  void set_value(std::size_t feature, double v);
  bool complete() const;
};

// "Extrav ISS", ..., "Open NSS", "2 spks overlap", "3+ spks overlap".
const std::array<std::string, kNumFeatures>& feature_names();

struct FeatureOptions {
  // Divide every count by the conversation length in minutes.
  bool per_minute = false;
};

// One row per profiled speaker, in profile order. Profiles must carry labels
// (see assign_labels). Throws MissingProfile, MissingConversation or
// DuplicateSpeaker when IPUs and scores disagree.
std::vector<FeatureRow> assemble_features(const std::vector<Conversation>& conversations,
                                          const std::vector<SpeakerProfile>& profiles,
                                          const FeatureOptions& options = {});

// 12 feature columns + 5 label columns; MISSING is an empty cell.
void write_features_csv(std::ostream& out, const std::vector<FeatureRow>& rows);
std::vector<FeatureRow> read_features_csv(std::istream& in);

// Checks that every IPU speaker is profiled, every profile has IPUs, and that
// no speaker appears in two conversations.
void check_corpus_consistency(const std::vector<Conversation>& conversations,
                              const std::vector<SpeakerProfile>& profiles);

}  // namespace odyn
