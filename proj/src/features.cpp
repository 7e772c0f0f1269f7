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

#include "odyn/features.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include <fmt/format.h>

#include "odyn/error.hpp"
#include "odyn/text.hpp"

namespace odyn {

std::string_view to_string(Trait t) {
  switch (t) {
    case Trait::Extrav: return "Extrav";
    case Trait::Agree: return "Agree";
    case Trait::Consc: return "Consc";
    case Trait::Neuro: return "Neuro";
    case Trait::Open: return "Open";
  }
  return "?";
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::optional<Trait> trait_from_string(std::string_view name) {
  const auto n = lower(name);
  for (Trait t : kAllTraits) {
    if (lower(to_string(t)) == n) return t;
  }
  return std::nullopt;
}

std::string_view to_string(Level level) {
  switch (level) {
    case Level::Low: return "Low";
    case Level::Moderate: return "Moderate";
    case Level::High: return "High";
  }
  return "?";
}

char level_letter(Level level) { return to_string(level)[0]; }

std::optional<Level> level_from_string(std::string_view name) {
  const auto n = lower(name);
  for (Level l : {Level::Low, Level::Moderate, Level::High}) {
    if (lower(to_string(l)) == n || n == std::string(1, std::tolower(level_letter(l)))) {
      return l;
    }
  }
  return std::nullopt;
}

std::vector<SpeakerProfile> parse_scores_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open scores file " + path.string());
  return parse_scores_stream(in);
}

std::vector<SpeakerProfile> parse_scores_stream(std::istream& in) {
  std::vector<SpeakerProfile> out;
  std::string line;
  int line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line, ',');
    if (first) {
      first = false;
      if (!fields.empty() && lower(fields[0]) == "speaker_id") continue;
    }
    const std::string where = "scores row " + std::to_string(line_no);
    if (fields.size() != 1 + kNumTraits) {
      throw Error(ErrorKind::MalformedRow, where + ": expected 6 columns, got " +
                                               std::to_string(fields.size()));
    }
    SpeakerProfile p;
    p.speaker_id = fields[0];
    if (p.speaker_id.empty()) throw Error(ErrorKind::MalformedRow, where + ": empty speaker id");
    for (std::size_t t = 0; t < kNumTraits; ++t) {
      double v = 0;
      if (!parse_double(fields[t + 1], v) || v < 1.0 || v > 5.0) {
        throw Error(ErrorKind::MalformedRow,
                    where + ": score '" + fields[t + 1] + "' is not a number in [1,5]");
      }
      p.scores[t] = v;
    }
    out.push_back(std::move(p));
  }
  return out;
}

void write_scores_csv(std::ostream& out, const std::vector<SpeakerProfile>& profiles) {
  out << "speaker_id,extrav,agree,consc,neuro,open\n";
  for (const auto& p : profiles) {
    out << p.speaker_id;
    for (double s : p.scores) out << ',' << fmt::format("{}", s);
    out << '\n';
  }
}

namespace {

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

PerTrait<double> compute_medians(const std::vector<SpeakerProfile>& profiles) {
  if (profiles.empty()) throw Error(ErrorKind::EmptyCorpus, "no speaker profiles");
  PerTrait<double> med{};
  for (std::size_t t = 0; t < kNumTraits; ++t) {
    std::vector<double> col;
    col.reserve(profiles.size());
    for (const auto& p : profiles) col.push_back(p.scores[t]);
    med[t] = median_of(std::move(col));
  }
  return med;
}

Level label_lmh(double score, double median, double band) {
  constexpr double kSlack = 1e-9;
  const double d = score - median;
  if (d < -band - kSlack) return Level::Low;
  if (d > band + kSlack) return Level::High;
  return Level::Moderate;
}

void assign_labels(std::vector<SpeakerProfile>& profiles, const LabelOptions& options) {
  const auto medians = compute_medians(profiles);
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    auto& p = profiles[i];
    for (std::size_t t = 0; t < kNumTraits; ++t) {
      double m = medians[t];
      if (options.holdout_median && profiles.size() > 1) {
        std::vector<double> others;
        others.reserve(profiles.size() - 1);
        for (std::size_t j = 0; j < profiles.size(); ++j) {
          if (j != i) others.push_back(profiles[j].scores[t]);
        }
        m = median_of(std::move(others));
      }
      p.possession[t] = p.scores[t] >= m;
      p.lmh[t] = label_lmh(p.scores[t], m, options.band);
    }
  }
}

std::optional<double> trait_feature(const std::string& speaker,
                                    const std::vector<PairCounts>& counts,
                                    const std::vector<const SpeakerProfile*>& partners,
                                    Trait trait, SsKind kind) {
  long total = 0;
  std::size_t n = 0;
  for (const SpeakerProfile* partner : partners) {
    if (partner->speaker_id == speaker || !partner->possession[index_of(trait)]) continue;
    ++n;
    for (const auto& pc : counts) {
      if (pc.initiator == speaker && pc.holder == partner->speaker_id) {
        total += kind == SsKind::Iss ? pc.iss : kind == SsKind::Nss ? pc.nss : 0;
      }
    }
  }
  if (n == 0) return std::nullopt;
  return static_cast<double>(total) / static_cast<double>(n);
}

std::array<std::optional<double>, kNumFeatures> FeatureRow::values() const {
  std::array<std::optional<double>, kNumFeatures> v;
  for (std::size_t t = 0; t < kNumTraits; ++t) {
    v[t] = trait_iss[t];
    v[kNumTraits + t] = trait_nss[t];
  }
  v[10] = two_spk;
  v[11] = three_plus_spk;
  return v;
}

void FeatureRow::set_value(std::size_t feature, double v) {
  if (feature < kNumTraits) {
    trait_iss[feature] = v;
  } else if (feature < 2 * kNumTraits) {
    trait_nss[feature - kNumTraits] = v;
  } else if (feature == 10) {
    two_spk = v;
  } else {
    three_plus_spk = v;
  }
}

bool FeatureRow::complete() const {
  const auto v = values();
  return std::all_of(v.begin(), v.end(), [](const auto& x) { return x.has_value(); });
}

const std::array<std::string, kNumFeatures>& feature_names() {
  static const auto names = [] {
    std::array<std::string, kNumFeatures> n;
    for (std::size_t t = 0; t < kNumTraits; ++t) {
      n[t] = std::string(to_string(kAllTraits[t])) + " ISS";
      n[kNumTraits + t] = std::string(to_string(kAllTraits[t])) + " NSS";
    }
    n[10] = "2 spks overlap";
    n[11] = "3+ spks overlap";
    return n;
  }();
  return names;
}

void check_corpus_consistency(const std::vector<Conversation>& conversations,
                              const std::vector<SpeakerProfile>& profiles) {
  std::map<std::string, std::string> home;
  for (const auto& conv : conversations) {
    for (const auto& s : conv.roster) {
      auto [it, inserted] = home.try_emplace(s, conv.id);
      if (!inserted) {
        throw Error(ErrorKind::DuplicateSpeaker, "speaker '" + s + "' appears in conversations '" +
                                                     it->second + "' and '" + conv.id + "'");
      }
    }
  }
  std::map<std::string, bool> profiled;
  for (const auto& p : profiles) {
    if (!profiled.try_emplace(p.speaker_id, true).second) {
      throw Error(ErrorKind::DuplicateSpeaker, "speaker '" + p.speaker_id + "' scored twice");
    }
    if (!home.contains(p.speaker_id)) {
      throw Error(ErrorKind::MissingConversation,
                  "speaker '" + p.speaker_id + "' has scores but no IPUs");
    }
  }
  for (const auto& [s, conv] : home) {
    if (!profiled.contains(s)) {
      throw Error(ErrorKind::MissingProfile,
                  "speaker '" + s + "' in conversation '" + conv + "' has no scores");
    }
  }
}

std::vector<FeatureRow> assemble_features(const std::vector<Conversation>& conversations,
                                          const std::vector<SpeakerProfile>& profiles,
                                          const FeatureOptions& options) {
  check_corpus_consistency(conversations, profiles);
  std::map<std::string, const SpeakerProfile*> by_id;
  for (const auto& p : profiles) by_id[p.speaker_id] = &p;

  std::map<std::string, FeatureRow> rows;
  for (const auto& conv : conversations) {
    const auto counts = pair_counts(conv);
    const auto overlaps =
        multiparty_overlap_counts(build_floor_timeline(conv.all_ipus()), conv.roster);
    const double minutes = to_seconds(conv.duration()) / 60.0;
    const double scale = options.per_minute && minutes > 0 ? 1.0 / minutes : 1.0;

    for (std::size_t i = 0; i < conv.roster.size(); ++i) {
      const auto& speaker = conv.roster[i];
      std::vector<const SpeakerProfile*> partners;
      for (const auto& other : conv.roster) {
        if (other != speaker) partners.push_back(by_id.at(other));
      }
      FeatureRow row;
      row.speaker_id = speaker;
      row.conversation_id = conv.id;
      for (Trait t : kAllTraits) {
        auto scaled = [&](std::optional<double> v) -> std::optional<double> {
          if (v) return *v * scale;
          return v;
        };
        row.trait_iss[index_of(t)] =
            scaled(trait_feature(speaker, counts, partners, t, SsKind::Iss));
        row.trait_nss[index_of(t)] =
            scaled(trait_feature(speaker, counts, partners, t, SsKind::Nss));
      }
      row.two_spk = static_cast<double>(overlaps[i].two_spk) * scale;
      row.three_plus_spk = static_cast<double>(overlaps[i].three_plus_spk) * scale;
      row.labels = by_id.at(speaker)->lmh;
      rows.emplace(speaker, std::move(row));
    }
  }
  std::vector<FeatureRow> out;
  out.reserve(profiles.size());
  for (const auto& p : profiles) out.push_back(std::move(rows.at(p.speaker_id)));
  return out;
}

namespace {

const char* kFeatureCsvPrefix = "speaker_id,conversation_id";

std::string csv_column(const std::string& name) {
  std::string col;
  for (char c : name) {
    if (c == ' ') {
      col += '_';
    } else if (c == '+') {
      col += "plus";
    } else {
      col += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  return col;
}

}  // namespace

void write_features_csv(std::ostream& out, const std::vector<FeatureRow>& rows) {
  out << kFeatureCsvPrefix;
  for (const auto& name : feature_names()) out << ',' << csv_column(name);
  for (Trait t : kAllTraits) out << ',' << lower(to_string(t)) << "_label";
  out << '\n';
  for (const auto& r : rows) {
    out << r.speaker_id << ',' << r.conversation_id;
    for (const auto& v : r.values()) {
      out << ',';
      if (v) out << fmt::format("{}", *v);
    }
    for (Level l : r.labels) out << ',' << to_string(l);
    out << '\n';
  }
}

std::vector<FeatureRow> read_features_csv(std::istream& in) {
  std::vector<FeatureRow> out;
  std::string line;
  int line_no = 0;
  constexpr std::size_t kColumns = 2 + kNumFeatures + kNumTraits;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (line_no == 1 && line.rfind(kFeatureCsvPrefix, 0) == 0) continue;
    auto f = split_fields(line, ',');
    const std::string where = "features row " + std::to_string(line_no);
    if (f.size() != kColumns) throw Error(ErrorKind::MalformedRow, where + ": bad column count");
    FeatureRow r;
    r.speaker_id = f[0];
    r.conversation_id = f[1];
    for (std::size_t k = 0; k < kNumFeatures; ++k) {
      const auto& cell = f[2 + k];
      if (cell.empty()) {
        if (k >= 2 * kNumTraits) throw Error(ErrorKind::MalformedRow, where + ": missing count");
        continue;
      }
      double v = 0;
      if (!parse_double(cell, v)) throw Error(ErrorKind::MalformedRow, where + ": bad value");
      r.set_value(k, v);
    }
    for (std::size_t t = 0; t < kNumTraits; ++t) {
      auto l = level_from_string(f[2 + kNumFeatures + t]);
      if (!l) throw Error(ErrorKind::MalformedRow, where + ": bad label");
      r.labels[t] = *l;
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace odyn
