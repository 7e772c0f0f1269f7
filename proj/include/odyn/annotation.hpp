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

#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "odyn/timebase.hpp"

namespace odyn {

// One speaker's interpausal unit, half-open [start, end).
struct IpuRecord {
  std::string conversation_id;
  std::string speaker_id;
  Micros start = 0;
  Micros end = 0;

  Micros duration() const { return end - start; }
  friend bool operator==(const IpuRecord&, const IpuRecord&) = default;
};

// A maximal stretch of the conversation during which exactly `active` speak.
// An empty set is global silence (label GX).
struct FloorInterval {
  Micros start = 0;
  Micros end = 0;
  std::set<std::string> active;

  friend bool operator==(const FloorInterval&, const FloorInterval&) = default;
};

enum class IpuFormat { Csv, Tsv };

inline constexpr Micros kDefaultPauseThreshold = 200'000;
inline constexpr Micros kDefaultMinIpu = 500'000;

// Picks TSV for ".tsv"/".tab" extensions, CSV otherwise.
IpuFormat format_from_path(const std::filesystem::path& path);

// Reads `conversation_id,speaker_id,start_sec,end_sec` rows. A header line is
// accepted (and skipped) when it is the first line. Row numbers in errors are
// 1-based physical line numbers.
std::vector<IpuRecord> parse_ipu_file(const std::filesystem::path& path,
                                      IpuFormat format);
std::vector<IpuRecord> parse_ipu_stream(std::istream& in, IpuFormat format);

void write_ipu_csv(std::ostream& out, const std::vector<IpuRecord>& records);

// Unions same-speaker intervals separated by a silence strictly shorter than
// `pause_threshold`. Records must share one (conversation, speaker).
std::vector<IpuRecord> merge_into_ipus(std::vector<IpuRecord> records,
                                       Micros pause_threshold = kDefaultPauseThreshold);

// Keeps IPUs lasting at least `min_duration`, in input order.
std::vector<IpuRecord> filter_short_ipus(const std::vector<IpuRecord>& records,
                                         Micros min_duration = kDefaultMinIpu);

// One conversation's IPUs after hygiene, plus its roster in first-seen order.
struct Conversation {
  std::string id;
  std::vector<std::string> roster;
  // speaker id -> sorted, pairwise-disjoint IPUs
  std::map<std::string, std::vector<IpuRecord>> ipus;

  std::vector<IpuRecord> all_ipus() const;
  Micros duration() const;  // max(end) - min(start); 0 when empty
};

// Groups raw records by conversation (first-seen order), then per speaker
// applies merge followed by filter. Speakers whose IPUs are all filtered out
// stay on the roster with an empty IPU list.
std::vector<Conversation> preprocess(const std::vector<IpuRecord>& records,
                                     Micros pause_threshold = kDefaultPauseThreshold,
                                     Micros min_duration = kDefaultMinIpu);

// Sweep over all IPU boundaries of one conversation. Per-speaker IPUs must be
// pairwise disjoint. No IPUs gives an empty timeline.
std::vector<FloorInterval> build_floor_timeline(const std::vector<IpuRecord>& records);

// "aSbS" style label; letters a, b, c, ... follow roster position.
std::string render_floor_label(const std::set<std::string>& active,
                               const std::vector<std::string>& roster);

// JSON array of {start, end, label} with times in seconds.
std::string timeline_to_json(const std::vector<FloorInterval>& timeline,
                             const std::vector<std::string>& roster);

}  // namespace odyn
