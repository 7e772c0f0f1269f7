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

#include <string>
#include <string_view>
#include <vector>

#include "odyn/annotation.hpp"

namespace odyn {

// ISS: the initiator outlasts the holder (the floor changes hands).
// NSS: the initiator stops while the holder continues.
// Ambiguous: both stop at the same instant; counted as neither.
enum class SsKind { Iss, Nss, Ambiguous };

std::string_view to_string(SsKind kind);

struct SsEvent {
  std::string initiator;  // later starter
  std::string holder;     // was already speaking
  SsKind kind = SsKind::Ambiguous;
  Micros overlap_start = 0;
  Micros overlap_end = 0;

  friend bool operator==(const SsEvent&, const SsEvent&) = default;
};

// Directional: `initiator` started inside an IPU of `holder`.
struct PairCounts {
  std::string initiator;
  std::string holder;
  long iss = 0;
  long nss = 0;
  long ambiguous = 0;

  friend bool operator==(const PairCounts&, const PairCounts&) = default;
};

struct OverlapCounts {
  std::string speaker_id;
  long two_spk = 0;
  long three_plus_spk = 0;

  friend bool operator==(const OverlapCounts&, const OverlapCounts&) = default;
};

// Events where an IPU of B begins strictly inside an IPU of A. Both lists must
// be sorted, pairwise disjoint, and single-speaker.
std::vector<SsEvent> classify_pair_events(const std::vector<IpuRecord>& b_ipus,
                                          const std::vector<IpuRecord>& a_ipus);

// All events of a conversation over every ordered speaker pair, ordered by
// (initiator roster position, holder roster position, time).
std::vector<SsEvent> conversation_events(const Conversation& conv);

// One entry per ordered pair in roster order; third speakers are ignored.
// Throws TooFewSpeakers for fewer than two speakers.
std::vector<PairCounts> pair_counts(const Conversation& conv);

// Overlap episodes are maximal runs with at least two active speakers. Each
// episode is credited to every speaker active anywhere inside it, as 2-spk if
// its peak concurrency is 2 and as 3+-spk otherwise. The result lists
// `roster` in order (zeros included); an empty roster lists every speaker
// seen in the timeline in first-seen order.
std::vector<OverlapCounts> multiparty_overlap_counts(
    const std::vector<FloorInterval>& timeline,
    const std::vector<std::string>& roster = {});

// JSON-lines export, one event per line.
std::string events_to_jsonl(const std::string& conversation_id,
                            const std::vector<SsEvent>& events);

}  // namespace odyn
