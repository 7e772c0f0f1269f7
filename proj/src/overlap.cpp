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

#include "odyn/overlap.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "json.hpp"

#include "odyn/error.hpp"

namespace odyn {

std::string_view to_string(SsKind kind) {
  switch (kind) {
    case SsKind::Iss: return "ISS";
    case SsKind::Nss: return "NSS";
    case SsKind::Ambiguous: return "AMBIGUOUS";
  }
  return "?";
}

std::vector<SsEvent> classify_pair_events(const std::vector<IpuRecord>& b_ipus,
                                          const std::vector<IpuRecord>& a_ipus) {
  std::vector<SsEvent> out;
  for (const auto& b : b_ipus) {
    // Last A IPU starting strictly before b.start; A IPUs are disjoint, so it
    // is the only one that can contain b.start in its interior.
    auto it = std::lower_bound(a_ipus.begin(), a_ipus.end(), b.start,
                               [](const IpuRecord& a, Micros t) { return a.start < t; });
    if (it == a_ipus.begin()) continue;
    const IpuRecord& a = *std::prev(it);
    if (!(a.start < b.start && b.start < a.end)) continue;
    SsKind kind = SsKind::Ambiguous;
    if (b.end < a.end) {
      kind = SsKind::Nss;
    } else if (b.end > a.end) {
      kind = SsKind::Iss;
    }
    out.push_back({b.speaker_id, a.speaker_id, kind, b.start, std::min(a.end, b.end)});
  }
  return out;
}

namespace {

const std::vector<IpuRecord>& ipus_of(const Conversation& conv, const std::string& speaker) {
  static const std::vector<IpuRecord> kNone;
  auto it = conv.ipus.find(speaker);
  return it == conv.ipus.end() ? kNone : it->second;
}

}  // namespace

std::vector<SsEvent> conversation_events(const Conversation& conv) {
  std::vector<SsEvent> out;
  for (const auto& initiator : conv.roster) {
    for (const auto& holder : conv.roster) {
      if (initiator == holder) continue;
      auto ev = classify_pair_events(ipus_of(conv, initiator), ipus_of(conv, holder));
      out.insert(out.end(), ev.begin(), ev.end());
    }
  }
  return out;
}

std::vector<PairCounts> pair_counts(const Conversation& conv) {
  if (conv.roster.size() < 2) {
    throw Error(ErrorKind::TooFewSpeakers,
                "conversation '" + conv.id + "' has " + std::to_string(conv.roster.size()) +
                    " speaker(s)");
  }
  std::vector<PairCounts> out;
  for (const auto& initiator : conv.roster) {
    for (const auto& holder : conv.roster) {
      if (initiator == holder) continue;
      PairCounts pc{initiator, holder};
      for (const auto& ev :
           classify_pair_events(ipus_of(conv, initiator), ipus_of(conv, holder))) {
        switch (ev.kind) {
          case SsKind::Iss: ++pc.iss; break;
          case SsKind::Nss: ++pc.nss; break;
          case SsKind::Ambiguous: ++pc.ambiguous; break;
        }
      }
      out.push_back(std::move(pc));
    }
  }
  return out;
}

std::vector<OverlapCounts> multiparty_overlap_counts(const std::vector<FloorInterval>& timeline,
                                                     const std::vector<std::string>& roster) {
  std::vector<std::string> order = roster;
  if (order.empty()) {
    for (const auto& iv : timeline) {
      for (const auto& s : iv.active) {
        if (std::find(order.begin(), order.end(), s) == order.end()) order.push_back(s);
      }
    }
  }
  std::map<std::string, OverlapCounts> counts;
  for (const auto& s : order) counts[s] = OverlapCounts{s};

  auto credit = [&](const std::set<std::string>& members, std::size_t peak) {
    for (const auto& s : members) {
      auto& c = counts.try_emplace(s, OverlapCounts{s}).first->second;
      (peak >= 3 ? c.three_plus_spk : c.two_spk) += 1;
    }
  };

  std::set<std::string> members;
  std::size_t peak = 0;
  const FloorInterval* prev = nullptr;
  for (const auto& iv : timeline) {
    // A gap between intervals breaks continuity just like a <2 interval.
    const bool continues = prev != nullptr && prev->end == iv.start;
    if (iv.active.size() >= 2) {
      if (!continues || peak == 0) {
        if (peak > 0) credit(members, peak);
        members.clear();
        peak = 0;
      }
      members.insert(iv.active.begin(), iv.active.end());
      peak = std::max(peak, iv.active.size());
    } else if (peak > 0) {
      credit(members, peak);
      members.clear();
      peak = 0;
    }
    prev = &iv;
  }
  if (peak > 0) credit(members, peak);

  std::vector<OverlapCounts> out;
  for (const auto& s : order) out.push_back(counts.at(s));
  return out;
}

std::string events_to_jsonl(const std::string& conversation_id,
                            const std::vector<SsEvent>& events) {
  std::string out;
  for (const auto& ev : events) {
    nlohmann::json j = {{"conversation_id", conversation_id},
                        {"initiator", ev.initiator},
                        {"holder", ev.holder},
                        {"kind", to_string(ev.kind)},
                        {"overlap_start", to_seconds(ev.overlap_start)},
                        {"overlap_end", to_seconds(ev.overlap_end)}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace odyn
