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

// Brute-force reference for overlap events and episodes: rasterizes every
// speaker onto a fixed tick grid and reads everything off the grid. Slow and
// obvious on purpose; shares no code with the sweep-line implementation.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "odyn/annotation.hpp"
#include "odyn/overlap.hpp"

namespace oracle {

inline constexpr odyn::Micros kTick = 10'000;  // 10 ms

struct TickEvent {
  std::string initiator;
  std::string holder;
  odyn::SsKind kind;
  odyn::Micros overlap_start;
  odyn::Micros overlap_end;
};

struct TickGrid {
  std::vector<std::string> roster;
  std::vector<std::vector<char>> on;  // [speaker][tick]
  std::vector<std::vector<char>> onset;
  long ticks = 0;
};

inline TickGrid rasterize(const odyn::Conversation& conv) {
  TickGrid g;
  g.roster = conv.roster;
  for (const auto& [spk, ipus] : conv.ipus)
    for (const auto& r : ipus) g.ticks = std::max<long>(g.ticks, r.end / kTick + 2);
  g.on.assign(g.roster.size(), std::vector<char>(g.ticks, 0));
  g.onset.assign(g.roster.size(), std::vector<char>(g.ticks, 0));
  for (std::size_t s = 0; s < g.roster.size(); ++s) {
    auto it = conv.ipus.find(g.roster[s]);
    if (it == conv.ipus.end()) continue;
    for (const auto& r : it->second) {
      g.onset[s][r.start / kTick] = 1;
      for (long t = r.start / kTick; t < r.end / kTick; ++t) g.on[s][t] = 1;
    }
  }
  return g;
}

inline long run_end(const std::vector<char>& row, long t) {
  while (t < static_cast<long>(row.size()) && row[t]) ++t;
  return t;
}

// B "starts inside" A when A is on at B's onset tick and A was already on
// at the previous tick without an onset of its own at B's onset tick.
inline std::vector<TickEvent> events(const odyn::Conversation& conv) {
  const TickGrid g = rasterize(conv);
  std::vector<TickEvent> out;
  for (std::size_t b = 0; b < g.roster.size(); ++b) {
    for (std::size_t a = 0; a < g.roster.size(); ++a) {
      if (a == b) continue;
      for (long t = 0; t < g.ticks; ++t) {
        if (!g.onset[b][t]) continue;
        if (t == 0 || !g.on[a][t] || !g.on[a][t - 1] || g.onset[a][t]) continue;
        const long a_end = run_end(g.on[a], t);
        long b_end = t;
        // B's own IPU ends at the first tick that is off or starts a new IPU.
        do {
          ++b_end;
        } while (b_end < g.ticks && g.on[b][b_end] && !g.onset[b][b_end]);
        odyn::SsKind kind = odyn::SsKind::Ambiguous;
        if (b_end < a_end) kind = odyn::SsKind::Nss;
        if (b_end > a_end) kind = odyn::SsKind::Iss;
        out.push_back({g.roster[b], g.roster[a], kind, t * kTick, std::min(a_end, b_end) * kTick});
      }
    }
  }
  return out;
}

inline std::vector<odyn::OverlapCounts> episodes(const odyn::Conversation& conv) {
  const TickGrid g = rasterize(conv);
  std::vector<odyn::OverlapCounts> out;
  for (const auto& s : g.roster) out.push_back({s, 0, 0});
  long t = 0;
  while (t < g.ticks) {
    auto count = [&](long k) {
      int c = 0;
      for (const auto& row : g.on) c += row[k];
      return c;
    };
    if (count(t) < 2) {
      ++t;
      continue;
    }
    int peak = 0;
    std::set<std::size_t> who;
    while (t < g.ticks && count(t) >= 2) {
      peak = std::max(peak, count(t));
      for (std::size_t s = 0; s < g.roster.size(); ++s)
        if (g.on[s][t]) who.insert(s);
      ++t;
    }
    for (std::size_t s : who) (peak == 2 ? out[s].two_spk : out[s].three_plus_spk)++;
  }
  return out;
}

// Up to `max_speakers` speakers and `max_ipus` IPUs in total, all endpoints
// on the tick grid, per-speaker IPUs separated by at least one tick.
inline odyn::Conversation random_conversation(std::mt19937_64& rng, int max_speakers,
                                              int max_ipus) {
  std::uniform_int_distribution<int> n_spk(1, max_speakers);
  std::uniform_int_distribution<int> len(1, 40);
  std::uniform_int_distribution<int> gap(1, 40);
  odyn::Conversation conv;
  conv.id = "rand";
  const int speakers = n_spk(rng);
  const int total = std::uniform_int_distribution<int>(0, max_ipus)(rng);
  std::vector<int> per(speakers, 0);
  for (int i = 0; i < total; ++i) per[std::uniform_int_distribution<int>(0, speakers - 1)(rng)]++;
  for (int s = 0; s < speakers; ++s) {
    const std::string id = "s" + std::to_string(s);
    conv.roster.push_back(id);
    auto& list = conv.ipus[id];
    long t = std::uniform_int_distribution<int>(0, 20)(rng);
    for (int i = 0; i < per[s]; ++i) {
      const long start = t;
      const long end = start + len(rng);
      list.push_back({conv.id, id, start * kTick, end * kTick});
      t = end + gap(rng);
    }
  }
  return conv;
}

}  // namespace oracle
