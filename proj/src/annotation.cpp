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

#include "odyn/annotation.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "odyn/error.hpp"
#include "odyn/text.hpp"

namespace odyn {

IpuFormat format_from_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return (ext == ".tsv" || ext == ".tab") ? IpuFormat::Tsv : IpuFormat::Csv;
}

std::vector<IpuRecord> parse_ipu_file(const std::filesystem::path& path,
                                      IpuFormat format) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open IPU file " + path.string());
  return parse_ipu_stream(in, format);
}

std::vector<IpuRecord> parse_ipu_stream(std::istream& in, IpuFormat format) {
  const char delim = format == IpuFormat::Tsv ? '\t' : ',';
  std::vector<IpuRecord> out;
  std::string line;
  int line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line, delim);
    const bool header_candidate = first_content;
    first_content = false;
    if (header_candidate && fields.size() == 4 && fields[0] == "conversation_id" &&
        fields[1] == "speaker_id" && fields[2] == "start_sec" && fields[3] == "end_sec") {
      continue;
    }
    const std::string where = "row " + std::to_string(line_no);
    if (fields.size() != 4) {
      throw Error(ErrorKind::MalformedRow,
                  where + ": expected 4 columns, got " + std::to_string(fields.size()));
    }
    if (fields[0].empty() || fields[1].empty()) {
      throw Error(ErrorKind::MalformedRow, where + ": empty conversation or speaker id");
    }
    const auto start = parse_seconds(fields[2]);
    const auto end = parse_seconds(fields[3]);
    if (!start || !end) {
      throw Error(ErrorKind::MalformedRow, where + ": non-numeric time");
    }
    if (*end <= *start) {
      throw Error(ErrorKind::NegativeDuration,
                  where + ": end " + fields[3] + " <= start " + fields[2]);
    }
    out.push_back({std::move(fields[0]), std::move(fields[1]), *start, *end});
  }
  return out;
}

void write_ipu_csv(std::ostream& out, const std::vector<IpuRecord>& records) {
  out << "conversation_id,speaker_id,start_sec,end_sec\n";
  for (const auto& r : records) {
    out << r.conversation_id << ',' << r.speaker_id << ',' << format_seconds(r.start)
        << ',' << format_seconds(r.end) << '\n';
  }
}

std::vector<IpuRecord> merge_into_ipus(std::vector<IpuRecord> records,
                                       Micros pause_threshold) {
  std::sort(records.begin(), records.end(), [](const IpuRecord& a, const IpuRecord& b) {
    return a.start != b.start ? a.start < b.start : a.end < b.end;
  });
  std::vector<IpuRecord> out;
  for (auto& r : records) {
    if (!out.empty() && r.start - out.back().end < pause_threshold) {
      out.back().end = std::max(out.back().end, r.end);
    } else {
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<IpuRecord> filter_short_ipus(const std::vector<IpuRecord>& records,
                                         Micros min_duration) {
  std::vector<IpuRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [&](const IpuRecord& r) { return r.duration() >= min_duration; });
  return out;
}

std::vector<IpuRecord> Conversation::all_ipus() const {
  std::vector<IpuRecord> out;
  for (const auto& speaker : roster) {
    auto it = ipus.find(speaker);
    if (it != ipus.end()) out.insert(out.end(), it->second.begin(), it->second.end());
  }
  return out;
}

Micros Conversation::duration() const {
  Micros lo = 0, hi = 0;
  bool any = false;
  for (const auto& [speaker, list] : ipus) {
    for (const auto& r : list) {
      lo = any ? std::min(lo, r.start) : r.start;
      hi = any ? std::max(hi, r.end) : r.end;
      any = true;
    }
  }
  return hi - lo;
}

std::vector<Conversation> preprocess(const std::vector<IpuRecord>& records,
                                     Micros pause_threshold, Micros min_duration) {
  std::vector<Conversation> convs;
  std::map<std::string, std::size_t> index;
  std::vector<std::map<std::string, std::vector<IpuRecord>>> raw;
  for (const auto& r : records) {
    auto [it, inserted] = index.try_emplace(r.conversation_id, convs.size());
    if (inserted) {
      convs.push_back(Conversation{r.conversation_id, {}, {}});
      raw.emplace_back();
    }
    auto& conv = convs[it->second];
    auto& bucket = raw[it->second];
    if (!bucket.contains(r.speaker_id)) conv.roster.push_back(r.speaker_id);
    bucket[r.speaker_id].push_back(r);
  }
  // Sorting before merging makes the result independent of row order.
  for (std::size_t c = 0; c < convs.size(); ++c) {
    for (auto& [speaker, list] : raw[c]) {
      convs[c].ipus[speaker] =
          filter_short_ipus(merge_into_ipus(std::move(list), pause_threshold), min_duration);
    }
  }
  return convs;
}

std::vector<FloorInterval> build_floor_timeline(const std::vector<IpuRecord>& records) {
  if (records.empty()) return {};
  // +1 opens a speaker at a boundary, -1 closes it. Closing before opening at
  // equal times keeps touching intervals from overlapping.
  struct Edge {
    Micros at;
    int delta;
    const std::string* speaker;
  };
  std::vector<Edge> edges;
  edges.reserve(records.size() * 2);
  for (const auto& r : records) {
    edges.push_back({r.start, +1, &r.speaker_id});
    edges.push_back({r.end, -1, &r.speaker_id});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.at != b.at ? a.at < b.at : a.delta < b.delta;
  });

  std::vector<FloorInterval> out;
  std::map<std::string, int> depth;
  std::set<std::string> active;
  std::size_t i = 0;
  while (i < edges.size()) {
    const Micros t = edges[i].at;
    for (; i < edges.size() && edges[i].at == t; ++i) {
      int& d = depth[*edges[i].speaker];
      d += edges[i].delta;
      if (d > 0) {
        active.insert(*edges[i].speaker);
      } else {
        active.erase(*edges[i].speaker);
      }
    }
    if (i == edges.size()) break;
    const Micros next = edges[i].at;
    if (!out.empty() && out.back().active == active && out.back().end == t) {
      out.back().end = next;
    } else {
      out.push_back({t, next, active});
    }
  }
  return out;
}

std::string render_floor_label(const std::set<std::string>& active,
                               const std::vector<std::string>& roster) {
  if (active.empty()) return "GX";
  for (const auto& s : active) {
    if (std::find(roster.begin(), roster.end(), s) == roster.end()) {
      throw Error(ErrorKind::UnknownSpeaker, "speaker '" + s + "' not in roster");
    }
  }
  if (roster.size() > 26) {
    throw Error(ErrorKind::InvalidSpec, "floor labels support at most 26 speakers");
  }
  std::string label;
  for (std::size_t pos = 0; pos < roster.size(); ++pos) {
    if (active.contains(roster[pos])) {
      label += static_cast<char>('a' + pos);
      label += 'S';
    }
  }
  return label;
}

std::string timeline_to_json(const std::vector<FloorInterval>& timeline,
                             const std::vector<std::string>& roster) {
  auto arr = nlohmann::json::array();
  for (const auto& iv : timeline) {
    arr.push_back({{"start", to_seconds(iv.start)},
                   {"end", to_seconds(iv.end)},
                   {"label", render_floor_label(iv.active, roster)}});
  }
  return arr.dump();
}

}  // namespace odyn
