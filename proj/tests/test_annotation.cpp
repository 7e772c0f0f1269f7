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

#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"

#include "odyn/annotation.hpp"
#include "odyn/timebase.hpp"

using namespace odyn;
using testing::ipu;
using testing::sec;

TEST_SUITE("timebase") {
  TEST_CASE("parse_seconds is exact on decimal input") {
    CHECK(parse_seconds("0") == 0);
    CHECK(parse_seconds("1.2") == 1'200'000);
    CHECK(parse_seconds("0.000001") == 1);
    CHECK(parse_seconds("12.") == 12'000'000);
    CHECK(parse_seconds(".5") == 500'000);
    CHECK(parse_seconds("3.0000005") == 3'000'001);  // half-up
    CHECK(parse_seconds("3.00000049") == 3'000'000);
  }

  TEST_CASE("parse_seconds rejects junk") {
    for (const char* bad : {"", "-1", "+1", "1e3", "abc", "1.2.3", ".", " "}) {
      CHECK_MESSAGE(!parse_seconds(bad), bad);
    }
  }

  TEST_CASE("format_seconds round-trips") {
    for (Micros us : {Micros{0}, Micros{1}, Micros{1'234'567}, Micros{3'600'000'000}}) {
      CHECK(parse_seconds(format_seconds(us)) == us);
    }
  }
}

TEST_SUITE("annotation") {
  TEST_CASE("parse maps fields directly") {
    std::istringstream in("c1,a,0.00,1.20\n");
    const auto rows = parse_ipu_stream(in, IpuFormat::Csv);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0] == IpuRecord{"c1", "a", 0, 1'200'000});
  }

  TEST_CASE("parse skips a header and accepts TSV") {
    std::istringstream in("conversation_id\tspeaker_id\tstart_sec\tend_sec\nc1\ta\t0.5\t2\n");
    const auto rows = parse_ipu_stream(in, IpuFormat::Tsv);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].start == 500'000);
    CHECK(rows[0].end == 2'000'000);
  }

  TEST_CASE("empty file gives empty list") {
    std::istringstream in("");
    CHECK(parse_ipu_stream(in, IpuFormat::Csv).empty());
  }

  TEST_CASE("zero-length row is NegativeDuration with row number") {
    std::istringstream in("c1,a,0,1\nc1,a,1.2,1.2\n");
    try {
      parse_ipu_stream(in, IpuFormat::Csv);
      FAIL("no throw");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NegativeDuration);
      CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
  }

  TEST_CASE("malformed rows") {
    for (const char* bad : {"c1,a,0\n", "c1,a,x,1\n", "c1,a,0,1,2\n", ",a,0,1\n"}) {
      std::istringstream in(bad);
      testing::require_error(ErrorKind::MalformedRow,
                             [&] { parse_ipu_stream(in, IpuFormat::Csv); });
    }
  }

  TEST_CASE("write and parse round-trip") {
    std::vector<IpuRecord> rows = {ipu("a", 0, 1.25), ipu("b", 0.333333, 7.000001, "c2")};
    std::ostringstream out;
    write_ipu_csv(out, rows);
    std::istringstream in(out.str());
    CHECK(parse_ipu_stream(in, IpuFormat::Csv) == rows);
  }

  TEST_CASE("merge boundary: strictly less than the threshold merges") {
    const auto merged = merge_into_ipus({ipu("a", 0, 1), ipu("a", 1.1, 2)});
    REQUIRE(merged.size() == 1);
    CHECK(merged[0].start == 0);
    CHECK(merged[0].end == sec(2));

    CHECK(merge_into_ipus({ipu("a", 0, 1), ipu("a", 1.3, 2)}).size() == 2);
    CHECK(merge_into_ipus({ipu("a", 0, 1), ipu("a", 1.2, 2)}).size() == 2);
  }

  TEST_CASE("merge unions overlapping and unsorted input") {
    const auto merged = merge_into_ipus({ipu("a", 3, 4), ipu("a", 0, 2), ipu("a", 1, 2.5)});
    REQUIRE(merged.size() == 2);
    CHECK(merged[0] == ipu("a", 0, 2.5));
    CHECK(merged[1] == ipu("a", 3, 4));
  }

  TEST_CASE("filter boundary") {
    CHECK(filter_short_ipus({ipu("a", 0, 0.4)}).empty());
    CHECK(filter_short_ipus({ipu("a", 0, 0.5)}).size() == 1);
    CHECK(filter_short_ipus({}).empty());
    const auto kept = filter_short_ipus({ipu("a", 5, 6), ipu("a", 0, 0.1), ipu("a", 1, 2)});
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].start == sec(5));
  }

  TEST_CASE("timeline examples") {
    auto tl = build_floor_timeline({ipu("a", 0, 2), ipu("b", 1, 3)});
    REQUIRE(tl.size() == 3);
    CHECK(tl[0] == FloorInterval{0, sec(1), {"a"}});
    CHECK(tl[1] == FloorInterval{sec(1), sec(2), {"a", "b"}});
    CHECK(tl[2] == FloorInterval{sec(2), sec(3), {"b"}});

    tl = build_floor_timeline({ipu("a", 0, 1), ipu("b", 2, 3)});
    REQUIRE(tl.size() == 3);
    CHECK(tl[1] == FloorInterval{sec(1), sec(2), {}});

    tl = build_floor_timeline({ipu("a", 0, 4), ipu("b", 1, 2), ipu("c", 1, 2)});
    REQUIRE(tl.size() == 3);
    CHECK(tl[1] == FloorInterval{sec(1), sec(2), {"a", "b", "c"}});
    CHECK(tl[2] == FloorInterval{sec(2), sec(4), {"a"}});

    CHECK(build_floor_timeline({}).empty());
  }

  TEST_CASE("touching IPUs do not overlap") {
    const auto tl = build_floor_timeline({ipu("a", 0, 1), ipu("b", 1, 2)});
    REQUIRE(tl.size() == 2);
    CHECK(tl[0].active == std::set<std::string>{"a"});
    CHECK(tl[1].active == std::set<std::string>{"b"});
  }

  TEST_CASE("floor labels") {
    const std::vector<std::string> roster = {"a", "b", "c"};
    CHECK(render_floor_label({"a", "b"}, roster) == "aSbS");
    CHECK(render_floor_label({}, roster) == "GX");
    CHECK(render_floor_label({"c"}, roster) == "cS");
    CHECK(render_floor_label({"p2", "p1"}, {"p1", "p2"}) == "aSbS");
    testing::require_error(ErrorKind::UnknownSpeaker,
                           [&] { render_floor_label({"z"}, roster); });
  }

  TEST_CASE("timeline json uses labels and seconds") {
    const auto json = timeline_to_json(build_floor_timeline({ipu("a", 0, 1), ipu("b", 2, 3)}),
                                       {"a", "b"});
    CHECK(json.find("\"GX\"") != std::string::npos);
    CHECK(json.find("\"bS\"") != std::string::npos);
  }

  TEST_CASE("preprocess keeps silent speakers on the roster") {
    const auto convs = preprocess({ipu("a", 0, 2), ipu("b", 0, 0.3), ipu("a", 0, 1, "c2")});
    REQUIRE(convs.size() == 2);
    CHECK(convs[0].id == "c1");
    CHECK(convs[0].roster == std::vector<std::string>{"a", "b"});
    CHECK(convs[0].ipus.at("b").empty());
    CHECK(convs[1].id == "c2");
  }
}

namespace {

std::vector<IpuRecord> random_records(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> spk(0, 3), start(0, 2000), len(1, 300);
  std::vector<IpuRecord> out;
  for (int i = 0; i < n; ++i) {
    const Micros s = start(rng) * 10'000;
    out.push_back({"c", std::string(1, static_cast<char>('a' + spk(rng))), s,
                   s + len(rng) * 10'000});
  }
  return out;
}

}  // namespace

TEST_SUITE("annotation properties") {
  TEST_CASE("timeline tiles the span and round-trips every speaker") {
    std::mt19937_64 rng(11);
    for (int iter = 0; iter < 200; ++iter) {
      const auto conv = preprocess(random_records(rng, 30))[0];
      const auto all = conv.all_ipus();
      if (all.empty()) continue;
      const auto tl = build_floor_timeline(all);
      Micros lo = all[0].start, hi = all[0].end;
      for (const auto& r : all) {
        lo = std::min(lo, r.start);
        hi = std::max(hi, r.end);
      }
      Micros total = 0;
      for (std::size_t i = 0; i < tl.size(); ++i) {
        CHECK(tl[i].end > tl[i].start);
        total += tl[i].end - tl[i].start;
        if (i > 0) {
          CHECK(tl[i].start == tl[i - 1].end);
          CHECK(tl[i].active != tl[i - 1].active);
        }
      }
      CHECK(tl.front().start == lo);
      CHECK(total == hi - lo);

      for (const auto& [spk, ipus] : conv.ipus) {
        std::vector<IpuRecord> rebuilt;
        for (const auto& f : tl) {
          if (!f.active.count(spk)) continue;
          if (!rebuilt.empty() && rebuilt.back().end == f.start) {
            rebuilt.back().end = f.end;
          } else {
            rebuilt.push_back({conv.id, spk, f.start, f.end});
          }
        }
        CHECK(rebuilt == ipus);
      }
    }
  }

  TEST_CASE("merge is idempotent") {
    std::mt19937_64 rng(12);
    for (int iter = 0; iter < 200; ++iter) {
      auto recs = random_records(rng, 20);
      for (auto& r : recs) r.speaker_id = "a";
      const auto once = merge_into_ipus(recs);
      CHECK(merge_into_ipus(once) == once);
      for (std::size_t i = 1; i < once.size(); ++i) {
        CHECK(once[i].start - once[i - 1].end >= kDefaultPauseThreshold);
      }
    }
  }

  TEST_CASE("pipeline is deterministic under row shuffling") {
    std::mt19937_64 rng(13);
    for (int iter = 0; iter < 100; ++iter) {
      auto recs = random_records(rng, 40);
      const auto ref = preprocess(recs);
      std::shuffle(recs.begin(), recs.end(), rng);
      const auto again = preprocess(recs);
      REQUIRE(again.size() == ref.size());
      CHECK(again[0].ipus == ref[0].ipus);
    }
  }
}
