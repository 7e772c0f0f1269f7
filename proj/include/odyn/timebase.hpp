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
#include <optional>
#include <string>
#include <string_view>

namespace odyn {

// Times are integer microseconds so that interval endpoints compare exactly.
using Micros = std::int64_t;

inline constexpr Micros kMicrosPerSecond = 1'000'000;

// Parses a non-negative decimal number of seconds ("12", "0.25", "3.0000005")
// into microseconds, rounding half-up on the seventh fractional digit.
// Returns nullopt on anything else (signs, exponents, junk).
std::optional<Micros> parse_seconds(std::string_view text);

// Seconds -> microseconds, rounding half-up.
Micros to_micros(double seconds);

inline double to_seconds(Micros us) {
  return static_cast<double>(us) / static_cast<double>(kMicrosPerSecond);
}

// Fixed six-decimal rendering; inverse of parse_seconds.
std::string format_seconds(Micros us);

}  // namespace odyn
