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

#include "odyn/timebase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace odyn {

std::optional<Micros> parse_seconds(std::string_view text) {
  std::size_t pos = 0;
  constexpr Micros kLimit = std::numeric_limits<Micros>::max() / 100;
  Micros whole = 0;
  int int_digits = 0;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
    whole = whole * 10 + (text[pos] - '0');
    if (whole > kLimit / kMicrosPerSecond) return std::nullopt;
    ++pos;
    ++int_digits;
  }
  Micros frac = 0;
  int frac_digits = 0;
  bool round_up = false;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (frac_digits < 6) {
        frac = frac * 10 + (text[pos] - '0');
      } else if (frac_digits == 6) {
        round_up = text[pos] >= '5';
      }
      ++pos;
      ++frac_digits;
    }
  }
  if (pos != text.size() || (int_digits == 0 && frac_digits == 0)) {
    return std::nullopt;
  }
  for (int d = std::min(frac_digits, 6); d < 6; ++d) frac *= 10;
  Micros magnitude = whole * kMicrosPerSecond + frac;
  return round_up ? magnitude + 1 : magnitude;
}

Micros to_micros(double seconds) {
  return static_cast<Micros>(std::floor(seconds * kMicrosPerSecond + 0.5));
}

std::string format_seconds(Micros us) {
  const bool negative = us < 0;
  const Micros mag = negative ? -us : us;
  return fmt::format("{}{}.{:06d}", negative ? "-" : "", mag / kMicrosPerSecond,
                     mag % kMicrosPerSecond);
}

}  // namespace odyn
