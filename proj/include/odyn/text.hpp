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

namespace odyn {

std::string_view trim(std::string_view s);

// Splits on `delim` and trims each field. No quoting support: ids and
// numbers in the formats read here never contain the delimiter.
std::vector<std::string> split_fields(std::string_view line, char delim);

// Plain decimal/float parse of the whole (trimmed) string.
bool parse_double(std::string_view s, double& out);

}  // namespace odyn
