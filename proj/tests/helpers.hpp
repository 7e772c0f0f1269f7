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
#include <random>
#include <string>
#include <vector>

#include "doctest.h"

#include "odyn/annotation.hpp"
#include "odyn/error.hpp"
#include "odyn/timebase.hpp"

namespace testing {

inline odyn::Micros sec(double s) { return odyn::to_micros(s); }

inline odyn::IpuRecord ipu(const std::string& spk, double start, double end,
                           const std::string& conv = "c1") {
  return {conv, spk, sec(start), sec(end)};
}

// Expects `fn` to throw odyn::Error of `kind`.
template <typename Fn>
void require_error(odyn::ErrorKind kind, Fn&& fn) {
  try {
    fn();
  } catch (const odyn::Error& e) {
    CHECK_MESSAGE(e.kind() == kind, e.what());
    return;
  }
  FAIL("expected odyn::Error ", odyn::to_string(kind));
}

inline odyn::Conversation make_conversation(const std::vector<odyn::IpuRecord>& records) {
  auto convs = odyn::preprocess(records, 0, 0);
  REQUIRE(convs.size() == 1);
  return convs.front();
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("odyn_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
