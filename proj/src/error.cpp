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

#include "odyn/error.hpp"

namespace odyn {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::NegativeDuration: return "NegativeDuration";
    case ErrorKind::UnknownSpeaker: return "UnknownSpeaker";
    case ErrorKind::TooFewSpeakers: return "TooFewSpeakers";
    case ErrorKind::EmptyCorpus: return "EmptyCorpus";
    case ErrorKind::MissingProfile: return "MissingProfile";
    case ErrorKind::MissingConversation: return "MissingConversation";
    case ErrorKind::DuplicateSpeaker: return "DuplicateSpeaker";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::InsufficientCompleteCases: return "InsufficientCompleteCases";
    case ErrorKind::FeatureNeverObserved: return "FeatureNeverObserved";
    case ErrorKind::SingleClassTraining: return "SingleClassTraining";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

bool Error::is_input_error() const noexcept {
  switch (kind_) {
    case ErrorKind::MalformedRow:
    case ErrorKind::NegativeDuration:
    case ErrorKind::UnknownSpeaker:
    case ErrorKind::TooFewSpeakers:
    case ErrorKind::EmptyCorpus:
    case ErrorKind::MissingProfile:
    case ErrorKind::MissingConversation:
    case ErrorKind::DuplicateSpeaker:
    case ErrorKind::InsufficientCompleteCases:
    case ErrorKind::InvalidSpec:
    case ErrorKind::InvalidConfig:
    case ErrorKind::Io:
      return true;
    default:
      return false;
  }
}

}  // namespace odyn
