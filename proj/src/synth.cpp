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

#include "odyn/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "json.hpp"

#include "odyn/error.hpp"
#include "odyn/model.hpp"
#include "odyn/text.hpp"

namespace odyn {

void SynthSpec::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidSpec, msg); };
  if (n_conversations < 1) fail("n_conversations must be >= 1");
  if (team_sizes.empty()) fail("team_sizes must not be empty");
  for (int s : team_sizes) {
    if (s < 2 || s > 26) fail("team sizes must lie in [2, 26]");
  }
  if (!(duration > 0)) fail("duration must be > 0");
  if (!(base_ipu_rate > 0)) fail("base_ipu_rate must be > 0");
  if (!(mean_talk > 0)) fail("mean_talk must be > 0");
  if (!(base_overlap_prob >= 0 && base_overlap_prob <= 1)) {
    fail("base_overlap_prob must lie in [0, 1]");
  }
  if (!(score_sd > 0)) fail("score_sd must be > 0");
  if (!(lmh_band >= 0)) fail("lmh_band must be >= 0");
  for (const auto& e : effects) {
    if (!(e.factor > 0)) fail("effect factors must be > 0");
  }
}

namespace {

Micros ms_grid(double seconds) {
  return static_cast<Micros>(std::llround(seconds * 1000.0)) * 1000;
}

}  // namespace

SynthCorpus generate_synthetic(const SynthSpec& spec) {
  spec.validate();
  SynthCorpus corpus;
  std::mt19937_64 master(spec.seed);

  // Teams and scores first: planted levels depend on corpus-wide medians.
  std::vector<std::vector<std::size_t>> teams(spec.n_conversations);
  std::vector<std::string> conv_ids;
  std::uniform_int_distribution<std::size_t> size_pick(0, spec.team_sizes.size() - 1);
  std::normal_distribution<double> score_dist(spec.score_mean, spec.score_sd);
  for (int c = 0; c < spec.n_conversations; ++c) {
    conv_ids.push_back(fmt::format("syn{:03d}", c));
    const int size = spec.team_sizes[size_pick(master)];
    for (int s = 0; s < size; ++s) {
      SpeakerProfile p;
      p.speaker_id = fmt::format("syn{:03d}_{}", c, static_cast<char>('a' + s));
      for (auto& score : p.scores) {
        double v = 0;
        do {
          v = score_dist(master);
        } while (v < 1.0 || v > 5.0);
        score = std::round(v * 1000.0) / 1000.0;
      }
      teams[c].push_back(corpus.profiles.size());
      corpus.profiles.push_back(std::move(p));
    }
  }
  auto labelled = corpus.profiles;
  assign_labels(labelled, {spec.lmh_band, false});

  std::exponential_distribution<double> pause(spec.base_ipu_rate);
  std::exponential_distribution<double> talk(1.0 / spec.mean_talk);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (int c = 0; c < spec.n_conversations; ++c) {
    std::mt19937_64 rng(derive_seed(spec.seed, static_cast<std::uint64_t>(c)));
    const auto& team = teams[c];

    // Base speech: alternating talk spurts and pauses per speaker.
    std::vector<std::vector<std::pair<double, double>>> base(team.size());
    for (std::size_t s = 0; s < team.size(); ++s) {
      double t = pause(rng);
      while (t < spec.duration) {
        const double end = std::min(spec.duration, t + talk(rng));
        base[s].emplace_back(t, end);
        t = end + pause(rng);
      }
    }

    std::vector<std::vector<std::pair<double, double>>> planted(team.size());
    for (std::size_t h = 0; h < team.size(); ++h) {
      for (const auto& [a_start, a_end] : base[h]) {
        for (std::size_t j = 0; j < team.size(); ++j) {
          if (j == h) continue;
          double factor = 1.0;
          for (const auto& e : spec.effects) {
            if (labelled[team[j]].lmh[index_of(e.trait)] == e.level) factor *= e.factor;
          }
          const double prob = std::min(1.0, spec.base_overlap_prob * factor);
          if (unit(rng) >= prob) continue;
          const double start = a_start + unit(rng) * (a_end - a_start);
          const bool interruptive = unit(rng) < 0.5;
          const double end = interruptive ? a_end + talk(rng) : start + unit(rng) * (a_end - start);
          planted[j].emplace_back(start, end);
        }
      }
    }

    for (std::size_t s = 0; s < team.size(); ++s) {
      const auto& id = corpus.profiles[team[s]].speaker_id;
      for (const auto* list : {&base[s], &planted[s]}) {
        for (const auto& [start, end] : *list) {
          const Micros a = ms_grid(start), b = ms_grid(end);
          if (b > a) corpus.ipus.push_back({conv_ids[c], id, a, b});
        }
      }
    }
  }
  return corpus;
}

std::string synth_spec_to_json(const SynthSpec& s) {
  auto effects = nlohmann::json::array();
  for (const auto& e : s.effects) {
    effects.push_back({{"trait", to_string(e.trait)},
                       {"level", to_string(e.level)},
                       {"factor", e.factor}});
  }
  nlohmann::json j = {{"n_conversations", s.n_conversations},
                      {"team_sizes", s.team_sizes},
                      {"duration", s.duration},
                      {"base_ipu_rate", s.base_ipu_rate},
                      {"mean_talk", s.mean_talk},
                      {"base_overlap_prob", s.base_overlap_prob},
                      {"score_mean", s.score_mean},
                      {"score_sd", s.score_sd},
                      {"lmh_band", s.lmh_band},
                      {"effects", effects},
                      {"seed", s.seed}};
  return j.dump(2) + "\n";
}

PlantedEffect parse_effect(const std::string& text) {
  const auto parts = split_fields(text, ':');
  PlantedEffect e;
  const auto trait = parts.size() == 3 ? trait_from_string(parts[0]) : std::nullopt;
  const auto level = parts.size() == 3 ? level_from_string(parts[1]) : std::nullopt;
  if (!trait || !level || !parse_double(parts[2], e.factor) || !(e.factor > 0)) {
    throw Error(ErrorKind::InvalidSpec,
                "effect '" + text + "' is not of the form Trait:Level:factor");
  }
  e.trait = *trait;
  e.level = *level;
  return e;
}

SynthSpec synth_spec_from_json(const std::string& text, SynthSpec s) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw Error(ErrorKind::InvalidSpec, "synth spec must be a JSON object");
    for (const auto& [key, v] : j.items()) {
      if (key == "n_conversations") s.n_conversations = v.get<int>();
      else if (key == "team_sizes") s.team_sizes = v.get<std::vector<int>>();
      else if (key == "duration") s.duration = v.get<double>();
      else if (key == "base_ipu_rate") s.base_ipu_rate = v.get<double>();
      else if (key == "mean_talk") s.mean_talk = v.get<double>();
      else if (key == "base_overlap_prob") s.base_overlap_prob = v.get<double>();
      else if (key == "score_mean") s.score_mean = v.get<double>();
      else if (key == "score_sd") s.score_sd = v.get<double>();
      else if (key == "lmh_band") s.lmh_band = v.get<double>();
      else if (key == "seed") s.seed = v.get<std::uint64_t>();
      else if (key == "effects") {
        s.effects.clear();
        for (const auto& e : v) {
          s.effects.push_back(parse_effect(e.at("trait").get<std::string>() + ":" +
                                           e.at("level").get<std::string>() + ":" +
                                           fmt::format("{}", e.at("factor").get<double>())));
        }
      } else {
        throw Error(ErrorKind::InvalidSpec, "unknown synth spec key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidSpec, std::string("bad synth spec: ") + e.what());
  }
  s.validate();
  return s;
}

Bundle cmd_synth(const SynthSpec& spec, const PipelineConfig& config,
                 const std::filesystem::path& out_dir) {
  const SynthCorpus corpus = generate_synthetic(spec);
  Bundle b = write_bundle(out_dir, corpus.ipus, corpus.profiles, config);
  write_file(out_dir / "synth_spec.json", synth_spec_to_json(spec));
  return b;
}

}  // namespace odyn
