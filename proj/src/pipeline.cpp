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

#include "odyn/pipeline.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "json.hpp"

#include "odyn/error.hpp"
#include "odyn/text.hpp"

namespace odyn {

namespace fs = std::filesystem;
using nlohmann::json;

void PipelineConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidConfig, msg); };
  if (!(pause_threshold >= 0)) fail("pause_threshold must be >= 0");
  if (!(min_ipu >= 0)) fail("min_ipu must be >= 0");
  if (knn_k < 1) fail("knn_k must be >= 1");
  if (splits < 2) fail("splits must be >= 2");
  if (!(test_frac > 0 && test_frac < 1)) fail("test_frac must lie in (0, 1)");
  if (!(lmh_band >= 0)) fail("lmh_band must be >= 0");
  if (!(alpha > 0 && alpha < 1)) fail("alpha must lie in (0, 1)");
}

ExperimentConfig PipelineConfig::experiment() const {
  if (!seed) throw Error(ErrorKind::InvalidConfig, "a seed is required");
  ExperimentConfig e;
  e.label_mode = label_mode;
  e.splits = splits;
  e.test_frac = test_frac;
  e.knn_k = knn_k;
  e.seed = *seed;
  e.baseline = baseline;
  e.test = split_test;
  return e;
}

std::string config_to_json(const PipelineConfig& c) {
  json j = {{"pause_threshold", c.pause_threshold},
            {"min_ipu", c.min_ipu},
            {"knn_k", c.knn_k},
            {"splits", c.splits},
            {"test_frac", c.test_frac},
            {"lmh_band", c.lmh_band},
            {"label_mode", to_string(c.label_mode)},
            {"holdout_median", c.holdout_median},
            {"per_minute", c.per_minute},
            {"split_test", to_string(c.split_test)},
            {"baseline", c.baseline == BaselineMode::Uniform ? "uniform" : "prior"},
            {"alpha", c.alpha}};
  j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  return j.dump(2) + "\n";
}

PipelineConfig config_from_json(const std::string& text, PipelineConfig c) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidConfig, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::InvalidConfig, "config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "pause_threshold") c.pause_threshold = v.get<double>();
      else if (key == "min_ipu") c.min_ipu = v.get<double>();
      else if (key == "knn_k") c.knn_k = v.get<int>();
      else if (key == "splits") c.splits = v.get<int>();
      else if (key == "test_frac") c.test_frac = v.get<double>();
      else if (key == "lmh_band") c.lmh_band = v.get<double>();
      else if (key == "holdout_median") c.holdout_median = v.get<bool>();
      else if (key == "per_minute") c.per_minute = v.get<bool>();
      else if (key == "split_test") {
        const auto t = split_test_from_string(v.get<std::string>());
        if (!t) throw Error(ErrorKind::InvalidConfig, "split_test must be paired, unpaired or corrected");
        c.split_test = *t;
      }
      else if (key == "alpha") c.alpha = v.get<double>();
      else if (key == "seed") {
        if (v.is_null()) c.seed.reset();
        else c.seed = v.get<std::uint64_t>();
      } else if (key == "label_mode") {
        const auto m = v.get<std::string>();
        if (m == "LMH3") c.label_mode = LabelMode::Lmh3;
        else if (m == "LH2") c.label_mode = LabelMode::Lh2;
        else throw Error(ErrorKind::InvalidConfig, "label_mode must be LMH3 or LH2");
      } else if (key == "baseline") {
        const auto m = v.get<std::string>();
        if (m == "uniform") c.baseline = BaselineMode::Uniform;
        else if (m == "prior") c.baseline = BaselineMode::Prior;
        else throw Error(ErrorKind::InvalidConfig, "baseline must be uniform or prior");
      } else {
        throw Error(ErrorKind::InvalidConfig, "unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidConfig, std::string("bad config value: ") + e.what());
  }
  c.validate();
  return c;
}

PipelineConfig load_config_file(const fs::path& path, PipelineConfig base) {
  return config_from_json(read_file(path), base);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

namespace {

std::string sha256_hex(const std::vector<const std::string*>& parts) {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw Error(ErrorKind::Io, "cannot allocate digest context");
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  for (const std::string* p : parts) {
    const std::string len = std::to_string(p->size()) + ":";
    EVP_DigestUpdate(ctx, len.data(), len.size());
    EVP_DigestUpdate(ctx, p->data(), p->size());
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int n = 0;
  EVP_DigestFinal_ex(ctx, digest, &n);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  for (unsigned int i = 0; i < n; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

struct BundleFiles {
  std::string ipus, roster, scores, config;

  std::string hash() const { return sha256_hex({&ipus, &roster, &scores, &config}); }
};

std::vector<Conversation> parse_roster(const std::string& text) {
  std::vector<Conversation> convs;
  std::map<std::string, std::size_t> index;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || (line_no == 1 && line.rfind("conversation_id", 0) == 0)) continue;
    auto f = split_fields(line, ',');
    if (f.size() != 2) throw Error(ErrorKind::MalformedRow, "roster row " + std::to_string(line_no));
    auto [it, inserted] = index.try_emplace(f[0], convs.size());
    if (inserted) convs.push_back(Conversation{f[0], {}, {}});
    convs[it->second].roster.push_back(f[1]);
    convs[it->second].ipus[f[1]];
  }
  return convs;
}

}  // namespace

Bundle write_bundle(const fs::path& dir, const std::vector<IpuRecord>& raw_ipus,
                    const std::vector<SpeakerProfile>& profiles, const PipelineConfig& config) {
  config.validate();
  Bundle b;
  b.conversations =
      preprocess(raw_ipus, to_micros(config.pause_threshold), to_micros(config.min_ipu));
  b.profiles = profiles;
  b.config = config;
  check_corpus_consistency(b.conversations, b.profiles);

  BundleFiles files;
  std::ostringstream ipus, roster, scores;
  std::vector<IpuRecord> flat;
  roster << "conversation_id,speaker_id\n";
  for (const auto& conv : b.conversations) {
    for (const auto& s : conv.roster) roster << conv.id << ',' << s << '\n';
    const auto all = conv.all_ipus();
    flat.insert(flat.end(), all.begin(), all.end());
  }
  write_ipu_csv(ipus, flat);
  write_scores_csv(scores, b.profiles);
  files.ipus = ipus.str();
  files.roster = roster.str();
  files.scores = scores.str();
  files.config = config_to_json(config);
  b.content_hash = files.hash();

  std::size_t n_speakers = 0;
  for (const auto& conv : b.conversations) n_speakers += conv.roster.size();
  const json manifest = {{"content_hash", b.content_hash},
                         {"conversations", b.conversations.size()},
                         {"speakers", n_speakers},
                         {"ipus", flat.size()}};
  fs::create_directories(dir);
  write_file(dir / "ipus.csv", files.ipus);
  write_file(dir / "roster.csv", files.roster);
  write_file(dir / "scores.csv", files.scores);
  write_file(dir / "config.json", files.config);
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  return b;
}

Bundle load_bundle(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorKind::Io, "no bundle at " + dir.string());
  BundleFiles files{read_file(dir / "ipus.csv"), read_file(dir / "roster.csv"),
                    read_file(dir / "scores.csv"), read_file(dir / "config.json")};
  Bundle b;
  b.content_hash = files.hash();
  const json manifest = json::parse(read_file(dir / "manifest.json"), nullptr, false);
  if (manifest.is_discarded() || manifest.value("content_hash", "") != b.content_hash) {
    throw Error(ErrorKind::Io, "bundle manifest hash does not match its contents");
  }
  b.conversations = parse_roster(files.roster);
  std::map<std::string, Conversation*> by_id;
  for (auto& c : b.conversations) by_id[c.id] = &c;
  std::istringstream ipu_stream(files.ipus);
  for (auto& r : parse_ipu_stream(ipu_stream, IpuFormat::Csv)) {
    auto it = by_id.find(r.conversation_id);
    if (it == by_id.end() || !it->second->ipus.contains(r.speaker_id)) {
      throw Error(ErrorKind::MalformedRow, "IPU for '" + r.speaker_id + "' not on roster");
    }
    it->second->ipus[r.speaker_id].push_back(std::move(r));
  }
  std::istringstream score_stream(files.scores);
  b.profiles = parse_scores_stream(score_stream);
  b.config = config_from_json(files.config);
  return b;
}

Bundle cmd_ingest(const fs::path& ipu_path, std::optional<IpuFormat> format,
                  const fs::path& scores_path, const PipelineConfig& config,
                  const fs::path& out_dir) {
  const auto raw = parse_ipu_file(ipu_path, format.value_or(format_from_path(ipu_path)));
  const auto profiles = parse_scores_file(scores_path);
  return write_bundle(out_dir, raw, profiles, config);
}

std::vector<FeatureRow> bundle_features(const Bundle& bundle, const PipelineConfig& config) {
  auto profiles = bundle.profiles;
  assign_labels(profiles, config.label_options());
  return assemble_features(bundle.conversations, profiles, config.feature_options());
}

void cmd_features(const Bundle& bundle, const PipelineConfig& config, const fs::path& out_dir) {
  config.validate();
  const auto rows = bundle_features(bundle, config);
  std::ostringstream features, counts;
  write_features_csv(features, rows);
  std::string events;
  counts << "conversation_id,speaker_id,two_spk,three_plus_spk\n";
  for (const auto& conv : bundle.conversations) {
    events += events_to_jsonl(conv.id, conversation_events(conv));
    const auto timeline = build_floor_timeline(conv.all_ipus());
    for (const auto& oc : multiparty_overlap_counts(timeline, conv.roster)) {
      counts << conv.id << ',' << oc.speaker_id << ',' << oc.two_spk << ','
             << oc.three_plus_spk << '\n';
    }
    write_file(out_dir / "timelines" / (conv.id + ".json"),
               timeline_to_json(timeline, conv.roster) + "\n");
  }
  write_file(out_dir / "features.csv", features.str());
  write_file(out_dir / "events.jsonl", events);
  write_file(out_dir / "overlap_counts.csv", counts.str());
}

namespace {

std::vector<Trait> or_all(const std::vector<Trait>& traits) {
  return traits.empty() ? std::vector<Trait>(kAllTraits.begin(), kAllTraits.end()) : traits;
}

}  // namespace

std::vector<AnovaResult> cmd_anova(const Bundle& bundle, const PipelineConfig& config,
                                   const fs::path& out_dir, const std::vector<Trait>& traits) {
  config.validate();
  const auto rows = bundle_features(bundle, config);
  std::vector<AnovaResult> all;
  for (Trait t : or_all(traits)) {
    auto part = anova_report(rows, t, config.alpha);
    all.insert(all.end(), part.begin(), part.end());
  }
  std::ostringstream csv;
  write_anova_csv(csv, all);
  write_file(out_dir / "anova.csv", csv.str());
  write_file(out_dir / "anova.json", anova_to_json(all) + "\n");
  return all;
}

std::vector<EvalReport> cmd_eval(const Bundle& bundle, const PipelineConfig& config,
                                 const fs::path& out_dir, const std::vector<Trait>& traits) {
  config.validate();
  const ExperimentConfig exp = config.experiment();
  const auto rows = bundle_features(bundle, config);
  std::vector<EvalReport> reports;
  for (Trait t : or_all(traits)) reports.push_back(run_experiment(rows, t, exp));
  const std::string stem = config.label_mode == LabelMode::Lmh3 ? "eval_lmh3" : "eval_lh2";
  std::ostringstream csv;
  write_eval_csv(csv, reports);
  write_file(out_dir / (stem + ".csv"), csv.str());
  write_file(out_dir / (stem + ".json"), eval_to_json(reports) + "\n");
  return reports;
}

}  // namespace odyn
