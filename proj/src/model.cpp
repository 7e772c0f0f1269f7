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

#include "odyn/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <random>

#include <fmt/format.h>

#include "json.hpp"

#include "odyn/error.hpp"

namespace odyn {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SplitPlan make_split(const std::vector<FeatureRow>& rows, double test_frac, std::uint64_t seed,
                     int split_id) {
  if (!(test_frac > 0 && test_frac < 1)) {
    throw Error(ErrorKind::InvalidConfig, "test fraction must lie in (0, 1)");
  }
  const auto test_size = static_cast<std::size_t>(
      std::llround(test_frac * static_cast<double>(rows.size())));
  std::vector<std::size_t> complete;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].complete()) complete.push_back(i);
  }
  if (complete.size() < test_size) {
    throw Error(ErrorKind::InsufficientCompleteCases,
                fmt::format("need {} complete rows for the test set, have {}", test_size,
                            complete.size()));
  }
  // Partial Fisher-Yates: the first test_size entries become the sample.
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < test_size; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, complete.size() - 1);
    std::swap(complete[i], complete[pick(rng)]);
  }
  std::vector<bool> in_test(rows.size(), false);
  for (std::size_t i = 0; i < test_size; ++i) in_test[complete[i]] = true;

  SplitPlan plan;
  plan.split_id = split_id;
  plan.seed = seed;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    (in_test[i] ? plan.test_ids : plan.train_ids).push_back(rows[i].speaker_id);
  }
  return plan;
}

std::vector<FeatureRow> knn_impute(const std::vector<FeatureRow>& train, int k) {
  if (k < 1) throw Error(ErrorKind::InvalidConfig, "knn k must be >= 1");
  const std::size_t n = train.size();
  std::vector<std::array<std::optional<double>, kNumFeatures>> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = train[i].values();

  std::array<double, kNumFeatures> mean{}, sd{};
  std::array<std::size_t, kNumFeatures> observed{};
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    double sum = 0;
    for (const auto& row : values) {
      if (row[f]) {
        sum += *row[f];
        ++observed[f];
      }
    }
    if (observed[f] == 0) {
      const bool needed = std::any_of(values.begin(), values.end(),
                                      [&](const auto& row) { return !row[f]; });
      if (needed) {
        throw Error(ErrorKind::FeatureNeverObserved,
                    "no training row observes '" + feature_names()[f] + "'");
      }
      sd[f] = 1;
      continue;
    }
    mean[f] = sum / static_cast<double>(observed[f]);
    double ss = 0;
    for (const auto& row : values) {
      if (row[f]) ss += (*row[f] - mean[f]) * (*row[f] - mean[f]);
    }
    sd[f] = std::sqrt(ss / static_cast<double>(observed[f]));
    if (sd[f] == 0) sd[f] = 1;
  }

  auto distance = [&](std::size_t a, std::size_t b) {
    double ss = 0;
    int shared = 0;
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      if (values[a][f] && values[b][f]) {
        const double d = (*values[a][f] - *values[b][f]) / sd[f];
        ss += d * d;
        ++shared;
      }
    }
    if (shared == 0) return std::numeric_limits<double>::infinity();
    return std::sqrt(ss / shared);
  };

  std::vector<FeatureRow> out = train;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      if (values[i][f]) continue;
      std::vector<std::pair<double, std::size_t>> donors;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i && values[j][f]) donors.emplace_back(distance(i, j), j);
      }
      const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), donors.size());
      std::partial_sort(donors.begin(), donors.begin() + static_cast<std::ptrdiff_t>(take),
                        donors.end());
      double sum = 0;
      for (std::size_t d = 0; d < take; ++d) sum += *values[donors[d].second][f];
      out[i].set_value(f, sum / static_cast<double>(take));
    }
  }
  return out;
}

GaussianNb GaussianNb::fit(const std::vector<FeatureVector>& x, const std::vector<Level>& y) {
  if (x.size() != y.size()) throw Error(ErrorKind::LengthMismatch, "x and y differ in length");
  std::map<Level, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < y.size(); ++i) members[y[i]].push_back(i);
  if (members.size() < 2) {
    throw Error(ErrorKind::SingleClassTraining, "training data contains fewer than two classes");
  }
  const std::size_t dims = x.front().size();
  GaussianNb nb;
  double max_var = 0;
  for (const auto& [level, idx] : members) {
    nb.classes_.push_back(level);
    nb.log_priors_.push_back(std::log(static_cast<double>(idx.size()) /
                                      static_cast<double>(y.size())));
    std::vector<double> mu(dims, 0.0), var(dims, 0.0);
    for (std::size_t d = 0; d < dims; ++d) {
      for (auto i : idx) mu[d] += x[i][d];
      mu[d] /= static_cast<double>(idx.size());
      for (auto i : idx) var[d] += (x[i][d] - mu[d]) * (x[i][d] - mu[d]);
      var[d] /= static_cast<double>(idx.size());
      max_var = std::max(max_var, var[d]);
    }
    nb.means_.push_back(std::move(mu));
    nb.variances_.push_back(std::move(var));
  }
  const double floor = max_var > 0 ? 1e-9 * max_var : 1e-9;
  for (auto& var : nb.variances_) {
    for (auto& v : var) v = std::max(v, floor);
  }
  return nb;
}

std::vector<double> GaussianNb::log_scores(std::span<const double> features) const {
  std::vector<double> scores(classes_.size());
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    double s = log_priors_[c];
    for (std::size_t d = 0; d < features.size(); ++d) {
      const double var = variances_[c][d];
      const double diff = features[d] - means_[c][d];
      s -= 0.5 * std::log(2.0 * std::numbers::pi * var) + diff * diff / (2.0 * var);
    }
    scores[c] = s;
  }
  return scores;
}

Level GaussianNb::predict(std::span<const double> features) const {
  const auto scores = log_scores(features);
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[best]) best = c;
  }
  return classes_[best];
}

void GaussianNb::shift_log_priors(double c) {
  for (auto& lp : log_priors_) lp += c;
}

std::vector<Level> random_baseline(const std::vector<Level>& labels, std::size_t test_size,
                                   std::uint64_t seed, BaselineMode mode,
                                   const std::vector<Level>& train_labels) {
  if (labels.empty()) throw Error(ErrorKind::InsufficientData, "baseline needs a label set");
  std::mt19937_64 rng(seed);
  std::vector<Level> out;
  out.reserve(test_size);
  if (mode == BaselineMode::Prior && !train_labels.empty()) {
    std::vector<double> weights;
    for (Level l : labels) {
      weights.push_back(static_cast<double>(
          std::count(train_labels.begin(), train_labels.end(), l)));
    }
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    for (std::size_t i = 0; i < test_size; ++i) out.push_back(labels[pick(rng)]);
    return out;
  }
  std::uniform_int_distribution<std::size_t> pick(0, labels.size() - 1);
  for (std::size_t i = 0; i < test_size; ++i) out.push_back(labels[pick(rng)]);
  return out;
}

MacroPrf macro_prf(const std::vector<Level>& y_true, const std::vector<Level>& y_pred,
                   const std::vector<Level>& label_set) {
  if (y_true.size() != y_pred.size()) {
    throw Error(ErrorKind::LengthMismatch, "y_true and y_pred differ in length");
  }
  if (y_true.empty()) throw Error(ErrorKind::InsufficientData, "no predictions to score");
  if (label_set.empty()) throw Error(ErrorKind::InsufficientData, "empty label set");
  MacroPrf out;
  for (Level l : label_set) {
    long tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
      const bool t = y_true[i] == l, p = y_pred[i] == l;
      tp += t && p;
      fp += !t && p;
      fn += t && !p;
    }
    Prf c;
    c.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    c.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    c.f1 = c.precision + c.recall > 0
               ? 2 * c.precision * c.recall / (c.precision + c.recall)
               : 0.0;
    out.macro.precision += c.precision;
    out.macro.recall += c.recall;
    out.macro.f1 += c.f1;
    out.per_class.push_back(c);
  }
  const double k = static_cast<double>(label_set.size());
  out.macro.precision /= k;
  out.macro.recall /= k;
  out.macro.f1 /= k;
  return out;
}

std::string_view to_string(LabelMode mode) {
  return mode == LabelMode::Lmh3 ? "LMH3" : "LH2";
}

std::string_view to_string(SplitTest test) {
  switch (test) {
    case SplitTest::Paired: return "paired";
    case SplitTest::Unpaired: return "unpaired";
    case SplitTest::Corrected: return "corrected";
  }
  return "?";
}

std::optional<SplitTest> split_test_from_string(std::string_view name) {
  for (SplitTest t : {SplitTest::Paired, SplitTest::Unpaired, SplitTest::Corrected}) {
    if (to_string(t) == name) return t;
  }
  return std::nullopt;
}

namespace {

FeatureVector dense(const FeatureRow& row) {
  FeatureVector v;
  v.reserve(kNumFeatures);
  for (const auto& x : row.values()) {
    if (!x) throw Error(ErrorKind::InsufficientData, "row '" + row.speaker_id + "' has MISSING");
    v.push_back(*x);
  }
  return v;
}

MetricComparison compare(const std::vector<double>& model, const std::vector<double>& base,
                         SplitTest test, double test_train_ratio) {
  MetricComparison mc;
  const auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  mc.model_mean = mean(model);
  mc.baseline_mean = mean(base);
  switch (test) {
    case SplitTest::Paired: mc.test = paired_t_test(model, base); break;
    case SplitTest::Unpaired: mc.test = two_sample_t_test(model, base); break;
    case SplitTest::Corrected:
      mc.test = corrected_resampled_t_test(model, base, test_train_ratio);
      break;
  }
  mc.stars = significance_stars(mc.test.p);
  return mc;
}

}  // namespace

EvalReport run_experiment(const std::vector<FeatureRow>& all_rows, Trait trait,
                          const ExperimentConfig& config) {
  if (config.splits < 2) throw Error(ErrorKind::InvalidConfig, "need at least two splits");
  const std::size_t t = index_of(trait);
  EvalReport report;
  report.trait = trait;
  report.label_mode = config.label_mode;
  report.label_set = config.label_mode == LabelMode::Lmh3
                         ? std::vector<Level>{Level::Low, Level::Moderate, Level::High}
                         : std::vector<Level>{Level::Low, Level::High};
  std::vector<FeatureRow> rows;
  for (const auto& r : all_rows) {
    if (config.label_mode == LabelMode::Lh2 && r.labels[t] == Level::Moderate) continue;
    rows.push_back(r);
  }
  std::map<std::string, const FeatureRow*> by_id;
  for (const auto& r : rows) by_id[r.speaker_id] = &r;

  std::vector<double> mp, mr, mf, bp, br, bf;
  for (int s = 0; s < config.splits; ++s) {
    const std::uint64_t split_seed = derive_seed(config.seed, static_cast<std::uint64_t>(s));
    const SplitPlan plan = make_split(rows, config.test_frac, split_seed, s);

    std::vector<FeatureRow> train;
    for (const auto& id : plan.train_ids) train.push_back(*by_id.at(id));
    train = knn_impute(train, config.knn_k);

    std::vector<FeatureVector> x;
    std::vector<Level> y;
    for (const auto& r : train) {
      x.push_back(dense(r));
      y.push_back(r.labels[t]);
    }
    const GaussianNb nb = GaussianNb::fit(x, y);

    std::vector<Level> y_true, y_model;
    for (const auto& id : plan.test_ids) {
      const FeatureRow& r = *by_id.at(id);
      y_true.push_back(r.labels[t]);
      y_model.push_back(nb.predict(dense(r)));
    }
    std::vector<Level> seen = y;
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    const auto y_base = random_baseline(seen, y_true.size(), derive_seed(split_seed, 1),
                                        config.baseline, y);

    SplitMetrics m;
    m.split_id = s;
    m.train_size = train.size();
    m.test_size = y_true.size();
    m.model = macro_prf(y_true, y_model, report.label_set);
    m.baseline = macro_prf(y_true, y_base, report.label_set);
    mp.push_back(m.model.macro.precision);
    mr.push_back(m.model.macro.recall);
    mf.push_back(m.model.macro.f1);
    bp.push_back(m.baseline.macro.precision);
    br.push_back(m.baseline.macro.recall);
    bf.push_back(m.baseline.macro.f1);
    report.splits.push_back(std::move(m));
  }
  const double ratio = static_cast<double>(report.splits.front().test_size) /
                       static_cast<double>(report.splits.front().train_size);
  report.precision = compare(mp, bp, config.test, ratio);
  report.recall = compare(mr, br, config.test, ratio);
  report.f1 = compare(mf, bf, config.test, ratio);
  return report;
}

namespace {

nlohmann::json prf_json(const Prf& p) {
  return {{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
}

nlohmann::json macro_json(const MacroPrf& m, const std::vector<Level>& labels) {
  nlohmann::json per = nlohmann::json::object();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    per[std::string(to_string(labels[i]))] = prf_json(m.per_class[i]);
  }
  return {{"macro", prf_json(m.macro)}, {"per_class", per}};
}

nlohmann::json comparison_json(const MetricComparison& c) {
  auto num = [](double v) -> nlohmann::json {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
  };
  return {{"model_mean", c.model_mean}, {"baseline_mean", c.baseline_mean},
          {"t", num(c.test.t)},         {"p", num(c.test.p)},
          {"df", c.test.df},            {"stars", c.stars},
          {"diagnostic", c.test.diagnostic}};
}

}  // namespace

std::string eval_to_json(const std::vector<EvalReport>& reports) {
  auto arr = nlohmann::json::array();
  for (const auto& r : reports) {
    auto splits = nlohmann::json::array();
    for (const auto& s : r.splits) {
      splits.push_back({{"split", s.split_id},
                        {"train_size", s.train_size},
                        {"test_size", s.test_size},
                        {"model", macro_json(s.model, r.label_set)},
                        {"baseline", macro_json(s.baseline, r.label_set)}});
    }
    std::vector<std::string> labels;
    for (Level l : r.label_set) labels.emplace_back(to_string(l));
    arr.push_back({{"trait", to_string(r.trait)},
                   {"label_mode", to_string(r.label_mode)},
                   {"label_set", labels},
                   {"precision", comparison_json(r.precision)},
                   {"recall", comparison_json(r.recall)},
                   {"f1", comparison_json(r.f1)},
                   {"splits", splits}});
  }
  return arr.dump(2);
}

void write_eval_csv(std::ostream& out, const std::vector<EvalReport>& reports) {
  out << "trait,label_mode,model_P,model_R,model_F1,baseline_P,baseline_R,baseline_F1,"
         "stars_P,stars_R,stars_F1,p_P,p_R,p_F1\n";
  auto p_text = [](double p) { return std::isnan(p) ? std::string("NaN") : fmt::format("{:.6g}", p); };
  for (const auto& r : reports) {
    out << fmt::format("{},{},{:.4f},{:.4f},{:.4f},{:.4f},{:.4f},{:.4f},{},{},{},{},{},{}\n",
                       to_string(r.trait), to_string(r.label_mode), r.precision.model_mean,
                       r.recall.model_mean, r.f1.model_mean, r.precision.baseline_mean,
                       r.recall.baseline_mean, r.f1.baseline_mean, r.precision.stars,
                       r.recall.stars, r.f1.stars, p_text(r.precision.test.p),
                       p_text(r.recall.test.p), p_text(r.f1.test.p));
  }
}

}  // namespace odyn
