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

#include "odyn/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "json.hpp"

#include "odyn/error.hpp"
#include "odyn/special.hpp"

namespace odyn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

AnovaOutcome one_way_anova(const std::vector<std::vector<double>>& groups) {
  const std::size_t k = groups.size();
  if (k < 2) throw Error(ErrorKind::InsufficientData, "ANOVA needs at least two groups");
  std::size_t n = 0;
  for (const auto& g : groups) {
    if (g.empty()) throw Error(ErrorKind::InsufficientData, "ANOVA group is empty");
    n += g.size();
  }
  if (n <= k) {
    throw Error(ErrorKind::InsufficientData, "ANOVA needs more observations than groups");
  }

  // Work relative to one observation so constant data gives exact zeros.
  const double shift = groups.front().front();
  std::vector<double> means(k);
  double grand = 0;
  for (std::size_t i = 0; i < k; ++i) {
    double s = 0;
    for (double x : groups[i]) s += x - shift;
    grand += s;
    means[i] = s / static_cast<double>(groups[i].size());
  }
  grand /= static_cast<double>(n);

  AnovaOutcome out;
  out.df_between = static_cast<int>(k - 1);
  out.df_within = static_cast<int>(n - k);
  for (std::size_t i = 0; i < k; ++i) {
    const double d = means[i] - grand;
    out.ss_between += static_cast<double>(groups[i].size()) * d * d;
    for (double x : groups[i]) {
      const double e = (x - shift) - means[i];
      out.ss_within += e * e;
    }
  }
  if (out.ss_within == 0 && out.ss_between == 0) {
    out.f = kNaN;
    out.p = kNaN;
    out.diagnostic = "DegenerateInput: zero variance within and between groups";
    return out;
  }
  if (out.ss_within == 0) {
    out.f = std::numeric_limits<double>::infinity();
    out.p = 0;
    out.diagnostic = "zero within-group variance";
    return out;
  }
  out.f = (out.ss_between / out.df_between) / (out.ss_within / out.df_within);
  out.p = special::f_upper_tail(out.f, out.df_between, out.df_within);
  return out;
}

std::vector<PosthocPair> tukey_posthoc(const std::vector<LabeledGroup>& groups, double alpha) {
  std::vector<std::vector<double>> raw;
  for (const auto& g : groups) raw.push_back(g.values);
  const AnovaOutcome anova = one_way_anova(raw);
  const int k = static_cast<int>(groups.size());
  const double mse = anova.ss_within / anova.df_within;

  std::vector<PosthocPair> out;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const double mi = mean_of(groups[i].values);
      const double mj = mean_of(groups[j].values);
      PosthocPair pair;
      const bool i_lower = mi <= mj;
      pair.lower = i_lower ? groups[i].label : groups[j].label;
      pair.higher = i_lower ? groups[j].label : groups[i].label;
      pair.mean_diff = std::fabs(mj - mi);
      const double se = std::sqrt(
          0.5 * mse *
          (1.0 / static_cast<double>(groups[i].values.size()) +
           1.0 / static_cast<double>(groups[j].values.size())));
      if (se > 0) {
        pair.q = pair.mean_diff / se;
        pair.p_adjusted = 1.0 - special::studentized_range_cdf(pair.q, k, anova.df_within);
      } else {
        pair.q = pair.mean_diff > 0 ? std::numeric_limits<double>::infinity() : 0.0;
        pair.p_adjusted = pair.mean_diff > 0 ? 0.0 : 1.0;
      }
      pair.p_adjusted = std::clamp(pair.p_adjusted, 0.0, 1.0);
      pair.significant = pair.p_adjusted < alpha;
      out.push_back(std::move(pair));
    }
  }
  return out;
}

TTestResult paired_t_test(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::LengthMismatch, "paired t-test needs equal-length samples");
  }
  if (x.size() < 2) throw Error(ErrorKind::InsufficientData, "paired t-test needs n >= 2");
  std::vector<double> d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
  const double n = static_cast<double>(d.size());
  const double m = mean_of(d);
  double ss = 0;
  for (double v : d) ss += (v - m) * (v - m);
  TTestResult r;
  r.df = n - 1;
  const bool all_equal = std::all_of(d.begin(), d.end(), [&](double v) { return v == d[0]; });
  if (all_equal) {
    if (d[0] == 0) {
      r.t = 0;
      r.p = 1;
      r.diagnostic = "ZeroVariance: all differences are zero";
    } else {
      r.t = d[0] > 0 ? std::numeric_limits<double>::infinity()
                     : -std::numeric_limits<double>::infinity();
      r.p = 0;
      r.diagnostic = "ZeroVariance: constant nonzero difference";
    }
    return r;
  }
  const double sd = std::sqrt(ss / (n - 1));
  r.t = m / (sd / std::sqrt(n));
  r.p = special::t_two_tailed(r.t, r.df);
  return r;
}

TTestResult corrected_resampled_t_test(std::span<const double> x, std::span<const double> y,
                                       double test_train_ratio) {
  TTestResult r = paired_t_test(x, y);
  if (!r.diagnostic.empty() || !(test_train_ratio >= 0)) return r;
  const double n = static_cast<double>(x.size());
  // paired t = mean / sqrt(var / n); corrected t = mean / sqrt(var * (1/n + ratio)).
  r.t /= std::sqrt(1.0 + n * test_train_ratio);
  r.p = special::t_two_tailed(r.t, r.df);
  return r;
}

TTestResult two_sample_t_test(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 2 || y.size() < 2) {
    throw Error(ErrorKind::InsufficientData, "two-sample t-test needs n >= 2 per sample");
  }
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  const double mx = mean_of(x), my = mean_of(y);
  double ss = 0;
  for (double v : x) ss += (v - mx) * (v - mx);
  for (double v : y) ss += (v - my) * (v - my);
  TTestResult r;
  r.df = nx + ny - 2;
  const double se = std::sqrt(ss / r.df * (1.0 / nx + 1.0 / ny));
  if (se == 0) {
    r.t = mx == my ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), mx - my);
    r.p = mx == my ? 1.0 : 0.0;
    r.diagnostic = "ZeroVariance";
    return r;
  }
  r.t = (mx - my) / se;
  r.p = special::t_two_tailed(r.t, r.df);
  return r;
}

std::string significance_stars(double p) {
  if (std::isnan(p)) return "";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

std::vector<AnovaResult> anova_report(const std::vector<FeatureRow>& rows, Trait trait,
                                      double alpha) {
  constexpr std::array<Level, 3> kLevels = {Level::Low, Level::Moderate, Level::High};
  std::vector<AnovaResult> out;
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    AnovaResult res;
    res.feature = feature_names()[f];
    res.trait = trait;
    std::array<std::vector<double>, 3> by_level;
    for (const auto& row : rows) {
      const auto v = row.values()[f];
      if (!v) continue;
      by_level[static_cast<std::size_t>(row.labels[index_of(trait)])].push_back(*v);
    }
    std::vector<LabeledGroup> groups;
    for (std::size_t l = 0; l < 3; ++l) {
      res.group_sizes[l] = by_level[l].size();
      res.sample_size += by_level[l].size();
      if (!by_level[l].empty()) {
        res.group_means[l] = mean_of(by_level[l]);
        groups.push_back({std::string(1, level_letter(kLevels[l])), by_level[l]});
      }
    }
    try {
      std::vector<std::vector<double>> raw;
      for (const auto& g : groups) raw.push_back(g.values);
      const auto a = one_way_anova(raw);
      res.f = a.f;
      res.p = a.p;
      res.df_between = a.df_between;
      res.df_within = a.df_within;
      res.diagnostic = a.diagnostic;
      if (!std::isnan(a.f)) {
        for (auto& pair : tukey_posthoc(groups, alpha)) {
          if (pair.significant) res.posthoc.push_back(std::move(pair));
        }
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InsufficientData) throw;
      res.f = kNaN;
      res.p = kNaN;
      res.diagnostic = e.what();
    }
    res.stars = significance_stars(res.p);
    out.push_back(std::move(res));
  }
  return out;
}

namespace {

std::string fmt_num(double v, const char* spec = "{:.6g}") {
  if (std::isnan(v)) return "NaN";
  return fmt::format(fmt::runtime(spec), v);
}

std::string posthoc_text(const AnovaResult& r) {
  std::string s;
  for (const auto& p : r.posthoc) {
    if (!s.empty()) s += "; ";
    s += p.describe();
  }
  return s;
}

}  // namespace

void write_anova_csv(std::ostream& out, const std::vector<AnovaResult>& results) {
  out << "trait,feature,F,p,stars,mean_L,mean_M,mean_H,sample_size,posthoc\n";
  for (const auto& r : results) {
    out << to_string(r.trait) << ',' << r.feature << ',' << fmt_num(r.f) << ','
        << fmt_num(r.p) << ',' << r.stars;
    for (const auto& m : r.group_means) {
      out << ',';
      if (m) out << fmt_num(*m, "{:.4f}");
    }
    out << ',' << r.sample_size << ',' << posthoc_text(r) << '\n';
  }
}

std::string anova_to_json(const std::vector<AnovaResult>& results) {
  auto arr = nlohmann::json::array();
  auto num = [](double v) -> nlohmann::json {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
  };
  for (const auto& r : results) {
    nlohmann::json means = nlohmann::json::object();
    constexpr std::array<const char*, 3> keys = {"Low", "Moderate", "High"};
    for (std::size_t l = 0; l < 3; ++l) {
      means[keys[l]] = r.group_means[l] ? nlohmann::json(*r.group_means[l]) : nullptr;
    }
    auto posthoc = nlohmann::json::array();
    for (const auto& p : r.posthoc) {
      posthoc.push_back({{"pair", p.describe()},
                         {"mean_diff", p.mean_diff},
                         {"q", num(p.q)},
                         {"p_adjusted", p.p_adjusted}});
    }
    arr.push_back({{"trait", to_string(r.trait)},
                   {"feature", r.feature},
                   {"F", num(r.f)},
                   {"p", num(r.p)},
                   {"df", {r.df_between, r.df_within}},
                   {"stars", r.stars},
                   {"group_means", means},
                   {"group_sizes", r.group_sizes},
                   {"sample_size", r.sample_size},
                   {"posthoc", posthoc},
                   {"diagnostic", r.diagnostic}});
  }
  return arr.dump(2);
}

}  // namespace odyn
