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

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "odyn/features.hpp"

namespace odyn {

struct AnovaOutcome {
  double f = 0;
  double p = 1;
  int df_between = 0;
  int df_within = 0;
  double ss_between = 0;
  double ss_within = 0;
  // Non-empty when F is undefined (all values identical); f and p are NaN.
  std::string diagnostic;
};

// One-way ANOVA, p from the upper tail of F(k-1, n-k). Throws
// InsufficientData for fewer than two groups, an empty group, or n <= k.
AnovaOutcome one_way_anova(const std::vector<std::vector<double>>& groups);

struct PosthocPair {
  std::string lower;   // label of the group with the smaller mean
  std::string higher;
  double mean_diff = 0;  // higher - lower, >= 0
  double q = 0;          // studentized range statistic
  double p_adjusted = 1;
  bool significant = false;

  std::string describe() const { return lower + " < " + higher; }
};

struct LabeledGroup {
  std::string label;
  std::vector<double> values;
};

// Tukey HSD (Tukey-Kramer for unequal sizes) over all unordered pairs, in
// input order (0,1), (0,2), ..., (1,2), ...
std::vector<PosthocPair> tukey_posthoc(const std::vector<LabeledGroup>& groups,
                                       double alpha = 0.05);

struct TTestResult {
  double t = 0;
  double p = 1;
  double df = 0;
  std::string diagnostic;  // set on the zero-variance edge cases
};

// Two-tailed paired t-test on x - y. All-equal differences give t = 0, p = 1
// when they are zero, and t = +-inf, p = 0 with a ZeroVariance diagnostic
// otherwise. Throws LengthMismatch / InsufficientData.
TTestResult paired_t_test(std::span<const double> x, std::span<const double> y);

// Paired t-test for differences from repeated random train/test splits, with
// the variance inflated by (1/J + n_test/n_train) to account for overlap
// between splits (Nadeau & Bengio corrected resampled t-test).
TTestResult corrected_resampled_t_test(std::span<const double> x, std::span<const double> y,
                                       double test_train_ratio);

// Two-tailed pooled-variance two-sample t-test.
TTestResult two_sample_t_test(std::span<const double> x, std::span<const double> y);

std::string significance_stars(double p);  // "**" < 0.01, "*" < 0.05

struct AnovaResult {
  std::string feature;
  Trait trait = Trait::Extrav;
  double f = 0;
  double p = 1;
  int df_between = 0;
  int df_within = 0;
  std::string stars;
  // Low / Moderate / High; nullopt for a group with no observations.
  std::array<std::optional<double>, 3> group_means{};
  std::array<std::size_t, 3> group_sizes{};
  std::size_t sample_size = 0;
  std::vector<PosthocPair> posthoc;  // significant pairs only
  std::string diagnostic;
};

// One result per feature (12) for `trait`. Rows missing a feature are dropped
// for that feature only. Groups left empty are excluded from the test; if
// fewer than two remain, F and p are NaN with a diagnostic.
std::vector<AnovaResult> anova_report(const std::vector<FeatureRow>& rows, Trait trait,
                                      double alpha = 0.05);

void write_anova_csv(std::ostream& out, const std::vector<AnovaResult>& results);
std::string anova_to_json(const std::vector<AnovaResult>& results);

}  // namespace odyn
