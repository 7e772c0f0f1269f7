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
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "odyn/features.hpp"
#include "odyn/stats.hpp"

namespace odyn {

// Mixes a master seed with a stream index (splitmix64 finalizer), so each
// split owns an independent RNG stream regardless of execution order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

struct SplitPlan {
  int split_id = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> test_ids;
  std::vector<std::string> train_ids;
};

// Test rows are drawn only from complete rows: round(test_frac * n) of them,
// uniformly. Everything else trains. Throws InsufficientCompleteCases.
SplitPlan make_split(const std::vector<FeatureRow>& rows, double test_frac, std::uint64_t seed,
                     int split_id = 0);

// Fills MISSING cells from the k nearest donors that observe the feature.
// Distance: Euclidean over z-scored features observed by both rows, divided
// by the number of shared features; z-scoring uses only `train`. Throws
// FeatureNeverObserved.
std::vector<FeatureRow> knn_impute(const std::vector<FeatureRow>& train, int k = 5);

using FeatureVector = std::vector<double>;

class GaussianNb {
 public:
  // Throws SingleClassTraining when fewer than two classes are present.
  static GaussianNb fit(const std::vector<FeatureVector>& x, const std::vector<Level>& y);

  Level predict(std::span<const double> features) const;
  // log prior + sum of log densities, per class in `classes()` order.
  std::vector<double> log_scores(std::span<const double> features) const;

  const std::vector<Level>& classes() const { return classes_; }
  const std::vector<double>& log_priors() const { return log_priors_; }
  void shift_log_priors(double c);

 private:
  std::vector<Level> classes_;  // ascending Low < Moderate < High
  std::vector<double> log_priors_;
  std::vector<std::vector<double>> means_;
  std::vector<std::vector<double>> variances_;
};

enum class BaselineMode { Uniform, Prior };

// i.i.d. draws over `labels` (uniform), or proportional to their frequency in
// `train_labels` (Prior).
std::vector<Level> random_baseline(const std::vector<Level>& labels, std::size_t test_size,
                                   std::uint64_t seed, BaselineMode mode = BaselineMode::Uniform,
                                   const std::vector<Level>& train_labels = {});

struct Prf {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

struct MacroPrf {
  Prf macro;
  std::vector<Prf> per_class;  // aligned with the label set
};

// Macro averages over `label_set`, absent classes included. Throws
// LengthMismatch / InsufficientData.
MacroPrf macro_prf(const std::vector<Level>& y_true, const std::vector<Level>& y_pred,
                   const std::vector<Level>& label_set);

enum class LabelMode { Lmh3, Lh2 };
std::string_view to_string(LabelMode mode);

// How per-split model and baseline metrics are compared.
enum class SplitTest { Paired, Unpaired, Corrected };
std::string_view to_string(SplitTest test);
std::optional<SplitTest> split_test_from_string(std::string_view name);

struct ExperimentConfig {
  LabelMode label_mode = LabelMode::Lmh3;
  int splits = 10;
  double test_frac = 0.3;
  int knn_k = 5;
  std::uint64_t seed = 0;
  BaselineMode baseline = BaselineMode::Uniform;
  SplitTest test = SplitTest::Paired;
};

struct SplitMetrics {
  int split_id = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  MacroPrf model;
  MacroPrf baseline;
};

struct MetricComparison {
  double model_mean = 0;
  double baseline_mean = 0;
  TTestResult test;
  std::string stars;
};

struct EvalReport {
  Trait trait = Trait::Extrav;
  LabelMode label_mode = LabelMode::Lmh3;
  std::vector<Level> label_set;
  std::vector<SplitMetrics> splits;
  MetricComparison precision, recall, f1;
};

// Split -> impute train -> fit/predict + baseline -> macro metrics, repeated
// `splits` times, then model vs. baseline t-tests per metric. LH2 drops
// Moderate rows first.
EvalReport run_experiment(const std::vector<FeatureRow>& rows, Trait trait,
                          const ExperimentConfig& config);

std::string eval_to_json(const std::vector<EvalReport>& reports);
// Rows are traits; model P/R/F1 then baseline P/R/F1, each model metric with
// its stars.
void write_eval_csv(std::ostream& out, const std::vector<EvalReport>& reports);

}  // namespace odyn
