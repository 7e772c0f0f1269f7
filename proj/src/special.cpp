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

#include "odyn/special.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

namespace odyn::special {

namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a,b), valid (fast) for x < (a+1)/(a+b+2).
double beta_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (std::isnan(x) || a <= 0 || b <= 0) return std::numeric_limits<double>::quiet_NaN();
  if (x <= 0) return 0.0;
  if (x >= 1) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_fraction(a, b, x) / a;
  return 1.0 - front * beta_fraction(b, a, 1.0 - x) / b;
}

double f_upper_tail(double f, double d1, double d2) {
  if (std::isnan(f)) return std::numeric_limits<double>::quiet_NaN();
  if (f <= 0) return 1.0;
  if (std::isinf(f)) return 0.0;
  return incomplete_beta(0.5 * d2, 0.5 * d1, d2 / (d2 + d1 * f));
}

double t_two_tailed(double t, double df) {
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0.0;
  return incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

GaussLegendre gauss_legendre(int order) {
  static std::mutex mu;
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  std::lock_guard lock(mu);
  auto [it, inserted] = cache.try_emplace(order);
  auto& [nodes, weights] = it->second;
  if (inserted) {
    nodes.resize(order);
    weights.resize(order);
    for (int i = 0; i < (order + 1) / 2; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
      double dp = 0;
      for (int iter = 0; iter < 100; ++iter) {
        double p1 = 1.0, p2 = 0.0;
        for (int j = 1; j <= order; ++j) {
          const double p3 = p2;
          p2 = p1;
          p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
        }
        dp = order * (z * p1 - p2) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::fabs(dz) < 1e-15) break;
      }
      nodes[i] = -z;
      nodes[order - 1 - i] = z;
      weights[i] = weights[order - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }
  return {nodes, weights};
}

namespace {

// Composite Gauss-Legendre of f over [lo, hi] with `panels` equal panels.
template <typename F>
double integrate(F&& f, double lo, double hi, int panels, const GaussLegendre& gl) {
  const double width = (hi - lo) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * width;
    double s = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      s += gl.weights[i] * f(mid + 0.5 * width * gl.nodes[i]);
    }
    total += 0.5 * width * s;
  }
  return total;
}

constexpr int kOrder = 16;

// Fixed inner grid over the sample minimum z, with phi(z) * weight and Phi(z)
// precomputed once.
struct RangeGrid {
  std::vector<double> z, weighted_pdf, cdf;

  RangeGrid() {
    const auto gl = gauss_legendre(kOrder);
    constexpr double lo = -8.5, hi = 8.5;
    constexpr int panels = 12;
    const double width = (hi - lo) / panels;
    const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    for (int p = 0; p < panels; ++p) {
      const double mid = lo + (p + 0.5) * width;
      for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double x = mid + 0.5 * width * gl.nodes[i];
        z.push_back(x);
        weighted_pdf.push_back(0.5 * width * gl.weights[i] * inv_sqrt_2pi *
                               std::exp(-0.5 * x * x));
        cdf.push_back(normal_cdf(x));
      }
    }
  }
};

const RangeGrid& range_grid() {
  static const RangeGrid grid;
  return grid;
}

}  // namespace

double normal_range_cdf(double w, int k) {
  if (w <= 0) return 0.0;
  if (std::isinf(w)) return 1.0;
  const auto& g = range_grid();
  // z is the sample minimum; the other k-1 fall in [z, z + w].
  double total = 0.0;
  for (std::size_t i = 0; i < g.z.size(); ++i) {
    const double inside = normal_cdf(g.z[i] + w) - g.cdf[i];
    total += g.weighted_pdf[i] * std::pow(inside, k - 1);
  }
  return std::min(1.0, std::max(0.0, k * total));
}

double studentized_range_cdf(double q, int k, double df) {
  if (std::isnan(q)) return std::numeric_limits<double>::quiet_NaN();
  if (q <= 0) return 0.0;
  if (std::isinf(q)) return 1.0;
  if (df <= 0 || df > 1e5) return normal_range_cdf(q, k);

  // s = sqrt(chi2_df / df); integrate its density against the range cdf at q*s.
  const double half = 0.5 * df;
  const double log_norm = std::log(2.0) + half * std::log(half) - std::lgamma(half);
  auto density = [&](double s) {
    if (s <= 0) return 0.0;
    return std::exp(log_norm + (df - 1.0) * std::log(s) - half * s * s);
  };
  // Integrate where the log density is within 40 of its peak.
  auto log_density = [&](double s) { return log_norm + (df - 1.0) * std::log(s) - half * s * s; };
  const double mode = std::sqrt(std::max(df - 1.0, 0.5) / df);
  const double cutoff = log_density(mode) - 40.0;
  auto edge = [&](double inside, double outside) {
    for (int i = 0; i < 100; ++i) {
      const double mid = 0.5 * (inside + outside);
      (log_density(mid) > cutoff ? inside : outside) = mid;
    }
    return outside;
  };
  double far = mode + 1.0;
  while (log_density(far) > cutoff) far *= 2.0;
  const double lo = edge(mode, 1e-300);
  const double hi = edge(mode, far);
  const auto gl = gauss_legendre(kOrder);
  const double result =
      integrate([&](double s) { return density(s) * normal_range_cdf(q * s, k); }, lo, mode, 6, gl) +
      integrate([&](double s) { return density(s) * normal_range_cdf(q * s, k); }, mode, hi, 6, gl);
  return std::min(1.0, std::max(0.0, result));
}

}  // namespace odyn::special
