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

#include <span>
#include <utility>

namespace odyn::special {

// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction, using
// the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) where the fraction converges slowly.
double incomplete_beta(double a, double b, double x);

// Upper tail of the F(d1, d2) distribution.
double f_upper_tail(double f, double d1, double d2);

// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double t_two_tailed(double t, double df);

double normal_cdf(double z);

// Gauss-Legendre nodes and weights on [-1, 1], computed once per order.
struct GaussLegendre {
  std::span<const double> nodes;
  std::span<const double> weights;
};
GaussLegendre gauss_legendre(int order);

// P(R <= w) for the range R of k independent standard normals.
double normal_range_cdf(double w, int k);

// P(Q <= q) for the studentized range with k groups and df error degrees of
// freedom (df <= 0 means infinite). Composite Gauss-Legendre over the
// chi-scaled outer integral; absolute error well below 1e-6.
double studentized_range_cdf(double q, int k, double df);

}  // namespace odyn::special
