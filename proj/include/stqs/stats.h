// Copyright 2026 The STQS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef STQS_STATS_H
#define STQS_STATS_H

#include <span>

namespace stqs::stats {

double mean(std::span<const double> x);
/// Unbiased sample variance (n - 1 denominator).
double variance(std::span<const double> x);
double stddev(std::span<const double> x);
/// Standard error of the mean.
double std_error(std::span<const double> x);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double r_squared = 0.0;
  int dof = 0;
};

/// Ordinary least squares y = intercept + slope * x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// P(T > t) for Student's t with `dof` degrees of freedom.
double t_upper_tail(double t, int dof);

/// One-sided p-value for the hypothesis slope > 0.
double slope_positive_p_value(const LinearFit& fit);

struct PairedTest {
  double mean_diff = 0.0;
  double t = 0.0;
  double p_one_sided = 1.0;  // H1: mean(a - b) > 0
};

PairedTest paired_t_test(std::span<const double> a, std::span<const double> b);

/// (mean(a) - mean(b)) / sqrt(se_a^2 + se_b^2).
double separation_sigma(std::span<const double> a, std::span<const double> b);

}  // namespace stqs::stats

#endif  // STQS_STATS_H
