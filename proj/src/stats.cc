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

#include "stqs/stats.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

namespace stqs::stats {

double mean(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("mean of an empty sample");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  if (x.size() < 2) throw std::invalid_argument("variance needs at least two values");
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

double stddev(std::span<const double> x) { return std::sqrt(variance(x)); }

double std_error(std::span<const double> x) {
  return stddev(x) / std::sqrt(static_cast<double>(x.size()));
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw std::invalid_argument("linear_fit needs matching samples of at least three points");
  }
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("linear_fit: x values are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.dof = static_cast<int>(x.size()) - 2;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    rss += r * r;
  }
  fit.slope_se = std::sqrt(rss / fit.dof / sxx);
  fit.r_squared = syy > 0.0 ? 1.0 - rss / syy : 1.0;
  return fit;
}

double t_upper_tail(double t, int dof) {
  if (dof < 1) throw std::invalid_argument("t distribution needs dof >= 1");
  if (std::isinf(t)) return t > 0 ? 0.0 : 1.0;
  boost::math::students_t dist(dof);
  return boost::math::cdf(boost::math::complement(dist, t));
}

double slope_positive_p_value(const LinearFit& fit) {
  if (fit.slope_se == 0.0) return fit.slope > 0.0 ? 0.0 : 1.0;
  return t_upper_tail(fit.slope / fit.slope_se, fit.dof);
}

PairedTest paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw std::invalid_argument("paired test needs matching samples of at least two values");
  }
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  PairedTest out;
  out.mean_diff = mean(d);
  const double se = std_error(d);
  if (se == 0.0) {
    out.t = out.mean_diff > 0 ? std::numeric_limits<double>::infinity()
                              : (out.mean_diff < 0 ? -std::numeric_limits<double>::infinity() : 0.0);
    out.p_one_sided = out.mean_diff > 0 ? 0.0 : 1.0;
    return out;
  }
  out.t = out.mean_diff / se;
  out.p_one_sided = t_upper_tail(out.t, static_cast<int>(d.size()) - 1);
  return out;
}

double separation_sigma(std::span<const double> a, std::span<const double> b) {
  const double se = std::sqrt(std::pow(std_error(a), 2) + std::pow(std_error(b), 2));
  const double diff = mean(a) - mean(b);
  if (se == 0.0) return diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  return diff / se;
}

}  // namespace stqs::stats
