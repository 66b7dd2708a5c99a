// Copyright 2026 The dpts Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Point estimators for the slope of a simple linear regression: non-private
// OLS, Theil-Sen and Theil-Sen Half baselines, and the differentially
// private Theil-Sen variants built on the widened exponential mechanism.

#ifndef DPTS_ESTIMATORS_HPP_
#define DPTS_ESTIMATORS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include "dpts/core.hpp"
#include "dpts/mechanism.hpp"
#include "dpts/rng.hpp"

namespace dpts {

enum class Estimator {
  ols,
  theil_sen,
  theil_sen_half,
  dp_theil_sen,
  dp_theil_sen_k_half,
};

inline const char* estimator_name(Estimator e) {
  switch (e) {
    case Estimator::ols: return "ols";
    case Estimator::theil_sen: return "theil_sen";
    case Estimator::theil_sen_half: return "theil_sen_half";
    case Estimator::dp_theil_sen: return "dp_theil_sen";
    case Estimator::dp_theil_sen_k_half: return "dp_theil_sen_k_half";
  }
  return "?";
}

struct FitMeta {
  double eps = 0.0;       // dataset-level privacy budget consumed
  double eps_mech = 0.0;  // per-invocation mechanism budget
  double range = 0.0;
  double theta = 0.0;
  int k = 0;
  std::size_t slope_count = 0;
};

struct FitResult {
  double beta = 0.0;
  std::optional<double> alpha;  // intercept, OLS only
  Estimator estimator = Estimator::ols;
  FitMeta meta;
};

// Median with the even-cardinality convention: mean of the two middle order
// statistics. +-infinite slopes participate as extreme order statistics;
// a non-finite median (all-infinite data, or opposite-sign middle
// infinities) is an error.
inline double slope_median(SlopeMultiset slopes) {
  if (slopes.empty()) throw std::invalid_argument("median of empty multiset");
  std::sort(slopes.begin(), slopes.end());
  const std::size_t n = slopes.size();
  double med;
  if (n % 2 == 1) {
    med = slopes[n / 2];
  } else {
    const double a = slopes[n / 2 - 1], b = slopes[n / 2];
    med = a / 2.0 + b / 2.0;  // opposite infinities yield NaN, caught below
  }
  if (!std::isfinite(med))
    throw std::domain_error("slope median is not finite");
  return med;
}

// Least squares: beta = cov(x, y) / var(x), alpha = mean(y) - beta * mean(x).
inline FitResult ols_fit(const Dataset& data) {
  validate_dataset(data);
  const double n = static_cast<double>(data.size());
  double mx = 0.0, my = 0.0;
  for (const DataPoint& p : data) {
    mx += p.x;
    my += p.y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const DataPoint& p : data) {
    sxx += (p.x - mx) * (p.x - mx);
    sxy += (p.x - mx) * (p.y - my);
  }
  if (sxx == 0.0) throw std::domain_error("ols_fit: zero x-variance");
  FitResult result;
  result.beta = sxy / sxx;
  result.alpha = my - result.beta * mx;
  result.estimator = Estimator::ols;
  result.meta.slope_count = data.size();
  return result;
}

// Median of all pairwise slopes.
inline FitResult theil_sen(const Dataset& data) {
  SlopeMultiset slopes = all_pairs_slopes(data);
  FitResult result;
  result.beta = slope_median(std::move(slopes));
  result.estimator = Estimator::theil_sen;
  result.meta.slope_count = data.size() * (data.size() - 1) / 2;
  return result;
}

// Median of the abbreviated (sorted-half) slopes.
inline FitResult theil_sen_half(const Dataset& data) {
  SlopeMultiset slopes = sorted_half_slopes(data);
  const std::size_t count = slopes.size();
  FitResult result;
  result.beta = slope_median(std::move(slopes));
  result.estimator = Estimator::theil_sen_half;
  result.meta.slope_count = count;
  return result;
}

namespace detail {

inline void validate_dp_params(double eps, double range, double theta) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!(range > 0.0) || !std::isfinite(range))
    throw std::invalid_argument("range must be positive and finite");
  if (!(theta > 0.0 && theta < range))
    throw std::invalid_argument("theta must satisfy 0 < theta < range");
}

}  // namespace detail

// Private Theil-Sen: all C(n,2) slopes, clamped to [-R, R], fed to the
// widened mechanism at the median with eps_mech = eps / (n - 1). One data
// point touches n - 1 slopes, so the whole call is eps-DP.
inline FitResult dp_theil_sen(const Dataset& data, double eps, double range,
                              double theta, Rng& rng) {
  detail::validate_dp_params(eps, range, theta);
  validate_dataset(data);
  const SlopeMultiset slopes =
      clamp_slopes(all_pairs_slopes(data), range);
  QuantileQuery query;
  query.quantile = 0.5;
  query.range = range;
  query.theta = theta;
  query.eps_mech = eps / static_cast<double>(data.size() - 1);
  FitResult result;
  result.beta = dpwide_sample(slopes, query, rng);
  result.estimator = Estimator::dp_theil_sen;
  result.meta = {eps, query.eps_mech, range, theta, 0, slopes.size()};
  return result;
}

// Private abbreviated Theil-Sen: partition into low/high-x bins, draw k
// random matchings, clamp the k * floor(n/2) slopes and run the mechanism
// at eps_mech = eps / (2k). Each point joins at most k slopes and a change
// can additionally shift the bin boundary, hence the 2k scaling; the whole
// call is eps-DP. k = 1 is the private analogue of the abbreviated method.
inline FitResult dp_theil_sen_k_half(const Dataset& data, double eps, int k,
                                     double range, double theta, Rng& rng) {
  detail::validate_dp_params(eps, range, theta);
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  validate_dataset(data);
  auto [bin1, bin2] = partition_and_permute(data, rng);
  const Matching matching = match_bins(bin1, bin2, k, rng);
  const SlopeMultiset slopes =
      clamp_slopes(matching_slopes(matching), range);
  QuantileQuery query;
  query.quantile = 0.5;
  query.range = range;
  query.theta = theta;
  query.eps_mech = eps / (2.0 * static_cast<double>(k));
  FitResult result;
  result.beta = dpwide_sample(slopes, query, rng);
  result.estimator = Estimator::dp_theil_sen_k_half;
  result.meta = {eps, query.eps_mech, range, theta, k, slopes.size()};
  return result;
}

}  // namespace dpts

#endif  // DPTS_ESTIMATORS_HPP_
