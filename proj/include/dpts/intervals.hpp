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
// Non-parametric differentially private confidence intervals for the slope.
//
// The interval runs the widened quantile mechanism twice on the variant's
// slope multiset, at target quantiles 1/2 -+ (b + t), and widens the two
// draws outward by theta:
//
//   b  covers the sampling fluctuation of the slope median's rank,
//      sqrt(4/9)            * c*_{p/4,n}  (all-pairs slopes)
//      sqrt((2k+1) / (3k))  * c*_{p/4,n}  (k random matchings)
//      sqrt(2)              * c_{p/4,n}   (one matching, finite-sample)
//      with c_{q,n} = Phi^{-1}(1 - q) / sqrt(n) and n the dataset size;
//   t  covers the mechanism's rank error, ln(4(R - theta)/(theta p)) / (eps N).
//
// Privacy accounting: each mechanism call must be (eps/2)-DP with respect to
// the dataset. One data point perturbs up to Delta slopes (n - 1 for
// all-pairs, 2k for the matching variants including the bin-boundary shift),
// so each call runs at mechanism budget eps_call = (eps / 2) / Delta and the
// two calls compose to eps overall.
//
// Only the matching variants with k = 1 and the sqrt(2) constant carry a
// finite-sample coverage guarantee; the other variants are asymptotic and
// flagged as such in the metadata.

#ifndef DPTS_INTERVALS_HPP_
#define DPTS_INTERVALS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>

#include "dpts/core.hpp"
#include "dpts/estimators.hpp"
#include "dpts/mechanism.hpp"
#include "dpts/normal.hpp"
#include "dpts/rng.hpp"

namespace dpts {

enum class CiVariant {
  theil_sen,  // all-pairs slopes
  half,       // one random matching, finite-sample b
  k_half,     // k random matchings, asymptotic b
};

inline const char* ci_variant_name(CiVariant v) {
  switch (v) {
    case CiVariant::theil_sen: return "theil_sen";
    case CiVariant::half: return "half";
    case CiVariant::k_half: return "k_half";
  }
  return "?";
}

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double nominal_coverage = 0.0;  // 1 - p
  CiVariant variant = CiVariant::half;
  struct Meta {
    double eps = 0.0;       // total dataset-level budget
    double eps_call = 0.0;  // mechanism budget per invocation
    double b = 0.0;
    double t = 0.0;
    double range = 0.0;
    double theta = 0.0;
    int k = 1;
    std::size_t slope_count = 0;
    bool asymptotic = false;
    bool swapped = false;  // the two draws inverted and were reordered
  } meta;
};

// Differentially private confidence interval for the slope; eps-DP overall.
// k is ignored for the theil_sen variant and forced to 1 for half. Throws if
// the target quantiles 1/2 -+ (b + t) leave (0, 1), which signals that n is
// too small or eps too small for the requested p.
inline ConfidenceInterval dp_theil_sen_ci(const Dataset& data, double eps,
                                          double p, double range, double theta,
                                          CiVariant variant, int k, Rng& rng) {
  detail::validate_dp_params(eps, range, theta);
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("p must be in (0, 1)");
  validate_dataset(data);
  const double n = static_cast<double>(data.size());

  SlopeMultiset slopes;
  double delta = 0.0;  // max slopes one data point can change
  switch (variant) {
    case CiVariant::theil_sen:
      slopes = all_pairs_slopes(data);
      delta = n - 1.0;
      k = 0;
      break;
    case CiVariant::half:
      k = 1;
      [[fallthrough]];
    case CiVariant::k_half: {
      if (k < 1) throw std::invalid_argument("k must be >= 1");
      auto [bin1, bin2] = partition_and_permute(data, rng);
      slopes = matching_slopes(match_bins(bin1, bin2, k, rng));
      delta = 2.0 * static_cast<double>(k);
      break;
    }
  }
  slopes = clamp_slopes(slopes, range);
  const std::size_t slope_count = slopes.size();

  const double c_p4 = normal_quantile(1.0 - p / 4.0) / std::sqrt(n);
  double b = 0.0;
  bool asymptotic = true;
  switch (variant) {
    case CiVariant::theil_sen:
      b = std::sqrt(4.0 / 9.0) * c_p4;
      break;
    case CiVariant::k_half:
      b = std::sqrt((2.0 * k + 1.0) / (3.0 * k)) * c_p4;
      break;
    case CiVariant::half:
      b = std::sqrt(2.0) * c_p4;
      asymptotic = false;
      break;
  }
  const double t = std::log(4.0 * (range - theta) / (theta * p)) /
                   (eps * static_cast<double>(slope_count));
  const double offset = b + t;
  if (!(offset > 0.0 && offset < 0.5))
    throw std::domain_error(
        "dp_theil_sen_ci: target quantile 1/2 +- (b + t) outside (0, 1); "
        "n is too small or eps too small for the requested p");

  const double eps_call = (eps / 2.0) / delta;
  QuantileQuery query;
  query.range = range;
  query.theta = theta;
  query.eps_mech = eps_call;

  query.quantile = 0.5 - offset;
  double lower = dpwide_sample(slopes, query, rng) - theta;
  query.quantile = 0.5 + offset;
  double upper = dpwide_sample(slopes, query, rng) + theta;
  bool swapped = false;
  if (lower > upper) {
    std::swap(lower, upper);
    swapped = true;
  }

  ConfidenceInterval ci;
  ci.lower = lower;
  ci.upper = upper;
  ci.nominal_coverage = 1.0 - p;
  ci.variant = variant;
  ci.meta = {eps,   eps_call, b,          t,       range,
             theta, k,        slope_count, asymptotic, swapped};
  return ci;
}

}  // namespace dpts

#endif  // DPTS_INTERVALS_HPP_
