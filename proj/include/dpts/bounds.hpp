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
// Closed-form (1-p)-convergence bounds for the seven estimators, and the
// rule for choosing the widening parameter theta.
//
// A (1-p)-convergence bound is a value t with P(|beta_hat - beta| <= t)
// >= 1 - p over the data noise and the estimator's coins, stated under the
// equally-spaced-design, Gaussian-error model. Writing c_q = Phi^{-1}(1 - q)
// and sd ratio rho = sigma_e / sigma_x:
//
//   OLS               rho * c_{p/4} / sqrt(n)
//   TheilSen*         sqrt(pi/3)  * rho * c_{p/4} / sqrt(n)
//   TheilSenHalf      sqrt(2pi/3) * rho * c_{p/4} / sqrt(n),  n > ln(4/p)
//   DPSuffStats       rho * (c_{p/12}/sqrt(n)) (1 + tau)
//                       + tau (1 + tau + |beta|),
//                       tau = (1 - 1/n) r_u^2 ln(3/p) / (eps n sigma_x^2)
//   DPTheilSen*       sqrt(pi/3)  * rho * (c_{p/16}/sqrt(n) + tau) + theta
//   DPTheilSenHalf    sqrt(2pi/3) * rho * (c_{p/16}/sqrt(n) + tau) + theta,
//                       n > 16 ln(16/p)
//   DPTheilSenkHalf*  sqrt(2pi(2k+1)/(9k)) * rho * (c_{p/16}/sqrt(n) + tau)
//                       + theta
//
// where the DP Theil-Sen rows share tau = ln(R / (sqrt(pi) p theta sigma_e))
// / (eps n) with the side conditions tau <= tau_n (the cap below which the
// normal-quantile approximation is trusted) and p < R / (sqrt(pi) theta
// sigma_e). Starred rows are asymptotic: their vanishing lower-order factors
// are dropped and the result is flagged. Logs are natural throughout.
// Constraints are evaluated and reported, never silently enforced.

#ifndef DPTS_BOUNDS_HPP_
#define DPTS_BOUNDS_HPP_

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpts/normal.hpp"

namespace dpts {

enum class BoundEstimator {
  ols,
  theil_sen,
  theil_sen_half,
  dp_suff_stats,
  dp_theil_sen,
  dp_theil_sen_half,
  dp_theil_sen_k_half,
};

inline const char* bound_estimator_name(BoundEstimator e) {
  switch (e) {
    case BoundEstimator::ols: return "ols";
    case BoundEstimator::theil_sen: return "theil_sen";
    case BoundEstimator::theil_sen_half: return "theil_sen_half";
    case BoundEstimator::dp_suff_stats: return "dp_suff_stats";
    case BoundEstimator::dp_theil_sen: return "dp_theil_sen";
    case BoundEstimator::dp_theil_sen_half: return "dp_theil_sen_half";
    case BoundEstimator::dp_theil_sen_k_half: return "dp_theil_sen_k_half";
  }
  return "?";
}

constexpr BoundEstimator kAllBoundEstimators[] = {
    BoundEstimator::ols,
    BoundEstimator::theil_sen,
    BoundEstimator::theil_sen_half,
    BoundEstimator::dp_suff_stats,
    BoundEstimator::dp_theil_sen,
    BoundEstimator::dp_theil_sen_half,
    BoundEstimator::dp_theil_sen_k_half,
};

struct BoundParams {
  double sigma_e = 0.0;
  double sigma_x = 0.0;
  double n = 0.0;
  double p = 0.0;
  double eps = 0.0;    // DP rows
  double range = 0.0;  // R, DP Theil-Sen rows
  double theta = 0.0;  // DP Theil-Sen rows
  int k = 1;           // kHalf row
  double abs_beta = 0.0;                       // DPSuffStats row
  std::optional<double> r_u;                   // DPSuffStats row
  std::optional<double> tau_n;                 // defaults to 1/sqrt(n)

  double tau_cap() const { return tau_n ? *tau_n : 1.0 / std::sqrt(n); }
};

struct BoundConstraint {
  std::string name;
  bool satisfied = false;
};

struct BoundResult {
  double value = 0.0;
  bool asymptotic = false;
  std::vector<BoundConstraint> constraints;

  bool all_constraints_ok() const {
    for (const BoundConstraint& c : constraints)
      if (!c.satisfied) return false;
    return true;
  }
};

namespace detail {

inline void validate_common(const BoundParams& params) {
  if (!(params.sigma_e > 0.0))
    throw std::invalid_argument("bounds: sigma_e must be positive");
  if (!(params.sigma_x > 0.0))
    throw std::invalid_argument("bounds: sigma_x must be positive");
  if (!(params.n >= 2.0))
    throw std::invalid_argument("bounds: n must be >= 2");
  if (!(params.p > 0.0 && params.p < 1.0))
    throw std::invalid_argument("bounds: p must be in (0, 1)");
}

inline void validate_dp_common(const BoundParams& params) {
  if (!(params.eps > 0.0))
    throw std::invalid_argument("bounds: eps must be positive");
}

inline void validate_widened(const BoundParams& params) {
  validate_dp_common(params);
  if (!(params.range > 0.0))
    throw std::invalid_argument("bounds: range must be positive");
  if (!(params.theta > 0.0 && params.theta < params.range))
    throw std::invalid_argument("bounds: theta must satisfy 0 < theta < R");
}

}  // namespace detail

// The privacy-noise term of the requested row. For the DP Theil-Sen rows the
// value is NaN when the log argument is non-positive (the reported
// p-threshold constraint is then violated).
inline double tau(BoundEstimator estimator, const BoundParams& params) {
  detail::validate_common(params);
  switch (estimator) {
    case BoundEstimator::dp_suff_stats: {
      detail::validate_dp_common(params);
      if (!params.r_u)
        throw std::invalid_argument("bounds: r_u required for dp_suff_stats");
      const double ru = *params.r_u;
      return (1.0 - 1.0 / params.n) * ru * ru * std::log(3.0 / params.p) /
             (params.eps * params.n * params.sigma_x * params.sigma_x);
    }
    case BoundEstimator::dp_theil_sen:
    case BoundEstimator::dp_theil_sen_half:
    case BoundEstimator::dp_theil_sen_k_half: {
      detail::validate_widened(params);
      const double arg = params.range / (std::sqrt(3.14159265358979323846) *
                                         params.p * params.theta *
                                         params.sigma_e);
      return std::log(arg) / (params.eps * params.n);
    }
    default:
      return 0.0;  // non-private rows carry no privacy term
  }
}

inline BoundResult convergence_bound(BoundEstimator estimator,
                                     const BoundParams& params) {
  detail::validate_common(params);
  const double pi = 3.14159265358979323846;
  const double rho = params.sigma_e / params.sigma_x;
  const double sqrt_n = std::sqrt(params.n);
  const auto c = [](double q) { return normal_quantile(1.0 - q); };

  BoundResult result;
  switch (estimator) {
    case BoundEstimator::ols:
      result.value = rho * c(params.p / 4.0) / sqrt_n;
      break;
    case BoundEstimator::theil_sen:
      result.value = std::sqrt(pi / 3.0) * rho * c(params.p / 4.0) / sqrt_n;
      result.asymptotic = true;
      break;
    case BoundEstimator::theil_sen_half:
      result.value =
          std::sqrt(2.0 * pi / 3.0) * rho * c(params.p / 4.0) / sqrt_n;
      result.constraints.push_back(
          {"n > ln(4/p)", params.n > std::log(4.0 / params.p)});
      break;
    case BoundEstimator::dp_suff_stats: {
      const double t = tau(estimator, params);
      result.value = rho * (c(params.p / 12.0) / sqrt_n) * (1.0 + t) +
                     t * (1.0 + t + params.abs_beta);
      break;
    }
    case BoundEstimator::dp_theil_sen:
    case BoundEstimator::dp_theil_sen_half:
    case BoundEstimator::dp_theil_sen_k_half: {
      const double t = tau(estimator, params);
      double prefactor = 0.0;
      if (estimator == BoundEstimator::dp_theil_sen) {
        prefactor = std::sqrt(pi / 3.0);
        result.asymptotic = true;
      } else if (estimator == BoundEstimator::dp_theil_sen_half) {
        prefactor = std::sqrt(2.0 * pi / 3.0);
      } else {
        if (params.k < 1)
          throw std::invalid_argument("bounds: k must be >= 1");
        const double k = static_cast<double>(params.k);
        prefactor = std::sqrt(2.0 * pi * (2.0 * k + 1.0) / (9.0 * k));
        result.asymptotic = true;
      }
      result.value =
          prefactor * rho * (c(params.p / 16.0) / sqrt_n + t) + params.theta;
      result.constraints.push_back({"tau <= tau_n", t <= params.tau_cap()});
      result.constraints.push_back(
          {"p < R/(sqrt(pi)*theta*sigma_e)",
           params.p < params.range / (std::sqrt(pi) * params.theta *
                                      params.sigma_e)});
      if (estimator == BoundEstimator::dp_theil_sen_half)
        result.constraints.push_back(
            {"n > 16*ln(16/p)",
             params.n > 16.0 * std::log(16.0 / params.p)});
      break;
    }
  }
  return result;
}

// Widening parameter that balances the two failure modes of the widened
// mechanism: theta = max(sigma_e / (eps n sigma_x),
//                        R exp(-eps n ln(2/p) tau_n)).
// The first term tracks the spread of the matched slopes; the second keeps
// theta bounded away from zero when the slopes are concentrated.
inline double suggest_theta(const BoundParams& params) {
  detail::validate_common(params);
  detail::validate_dp_common(params);
  if (!(params.range > 0.0))
    throw std::invalid_argument("bounds: range must be positive");
  const double spread_term =
      params.sigma_e / (params.eps * params.n * params.sigma_x);
  const double floor_term =
      params.range * std::exp(-params.eps * params.n *
                              std::log(2.0 / params.p) * params.tau_cap());
  return std::max(spread_term, floor_term);
}

}  // namespace dpts

#endif  // DPTS_BOUNDS_HPP_
