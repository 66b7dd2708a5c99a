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
// Widened exponential mechanism for quantile selection over a bounded range,
// plus an exact piecewise-density oracle for auditing it.
//
// Given a multiset s_1..s_N clamped to [-R, R], a target quantile q and a
// widening radius theta, a candidate output y has utility
//
//   u(y) = -dist(qN, [#{s_i < y - theta}, #{s_i <= y + theta}])
//
// with the window [y - theta, y + theta] intersected with [-R, R]. In words:
// the window around y spans a contiguous interval of attainable ranks, and
// the utility is the (negative) distance from the target rank qN to that
// interval. The widening keeps a length >= theta region at utility 0 even
// when the data are a single point mass. Replacing one element of the
// multiset moves each rank count by at most one, so the utility has
// sensitivity 1 and sampling with density proportional to
// exp(eps_mech * u(y) / 2) is eps_mech-DP with respect to the multiset.
//
// u is piecewise constant with breakpoints in {s_i - theta, s_i + theta}
// clipped to [-R, R], which makes both exact density evaluation and exact
// sampling straightforward: pick an interval by Gumbel-max over
// log(length) + eps_mech * u / 2, then draw uniformly inside it. Everything
// is kept in log space so extreme eps_mech values cannot overflow.
//
// The certificate provided by exact_density is about the mathematical output
// distribution; floating-point side channels (snapping defenses and the
// like) are out of scope.

#ifndef DPTS_MECHANISM_HPP_
#define DPTS_MECHANISM_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dpts/core.hpp"
#include "dpts/rng.hpp"

namespace dpts {

// One quantile request against a slope multiset: which quantile, the output
// range [-range, range], the widening radius and the mechanism-level privacy
// parameter. Estimators are responsible for scaling a dataset-level epsilon
// down to eps_mech before building a query.
struct QuantileQuery {
  double quantile = 0.5;
  double range = 0.0;  // R; outputs live in [-R, R]
  double theta = 0.0;
  double eps_mech = 0.0;

  void validate() const {
    if (!(quantile > 0.0 && quantile < 1.0))
      throw std::invalid_argument("quantile must be in (0, 1)");
    if (!(range > 0.0) || !std::isfinite(range))
      throw std::invalid_argument("range must be positive and finite");
    if (!(theta > 0.0) || !std::isfinite(theta))
      throw std::invalid_argument("theta must be positive and finite");
    if (!(eps_mech > 0.0))
      throw std::invalid_argument("eps_mech must be positive");
  }
};

// Maps every slope to [-range, range]; +-infinity lands on the endpoints.
inline SlopeMultiset clamp_slopes(const SlopeMultiset& slopes, double range) {
  SlopeMultiset out;
  out.reserve(slopes.size());
  for (double s : slopes) out.push_back(std::min(std::max(s, -range), range));
  return out;
}

namespace detail {

// Utility at y for sorted clamped slopes and target rank t = q * N.
inline double utility_sorted(const std::vector<double>& sorted, double t,
                             double theta, double range, double y) {
  const double lo = std::max(y - theta, -range);
  const double hi = std::min(y + theta, range);
  const double below =
      static_cast<double>(std::lower_bound(sorted.begin(), sorted.end(), lo) -
                          sorted.begin());  // #{s < lo}
  const double at_or_below =
      static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), hi) -
                          sorted.begin());  // #{s <= hi}
  if (t < below) return below - t;
  if (t > at_or_below) return t - at_or_below;
  return 0.0;
}

inline double log_sum_exp(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  double acc = 0.0;
  for (double x : v) acc += std::exp(x - m);
  return m + std::log(acc);
}

}  // namespace detail

// Widened rank utility of candidate output y (<= 0, and half-integral when
// q * N is). Requires y in [-range, range] and slopes already clamped.
inline double widened_utility(const SlopeMultiset& slopes,
                              const QuantileQuery& query, double y) {
  query.validate();
  if (!(y >= -query.range && y <= query.range))
    throw std::invalid_argument("widened_utility: y outside [-R, R]");
  std::vector<double> sorted = slopes;
  for (double s : sorted)
    if (!(s >= -query.range && s <= query.range))
      throw std::invalid_argument("widened_utility: slopes must be clamped");
  std::sort(sorted.begin(), sorted.end());
  return -detail::utility_sorted(sorted,
                                 query.quantile * static_cast<double>(sorted.size()),
                                 query.theta, query.range, y);
}

// The exact, normalized output density of the mechanism: a partition of
// [-R, R] into intervals of constant utility with per-interval log mass.
struct PiecewiseDensity {
  std::vector<double> edges;       // size m + 1; edges.front() = -R, back() = R
  std::vector<double> utility;     // size m; constant on (edges[i], edges[i+1])
  std::vector<double> log_weight;  // size m; eps_mech * u / 2 + log(length)
  double log_norm = 0.0;           // log of total unnormalized mass
  double eps_mech = 0.0;
  double theta = 0.0;
  double target_rank = 0.0;
  double range = 0.0;

  std::size_t interval_count() const { return utility.size(); }

  // Index of the interval containing y; points on an edge resolve to the
  // interval on their right (the last interval for y = R).
  std::size_t interval_at(double y) const {
    auto it = std::upper_bound(edges.begin(), edges.end(), y);
    if (it == edges.begin()) return 0;
    std::size_t i = static_cast<std::size_t>(it - edges.begin()) - 1;
    return std::min(i, utility.size() - 1);
  }

  // Log of the normalized probability density at y.
  double log_density(double y) const {
    if (!(y >= -range && y <= range))
      throw std::invalid_argument("log_density: y outside [-R, R]");
    return eps_mech * utility[interval_at(y)] / 2.0 - log_norm;
  }

  double interval_mass(std::size_t i) const {
    return std::exp(log_weight[i] - log_norm);
  }

  double total_mass() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < log_weight.size(); ++i)
      acc += interval_mass(i);
    return acc;
  }

  // P(output > y); linear within the straddling interval.
  double mass_above(double y) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < utility.size(); ++i) {
      const double a = edges[i], b = edges[i + 1];
      if (a >= y) {
        acc += interval_mass(i);
      } else if (b > y) {
        acc += interval_mass(i) * (b - y) / (b - a);
      }
    }
    return std::min(std::max(acc, 0.0), 1.0);
  }
};

// Builds the exact output density for a clamped slope multiset. theta may
// exceed the range here (the density degenerates to uniform once the window
// always covers everything); estimator-level preconditions keep theta < R.
inline PiecewiseDensity exact_density(const SlopeMultiset& slopes,
                                      const QuantileQuery& query) {
  query.validate();
  if (slopes.empty())
    throw std::invalid_argument("exact_density: empty slope multiset");
  std::vector<double> sorted = slopes;
  for (double s : sorted)
    if (!(s >= -query.range && s <= query.range))
      throw std::invalid_argument("exact_density: slopes must be clamped");
  std::sort(sorted.begin(), sorted.end());

  const double range = query.range;
  std::vector<double> edges;
  edges.reserve(2 * sorted.size() + 2);
  edges.push_back(-range);
  edges.push_back(range);
  for (double s : sorted) {
    edges.push_back(std::min(std::max(s - query.theta, -range), range));
    edges.push_back(std::min(std::max(s + query.theta, -range), range));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  PiecewiseDensity density;
  density.eps_mech = query.eps_mech;
  density.theta = query.theta;
  density.target_rank = query.quantile * static_cast<double>(sorted.size());
  density.range = range;
  density.edges.reserve(edges.size());
  density.edges.push_back(edges.front());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i], b = edges[i + 1];
    if (!(b > a)) continue;  // coincident breakpoints carry no mass
    const double mid = a + (b - a) / 2.0;
    const double u = -detail::utility_sorted(sorted, density.target_rank,
                                             query.theta, range, mid);
    density.edges.push_back(b);
    density.utility.push_back(u);
    density.log_weight.push_back(query.eps_mech * u / 2.0 + std::log(b - a));
  }
  density.log_norm = detail::log_sum_exp(density.log_weight);
  return density;
}

// One draw from the widened exponential mechanism: Gumbel-max over the
// interval log masses, then uniform within the winning interval.
inline double dpwide_sample(const SlopeMultiset& slopes,
                            const QuantileQuery& query, Rng& rng) {
  const PiecewiseDensity density = exact_density(slopes, query);
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < density.log_weight.size(); ++i) {
    const double score = density.log_weight[i] + rng.gumbel();
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  return rng.uniform(density.edges[best], density.edges[best + 1]);
}

}  // namespace dpts

#endif  // DPTS_MECHANISM_HPP_
