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

#ifndef DPTS_CORE_HPP_
#define DPTS_CORE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dpts/rng.hpp"

namespace dpts {

// One regression record. Datasets are multisets of these: every operation in
// this library is invariant under permutation of storage order.
struct DataPoint {
  double x = 0.0;
  double y = 0.0;
};

using Dataset = std::vector<DataPoint>;

// Multiset of pairwise slopes. Entries may be +-infinity (vertical pairs)
// until clamped to an output range.
using SlopeMultiset = std::vector<double>;

// A set of matched point pairs produced by k circular-shift matchings
// between the low-x and high-x bins. Every lower-bin point appears in
// exactly k pairs; every upper-bin point in at most k.
struct Matching {
  std::vector<std::pair<DataPoint, DataPoint>> pairs;
  int k = 0;
};

inline void validate_dataset(const Dataset& data) {
  if (data.size() < 2) throw std::invalid_argument("dataset needs n >= 2");
  for (const DataPoint& p : data) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw std::invalid_argument("dataset contains non-finite coordinates");
  }
}

namespace detail {

inline bool point_less(const DataPoint& a, const DataPoint& b) {
  return a.x < b.x || (a.x == b.x && a.y < b.y);
}

}  // namespace detail

// Slope of the unordered pair {a, b}. The pair is first put in canonical
// (x, y)-lexicographic order so the result does not depend on argument
// order; without that, the sign of the vertical-pair branch would flip
// under a swap. Total: returns 0 for identical points, sign(dy)*inf for
// vertical pairs, dy/dx otherwise.
inline double slope(DataPoint a, DataPoint b) {
  if (detail::point_less(b, a)) std::swap(a, b);
  const double dy = b.y - a.y;
  const double dx = b.x - a.x;
  if (dx == 0.0) {
    if (dy == 0.0) return 0.0;
    return dy > 0.0 ? std::numeric_limits<double>::infinity()
                    : -std::numeric_limits<double>::infinity();
  }
  return dy / dx;
}

// Slopes of all C(n,2) unordered pairs, degenerate (equal-x) pairs included.
inline SlopeMultiset all_pairs_slopes(const Dataset& data) {
  validate_dataset(data);
  const std::size_t n = data.size();
  SlopeMultiset slopes;
  slopes.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      slopes.push_back(slope(data[i], data[j]));
  return slopes;
}

// Abbreviated slopes: order points ascending by (x, y) and pair the j-th
// with the (ceil(n/2)+j)-th, j = 1..floor(n/2). The ceil(n/2) offset makes
// the rule well defined for odd n (the middle point is unused). Exactly-equal
// points are interchangeable, so the (x, y) sort fully determines the result
// as a function of the multiset.
inline SlopeMultiset sorted_half_slopes(const Dataset& data) {
  validate_dataset(data);
  Dataset sorted = data;
  std::sort(sorted.begin(), sorted.end(), detail::point_less);
  const std::size_t half = sorted.size() / 2;
  const std::size_t offset = sorted.size() - half;  // ceil(n/2)
  SlopeMultiset slopes;
  slopes.reserve(half);
  for (std::size_t j = 0; j < half; ++j)
    slopes.push_back(slope(sorted[j], sorted[offset + j]));
  return slopes;
}

// Splits the dataset into a low-x bin of size floor(n/2) and a high-x bin of
// size ceil(n/2), so that max{x : bin1} <= min{x : bin2}. Boundary ties are
// broken by y and never by storage position (points equal in both
// coordinates are interchangeable as multiset elements). Each bin is then
// uniformly permuted in place.
inline std::pair<Dataset, Dataset> partition_and_permute(const Dataset& data,
                                                         Rng& rng) {
  validate_dataset(data);
  Dataset sorted = data;
  std::sort(sorted.begin(), sorted.end(), detail::point_less);
  const std::size_t half = sorted.size() / 2;
  Dataset bin1(sorted.begin(), sorted.begin() + half);
  Dataset bin2(sorted.begin() + half, sorted.end());
  rng.shuffle(bin1);
  rng.shuffle(bin2);
  return {std::move(bin1), std::move(bin2)};
}

// k circular-shift matchings between the bins: for each p in [k], draw r_p
// uniform on {1..|bin2|} (with replacement across p; equal draws yield
// duplicate matchings and are kept) and pair the i-th lower point with the
// ((i + r_p) mod |bin2|)-th upper point. Within one matching the map is
// injective, so no upper point is used twice per matching.
inline Matching match_bins(const Dataset& bin1, const Dataset& bin2, int k,
                           Rng& rng) {
  if (bin1.empty() || bin2.empty())
    throw std::invalid_argument("match_bins: empty bin");
  if (bin1.size() > bin2.size())
    throw std::invalid_argument("match_bins: lower bin larger than upper bin");
  if (k < 1) throw std::invalid_argument("match_bins: k must be >= 1");
  const std::size_t m = bin2.size();
  Matching matching;
  matching.k = k;
  matching.pairs.reserve(static_cast<std::size_t>(k) * bin1.size());
  for (int p = 0; p < k; ++p) {
    const std::uint64_t r = rng.below(m) + 1;  // r_p in {1..m}
    for (std::size_t i = 0; i < bin1.size(); ++i) {
      const std::size_t j = (i + 1 + r) % m;  // 1-indexed i, 0-indexed result
      matching.pairs.emplace_back(bin1[i], bin2[j]);
    }
  }
  return matching;
}

inline SlopeMultiset matching_slopes(const Matching& matching) {
  SlopeMultiset slopes;
  slopes.reserve(matching.pairs.size());
  for (const auto& [a, b] : matching.pairs) slopes.push_back(slope(a, b));
  return slopes;
}

}  // namespace dpts

#endif  // DPTS_CORE_HPP_
