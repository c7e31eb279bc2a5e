// Copyright 2026 The nlcausal Authors
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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "errors.hpp"

namespace nlcausal {

/// Percentile q in [0,1] of an ascending sample, linear interpolation
/// between closest ranks (h = (n-1) q).
inline double percentile_sorted(const std::vector<double> &sorted, double q) {
    if (sorted.empty()) {
        throw DomainError("percentile of an empty sample");
    }
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

/// Median plus the 1 sigma and 3 sigma percentile pairs.
struct PercentileSummary {
    double median = 0.0;
    double p0013 = 0.0;
    double p9987 = 0.0;
    double p1587 = 0.0;
    double p8413 = 0.0;
    std::size_t runs = 0;
};

inline PercentileSummary summarize(std::vector<double> sample) {
    std::sort(sample.begin(), sample.end());
    PercentileSummary s;
    s.runs = sample.size();
    s.median = percentile_sorted(sample, 0.5);
    s.p0013 = percentile_sorted(sample, 0.0013);
    s.p9987 = percentile_sorted(sample, 0.9987);
    s.p1587 = percentile_sorted(sample, 0.1587);
    s.p8413 = percentile_sorted(sample, 0.8413);
    return s;
}

} // namespace nlcausal
