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

/**
 * @file
 * Scenario shapes and the conditional probability table p(a,b|x,y).
 *
 * Entries are stored flat with index order (a, b, x, y), last index
 * fastest. This is also the row order of the strategy matrix and the
 * nesting order of the JSON exchange format.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace nlcausal {

/// Setting and outcome counts per party.
struct Scenario {
    int m_x = 2;
    int m_y = 2;
    int o_a = 2;
    int o_b = 2;

    constexpr Scenario() = default;
    constexpr Scenario(int mx, int my, int oa, int ob)
        : m_x(mx), m_y(my), o_a(oa), o_b(ob) {}

    [[nodiscard]] bool valid() const noexcept {
        return m_x >= 1 && m_y >= 1 && o_a >= 1 && o_b >= 1;
    }

    /// Number of entries of p(a,b|x,y).
    [[nodiscard]] std::size_t table_size() const noexcept {
        return static_cast<std::size_t>(o_a) * o_b * m_x * m_y;
    }

    [[nodiscard]] std::size_t index(int a, int b, int x, int y) const noexcept {
        return ((static_cast<std::size_t>(a) * o_b + b) * m_x + x) * m_y + y;
    }

    [[nodiscard]] std::string to_string() const {
        std::ostringstream os;
        os << '(' << m_x << ',' << m_y << ',' << o_a << ',' << o_b << ')';
        return os.str();
    }

    friend bool operator==(const Scenario &, const Scenario &) = default;
};

inline constexpr Scenario kChshScenario{2, 2, 2, 2};
inline constexpr Scenario kThreeSettingScenario{3, 3, 2, 2};

inline void require_valid(const Scenario &s) {
    if (!s.valid()) {
        throw DomainError("scenario " + s.to_string() +
                          " must have all counts >= 1");
    }
}

inline void require_shape(const Scenario &actual, const Scenario &expected,
                          const char *what) {
    if (actual != expected) {
        throw DomainError(std::string(what) + " requires scenario " +
                          expected.to_string() + ", got " +
                          actual.to_string());
    }
}

/**
 * Conditional probability table p(a,b|x,y).
 *
 * Construction validates normalization per (x,y) and clamps rounding
 * noise: entries in [-1e-9, 0) become 0, anything more negative (or above
 * 1 + 1e-9) is rejected as a logic error rather than rounding.
 */
class Behavior {
  public:
    static constexpr double kClampTolerance = 1e-9;
    static constexpr double kNormTolerance = 1e-9;

    Behavior(Scenario scenario, std::vector<double> table)
        : scenario_(scenario), table_(std::move(table)) {
        require_valid(scenario_);
        if (table_.size() != scenario_.table_size()) {
            throw DomainError("behavior table has " +
                              std::to_string(table_.size()) +
                              " entries, scenario " + scenario_.to_string() +
                              " needs " +
                              std::to_string(scenario_.table_size()));
        }
        for (double &p : table_) {
            if (!std::isfinite(p) || p < -kClampTolerance ||
                p > 1.0 + kClampTolerance) {
                throw DomainError("behavior entry out of [0,1]: " +
                                  std::to_string(p));
            }
            p = std::clamp(p, 0.0, 1.0);
        }
        for (int x = 0; x < scenario_.m_x; ++x) {
            for (int y = 0; y < scenario_.m_y; ++y) {
                const double total = block_sum(x, y);
                if (std::abs(total - 1.0) > kNormTolerance) {
                    std::ostringstream os;
                    os << "behavior not normalized at (x=" << x << ",y=" << y
                       << "): sum=" << total;
                    throw DomainError(os.str());
                }
            }
        }
    }

    [[nodiscard]] const Scenario &scenario() const noexcept {
        return scenario_;
    }
    [[nodiscard]] std::span<const double> table() const noexcept {
        return table_;
    }

    [[nodiscard]] double operator()(int a, int b, int x, int y) const {
        return table_[scenario_.index(a, b, x, y)];
    }

    /// Sum over (a,b) for fixed settings.
    [[nodiscard]] double block_sum(int x, int y) const {
        double s = 0.0;
        for (int a = 0; a < scenario_.o_a; ++a) {
            for (int b = 0; b < scenario_.o_b; ++b) {
                s += table_[scenario_.index(a, b, x, y)];
            }
        }
        return s;
    }

    /// p(a|x,y)
    [[nodiscard]] double marginal_a(int a, int x, int y) const {
        double s = 0.0;
        for (int b = 0; b < scenario_.o_b; ++b) {
            s += (*this)(a, b, x, y);
        }
        return s;
    }

    /// p(b|x,y)
    [[nodiscard]] double marginal_b(int b, int x, int y) const {
        double s = 0.0;
        for (int a = 0; a < scenario_.o_a; ++a) {
            s += (*this)(a, b, x, y);
        }
        return s;
    }

    /// Largest |p(a|x,y) - p(a|x,y')|.
    [[nodiscard]] double signalling_to_alice() const {
        double worst = 0.0;
        for (int x = 0; x < scenario_.m_x; ++x) {
            for (int a = 0; a < scenario_.o_a; ++a) {
                for (int y = 1; y < scenario_.m_y; ++y) {
                    worst = std::max(worst, std::abs(marginal_a(a, x, y) -
                                                     marginal_a(a, x, 0)));
                }
            }
        }
        return worst;
    }

    /// Largest |p(b|x,y) - p(b|x',y)|.
    [[nodiscard]] double signalling_to_bob() const {
        double worst = 0.0;
        for (int y = 0; y < scenario_.m_y; ++y) {
            for (int b = 0; b < scenario_.o_b; ++b) {
                for (int x = 1; x < scenario_.m_x; ++x) {
                    worst = std::max(worst, std::abs(marginal_b(b, x, y) -
                                                     marginal_b(b, 0, y)));
                }
            }
        }
        return worst;
    }

    friend bool operator==(const Behavior &, const Behavior &) = default;

  private:
    Scenario scenario_;
    std::vector<double> table_;
};

/// Convex combination sum_k w_k * behaviors[k]; all must share one scenario.
inline Behavior mix(std::span<const Behavior> behaviors,
                    std::span<const double> weights) {
    if (behaviors.empty() || behaviors.size() != weights.size()) {
        throw DomainError("mix needs equally many behaviors and weights");
    }
    const Scenario s = behaviors.front().scenario();
    std::vector<double> table(s.table_size(), 0.0);
    for (std::size_t k = 0; k < behaviors.size(); ++k) {
        require_shape(behaviors[k].scenario(), s, "mix");
        const auto t = behaviors[k].table();
        for (std::size_t j = 0; j < table.size(); ++j) {
            table[j] += weights[k] * t[j];
        }
    }
    return Behavior(s, std::move(table));
}

} // namespace nlcausal
