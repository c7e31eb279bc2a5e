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
 * Simulated interventional experiment: random settings, optional do(a) on
 * Alice's photon, Poissonian coincidence counts and plug-in ACE estimates.
 *
 * Bins are (a_do, a, b, x, y). Settings and the forced outcome are uniform,
 * so bin probabilities are p(a,b|x,y) / (m_x m_y) without intervention and
 * [a == a_do] p(b|do(a_do),y) / (m_x m_y o_a) with it. Each bin count is an
 * independent Poisson variate with mean N times its probability, so the
 * table total fluctuates around N.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "behavior.hpp"
#include "errors.hpp"
#include "quantum.hpp"
#include "random.hpp"
#include "stats.hpp"

namespace nlcausal {

/// Small systematic tilt of the intervention axis (0.14 degrees).
inline constexpr double kSystematicTilt = 0.14 * std::numbers::pi / 180.0;

struct InterventionConfig {
    bool enabled = false;
    /// Deviation of the projection axis from the circular-polarization pole.
    double tilt = 0.0;

    void validate() const {
        if (!(tilt >= 0.0 && tilt < std::numbers::pi / 2)) {
            throw DomainError("intervention tilt must lie in [0, pi/2)");
        }
    }
};

/// p(b | do(a), y) for dichotomic a and b.
class InterventionalTable {
  public:
    explicit InterventionalTable(int m_y) : m_y_(m_y), p_(4 * m_y, 0.0) {}

    [[nodiscard]] int m_y() const noexcept { return m_y_; }
    double &operator()(int a, int b, int y) { return p_[(a * 2 + b) * m_y_ + y]; }
    double operator()(int a, int b, int y) const {
        return p_[(a * 2 + b) * m_y_ + y];
    }

  private:
    int m_y_;
    std::vector<double> p_;
};

/**
 * Bob's statistics after Alice's photon is projected on circular
 * polarization and re-prepared to force outcome a. The projection is
 * modelled by the Alice-side operator (I + (-1)^a sin(tilt) Z) / 2: at zero
 * tilt it is I/2 and Bob sees his reduced state whatever a is; a tilt
 * leaks a component along Z that correlates the forced outcome with Bob.
 */
inline InterventionalTable
intervened_distribution(const TwoQubitState &state,
                        std::span<const EquatorialSetting> settings_b,
                        const InterventionConfig &config,
                        const DetectorModel &detector = {}) {
    if (!config.enabled) {
        throw DomainError("intervened_distribution needs an enabled intervention");
    }
    config.validate();
    if (settings_b.empty()) {
        throw DomainError("intervened_distribution needs Bob settings");
    }
    const PauliForm f = pauli_form(state);
    const LocalOperator identity{1.0, {}};
    InterventionalTable table(static_cast<int>(settings_b.size()));
    for (int a = 0; a < 2; ++a) {
        const double z = (a == 0 ? 0.5 : -0.5) * std::sin(config.tilt);
        const LocalOperator e{0.5, {0.0, 0.0, z}};
        const double norm = expectation(f, e, identity);
        for (int y = 0; y < table.m_y(); ++y) {
            if (settings_b[y].party != Party::bob) {
                throw DomainError("Bob's setting list contains an Alice setting");
            }
            for (int b = 0; b < 2; ++b) {
                table(a, b, y) =
                    expectation(f, e, povm_element(detector, settings_b[y], b)) /
                    norm;
            }
        }
    }
    return table;
}

inline constexpr int kNoIntervention = -1;

/// Per-bin values (counts or expected counts) indexed by (a_do, a, b, x, y).
template <class T>
class BasicCountsTable {
  public:
    BasicCountsTable(Scenario scenario, bool intervened, std::int64_t total_target)
        : scenario_(scenario), intervened_(intervened),
          total_target_(total_target),
          values_(static_cast<std::size_t>(slots()) * scenario.table_size(), T{}) {
        require_valid(scenario_);
    }

    [[nodiscard]] const Scenario &scenario() const noexcept { return scenario_; }
    [[nodiscard]] bool intervened() const noexcept { return intervened_; }
    [[nodiscard]] std::int64_t total_target() const noexcept { return total_target_; }
    [[nodiscard]] int slots() const noexcept { return intervened_ ? scenario_.o_a : 1; }
    [[nodiscard]] std::span<const T> values() const noexcept { return values_; }
    [[nodiscard]] std::span<T> values() noexcept { return values_; }

    /// a_do is kNoIntervention for observational tables.
    T &at(int a_do, int a, int b, int x, int y) { return values_[offset(a_do, a, b, x, y)]; }
    const T &at(int a_do, int a, int b, int x, int y) const {
        return values_[offset(a_do, a, b, x, y)];
    }

    [[nodiscard]] T total() const {
        T sum{};
        for (const T &v : values_) {
            sum += v;
        }
        return sum;
    }

    friend bool operator==(const BasicCountsTable &, const BasicCountsTable &) = default;

  private:
    [[nodiscard]] std::size_t offset(int a_do, int a, int b, int x, int y) const {
        if (intervened_ ? (a_do < 0 || a_do >= scenario_.o_a)
                        : a_do != kNoIntervention) {
            throw DomainError("counts table: forced outcome index mismatch");
        }
        const std::size_t slot = intervened_ ? static_cast<std::size_t>(a_do) : 0;
        return slot * scenario_.table_size() + scenario_.index(a, b, x, y);
    }

    Scenario scenario_;
    bool intervened_;
    std::int64_t total_target_;
    std::vector<T> values_;
};

using CountsTable = BasicCountsTable<std::int64_t>;
using ExpectedCounts = BasicCountsTable<double>;

/// Bin probabilities (summing to 1) of one experimental configuration.
inline ExpectedCounts bin_probabilities(const TwoQubitState &state,
                                        std::span<const EquatorialSetting> settings_a,
                                        std::span<const EquatorialSetting> settings_b,
                                        const InterventionConfig &config,
                                        const DetectorModel &detector = {}) {
    config.validate();
    const Behavior p = born_behavior(state, settings_a, settings_b, detector);
    const Scenario &s = p.scenario();
    ExpectedCounts out(s, config.enabled, 1);
    const double settings_weight = 1.0 / (s.m_x * s.m_y);
    if (!config.enabled) {
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                for (int x = 0; x < s.m_x; ++x) {
                    for (int y = 0; y < s.m_y; ++y) {
                        out.at(kNoIntervention, a, b, x, y) =
                            settings_weight * p(a, b, x, y);
                    }
                }
            }
        }
        return out;
    }
    const auto forced = intervened_distribution(state, settings_b, config, detector);
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            for (int x = 0; x < s.m_x; ++x) {
                for (int y = 0; y < s.m_y; ++y) {
                    out.at(a, a, b, x, y) = 0.5 * settings_weight * forced(a, b, y);
                }
            }
        }
    }
    return out;
}

/// Infinite-statistics table: N times the bin probabilities.
inline ExpectedCounts expected_counts(const TwoQubitState &state,
                                      std::span<const EquatorialSetting> settings_a,
                                      std::span<const EquatorialSetting> settings_b,
                                      const InterventionConfig &config,
                                      std::int64_t total_counts) {
    ExpectedCounts probs = bin_probabilities(state, settings_a, settings_b, config);
    ExpectedCounts out(probs.scenario(), probs.intervened(), total_counts);
    for (std::size_t i = 0; i < probs.values().size(); ++i) {
        out.values()[i] = static_cast<double>(total_counts) * probs.values()[i];
    }
    return out;
}

/// Poisson draw per bin, in bin-index order, from one engine.
inline CountsTable sample_counts(const ExpectedCounts &means, Engine &engine) {
    CountsTable out(means.scenario(), means.intervened(), means.total_target());
    for (std::size_t i = 0; i < means.values().size(); ++i) {
        const double mu = means.values()[i];
        if (mu > 0.0) {
            std::poisson_distribution<std::int64_t> dist(mu);
            out.values()[i] = dist(engine);
        }
    }
    return out;
}

inline CountsTable simulate_run(const TwoQubitState &state,
                                std::span<const EquatorialSetting> settings_a,
                                std::span<const EquatorialSetting> settings_b,
                                const InterventionConfig &config,
                                std::int64_t total_counts, std::uint64_t seed) {
    if (total_counts <= 0) {
        throw DomainError("simulate_run needs total_counts > 0");
    }
    auto engine = make_engine(seed);
    return sample_counts(
        expected_counts(state, settings_a, settings_b, config, total_counts), engine);
}

// ---------------------------------------------------------------------------
// Estimation

/// max over (b, y, a != a') of |p^(b|do(a),y) - p^(b|do(a'),y)|.
template <class T>
double ace_plugin(const BasicCountsTable<T> &counts) {
    if (!counts.intervened()) {
        throw DomainError("ACE estimation needs an interventional counts table");
    }
    const Scenario &s = counts.scenario();
    // cond[(a*o_b + b)*m_y + y] = p^(b | do(a), y)
    std::vector<double> cond(static_cast<std::size_t>(s.o_a * s.o_b * s.m_y));
    for (int a_do = 0; a_do < s.o_a; ++a_do) {
        for (int y = 0; y < s.m_y; ++y) {
            std::vector<double> per_b(s.o_b, 0.0);
            for (int a = 0; a < s.o_a; ++a) {
                for (int b = 0; b < s.o_b; ++b) {
                    for (int x = 0; x < s.m_x; ++x) {
                        per_b[b] += static_cast<double>(counts.at(a_do, a, b, x, y));
                    }
                }
            }
            double n = 0.0;
            for (double v : per_b) {
                n += v;
            }
            if (!(n > 0.0)) {
                throw EstimationError("empty conditioning cell (do(a)=" +
                                      std::to_string(a_do) +
                                      ", y=" + std::to_string(y) + ")");
            }
            for (int b = 0; b < s.o_b; ++b) {
                cond[(a_do * s.o_b + b) * s.m_y + y] = per_b[b] / n;
            }
        }
    }
    double best = 0.0;
    for (int b = 0; b < s.o_b; ++b) {
        for (int y = 0; y < s.m_y; ++y) {
            for (int a = 0; a < s.o_a; ++a) {
                for (int ap = a + 1; ap < s.o_a; ++ap) {
                    best = std::max(best, std::abs(cond[(a * s.o_b + b) * s.m_y + y] -
                                                   cond[(ap * s.o_b + b) * s.m_y + y]));
                }
            }
        }
    }
    return best;
}

struct EstimateOptions {
    std::size_t runs = 2000;
    std::uint64_t seed = 0;
};

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

/**
 * Parametric-bootstrap 3 sigma interval of a statistic of a counts table:
 * every bin is redrawn from a Poisson law with the observed count as mean
 * and the statistic is recomputed; the interval is the [0.13%, 99.87%]
 * percentile range, widened if needed to contain `point`. Replicates for
 * which the statistic throws EstimationError (an emptied cell) are skipped.
 */
template <class Statistic>
Interval bootstrap_interval(const CountsTable &counts, Statistic &&statistic,
                            double point, const EstimateOptions &options = {}) {
    ExpectedCounts means(counts.scenario(), counts.intervened(), counts.total_target());
    for (std::size_t i = 0; i < counts.values().size(); ++i) {
        means.values()[i] = static_cast<double>(counts.values()[i]);
    }
    std::vector<double> replicates;
    replicates.reserve(options.runs);
    for (std::size_t r = 0; r < options.runs; ++r) {
        auto engine = make_engine(options.seed, r);
        try {
            replicates.push_back(statistic(sample_counts(means, engine)));
        } catch (const EstimationError &) {
        }
    }
    if (replicates.empty()) {
        return {point, point};
    }
    const PercentileSummary s = summarize(std::move(replicates));
    return {std::min(s.p0013, point), std::max(s.p9987, point)};
}

struct AceEstimate {
    double value = 0.0;
    double interval_low = 0.0;
    double interval_high = 0.0;
};

/// Plug-in ACE with its bootstrap interval over the full sup statistic.
inline AceEstimate estimate_ace(const CountsTable &counts,
                                const EstimateOptions &options = {}) {
    AceEstimate est;
    est.value = ace_plugin(counts);
    const Interval iv = bootstrap_interval(
        counts, [](const CountsTable &t) { return ace_plugin(t); }, est.value, options);
    est.interval_low = iv.low;
    est.interval_high = iv.high;
    return est;
}

/// Relative frequencies p^(a,b|x,y) of an observational table.
template <class T>
Behavior empirical_behavior(const BasicCountsTable<T> &counts) {
    if (counts.intervened()) {
        throw DomainError("empirical_behavior needs an observational counts table");
    }
    const Scenario &s = counts.scenario();
    std::vector<double> table(s.table_size());
    for (int x = 0; x < s.m_x; ++x) {
        for (int y = 0; y < s.m_y; ++y) {
            double n = 0.0;
            for (int a = 0; a < s.o_a; ++a) {
                for (int b = 0; b < s.o_b; ++b) {
                    n += static_cast<double>(counts.at(kNoIntervention, a, b, x, y));
                }
            }
            if (!(n > 0.0)) {
                throw EstimationError("empty setting cell (x=" + std::to_string(x) +
                                      ", y=" + std::to_string(y) + ")");
            }
            for (int a = 0; a < s.o_a; ++a) {
                for (int b = 0; b < s.o_b; ++b) {
                    table[s.index(a, b, x, y)] =
                        static_cast<double>(counts.at(kNoIntervention, a, b, x, y)) / n;
                }
            }
        }
    }
    return Behavior(s, std::move(table));
}

// ---------------------------------------------------------------------------
// CSV: x,y,a_do,a,b,count with "-" in a_do for observational tables

inline constexpr const char *kCountsCsvHeader = "x,y,a_do,a,b,count";

inline void write_counts_csv(std::ostream &os, const CountsTable &counts) {
    const Scenario &s = counts.scenario();
    os << kCountsCsvHeader << '\n';
    for (int x = 0; x < s.m_x; ++x) {
        for (int y = 0; y < s.m_y; ++y) {
            for (int slot = 0; slot < counts.slots(); ++slot) {
                const int a_do = counts.intervened() ? slot : kNoIntervention;
                for (int a = 0; a < s.o_a; ++a) {
                    for (int b = 0; b < s.o_b; ++b) {
                        os << x << ',' << y << ',';
                        if (counts.intervened()) {
                            os << a_do;
                        } else {
                            os << '-';
                        }
                        os << ',' << a << ',' << b << ','
                           << counts.at(a_do, a, b, x, y) << '\n';
                    }
                }
            }
        }
    }
}

/// Parses write_counts_csv output; the scenario is the index range seen and
/// bins without a row count as zero.
inline CountsTable read_counts_csv(std::istream &is) {
    std::string line;
    if (!std::getline(is, line) || line != kCountsCsvHeader) {
        throw DomainError(std::string("counts CSV must start with header ") +
                          kCountsCsvHeader);
    }
    struct Row {
        int x, y, a_do, a, b;
        std::int64_t count;
    };
    std::vector<Row> rows;
    int intervened = -1;
    Scenario s{0, 0, 0, 0};
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        const std::string where = "counts CSV line " + std::to_string(line_no);
        if (cells.size() != 6) {
            throw DomainError(where + ": expected 6 fields");
        }
        Row r{};
        try {
            r.x = std::stoi(cells[0]);
            r.y = std::stoi(cells[1]);
            r.a_do = cells[2] == "-" ? kNoIntervention : std::stoi(cells[2]);
            r.a = std::stoi(cells[3]);
            r.b = std::stoi(cells[4]);
            r.count = std::stoll(cells[5]);
        } catch (const std::exception &) {
            throw DomainError(where + ": non-integer field");
        }
        const int this_intervened = r.a_do == kNoIntervention ? 0 : 1;
        if (intervened >= 0 && intervened != this_intervened) {
            throw DomainError(where + ": mixes observational and forced rows");
        }
        intervened = this_intervened;
        if (r.x < 0 || r.y < 0 || r.a < 0 || r.b < 0 || r.count < 0 ||
            (this_intervened && r.a_do < 0)) {
            throw DomainError(where + ": negative field");
        }
        if (this_intervened && r.a != r.a_do && r.count != 0) {
            throw DomainError(where + ": nonzero count with a != a_do");
        }
        for (const Row &prev : rows) {
            if (prev.x == r.x && prev.y == r.y && prev.a_do == r.a_do && prev.a == r.a &&
                prev.b == r.b) {
                throw DomainError(where + ": duplicate bin");
            }
        }
        s.m_x = std::max(s.m_x, r.x + 1);
        s.m_y = std::max(s.m_y, r.y + 1);
        s.o_a = std::max({s.o_a, r.a + 1, r.a_do + 1});
        s.o_b = std::max(s.o_b, r.b + 1);
        rows.push_back(r);
    }
    if (rows.empty()) {
        throw DomainError("counts CSV has no data rows");
    }
    std::int64_t total = 0;
    for (const Row &r : rows) {
        total += r.count;
    }
    CountsTable out(s, intervened == 1, total);
    for (const Row &r : rows) {
        out.at(r.a_do, r.a, r.b, r.x, r.y) += r.count;
    }
    return out;
}

} // namespace nlcausal
