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
 * Deterministic strategies of the outcome-to-outcome causal model.
 *
 * A->B: a = f_A(x), b = f_B(a, y). One hidden value per pair of response
 * tables, so a scenario has o_a^m_x * o_b^(o_a m_y) strategies.
 * B->A: b = f_B(y), a = f_A(b, x), the mirror image.
 *
 * Strategies are numbered lexicographically over the concatenated tables
 * (f_A entries, then f_B entries; first entry most significant). Table
 * layout: A->B f_A[x], f_B[a*m_y + y]; B->A f_A[b*m_x + x], f_B[y].
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "behavior.hpp"
#include "errors.hpp"
#include "inequalities.hpp"
#include "lp.hpp"

namespace nlcausal {

enum class Direction { a_to_b, b_to_a };

inline const char *to_string(Direction d) {
    return d == Direction::a_to_b ? "AtoB" : "BtoA";
}

struct DeterministicStrategy {
    Direction direction = Direction::a_to_b;
    std::vector<int> f_a;
    std::vector<int> f_b;

    friend bool operator==(const DeterministicStrategy &,
                           const DeterministicStrategy &) = default;
};

/// Response-table lengths (|f_A|, |f_B|) for a direction.
inline std::pair<int, int> table_lengths(const Scenario &s, Direction d) {
    return d == Direction::a_to_b ? std::pair{s.m_x, s.o_a * s.m_y}
                                  : std::pair{s.o_b * s.m_x, s.m_y};
}

/// n = o_a^m_x o_b^(o_a m_y) (A->B), or the mirrored count; nullopt on
/// 64-bit overflow.
inline std::optional<std::uint64_t> strategy_count(const Scenario &s,
                                                   Direction d) {
    require_valid(s);
    const auto [la, lb] = table_lengths(s, d);
    std::uint64_t n = 1;
    auto mul = [&](int base, int times) {
        for (int i = 0; i < times; ++i) {
            if (n > std::numeric_limits<std::uint64_t>::max() /
                        static_cast<std::uint64_t>(base)) {
                return false;
            }
            n *= static_cast<std::uint64_t>(base);
        }
        return true;
    };
    if (!mul(s.o_a, la) || !mul(s.o_b, lb)) {
        return std::nullopt;
    }
    return n;
}

inline constexpr std::uint64_t kDefaultStrategyCap = 1'000'000;

/// Outcome of Alice given her setting and (for B->A) Bob's outcome.
inline int alice_outcome(const DeterministicStrategy &st, const Scenario &s,
                         int x, int b) {
    return st.direction == Direction::a_to_b ? st.f_a[x]
                                             : st.f_a[b * s.m_x + x];
}

/// (a, b) produced by a strategy for settings (x, y).
inline std::pair<int, int> outcomes(const DeterministicStrategy &st,
                                    const Scenario &s, int x, int y) {
    if (st.direction == Direction::a_to_b) {
        const int a = st.f_a[x];
        return {a, st.f_b[a * s.m_y + y]};
    }
    const int b = st.f_b[y];
    return {st.f_a[b * s.m_x + x], b};
}

/// Decodes strategy number `index` (see file comment for the order).
inline DeterministicStrategy strategy_at(const Scenario &s, Direction d,
                                         std::uint64_t index) {
    const auto [la, lb] = table_lengths(s, d);
    const int radix_a = d == Direction::a_to_b ? s.o_a : s.o_a;
    const int radix_b = d == Direction::a_to_b ? s.o_b : s.o_b;
    DeterministicStrategy st{d, std::vector<int>(la), std::vector<int>(lb)};
    for (int i = lb - 1; i >= 0; --i) {
        st.f_b[i] = static_cast<int>(index % radix_b);
        index /= radix_b;
    }
    for (int i = la - 1; i >= 0; --i) {
        st.f_a[i] = static_cast<int>(index % radix_a);
        index /= radix_a;
    }
    return st;
}

inline std::vector<DeterministicStrategy>
enumerate_strategies(const Scenario &s, Direction d,
                     std::uint64_t cap = kDefaultStrategyCap) {
    const auto n = strategy_count(s, d);
    if (!n || *n > cap) {
        throw SizeError("scenario " + s.to_string() + " has " +
                        (n ? std::to_string(*n) : std::string("> 2^64")) +
                        " strategies, cap is " + std::to_string(cap));
    }
    std::vector<DeterministicStrategy> out;
    out.reserve(*n);
    for (std::uint64_t i = 0; i < *n; ++i) {
        out.push_back(strategy_at(s, d, i));
    }
    return out;
}

inline Behavior strategy_behavior(const DeterministicStrategy &st,
                                  const Scenario &s) {
    std::vector<double> table(s.table_size(), 0.0);
    for (int x = 0; x < s.m_x; ++x) {
        for (int y = 0; y < s.m_y; ++y) {
            const auto [a, b] = outcomes(st, s, x, y);
            table[s.index(a, b, x, y)] = 1.0;
        }
    }
    return Behavior(s, std::move(table));
}

/// 0/1 matrix T with T(j, lambda) = [strategy lambda outputs j = (a,b,x,y)].
struct StrategyMatrix {
    Scenario scenario;
    std::vector<DeterministicStrategy> strategies;
    lp::DenseMatrix entries;
};

inline StrategyMatrix strategy_matrix(const Scenario &s,
                                      std::vector<DeterministicStrategy> strategies) {
    StrategyMatrix m{s, std::move(strategies), {}};
    m.entries = lp::DenseMatrix(s.table_size(), m.strategies.size());
    for (std::size_t l = 0; l < m.strategies.size(); ++l) {
        for (int x = 0; x < s.m_x; ++x) {
            for (int y = 0; y < s.m_y; ++y) {
                const auto [a, b] = outcomes(m.strategies[l], s, x, y);
                m.entries(s.index(a, b, x, y), l) = 1.0;
            }
        }
    }
    return m;
}

inline StrategyMatrix strategy_matrix(const Scenario &s, Direction d,
                                      std::uint64_t cap = kDefaultStrategyCap) {
    return strategy_matrix(s, enumerate_strategies(s, d, cap));
}

/// Equal mixture of the two strategies
///   a = x,     b = a (y xor 1)
///   a = x ^ 1, b = y (a xor 1) xor a
/// which yields p(a,b|x,y) = 1/2 [a xor b == x y].
inline std::pair<DeterministicStrategy, DeterministicStrategy> pr_strategies() {
    return {DeterministicStrategy{Direction::a_to_b, {0, 1}, {0, 0, 1, 0}},
            DeterministicStrategy{Direction::a_to_b, {1, 0}, {0, 1, 1, 1}}};
}

inline Behavior pr_box() {
    const auto [s1, s2] = pr_strategies();
    const std::vector<Behavior> parts{strategy_behavior(s1, kChshScenario),
                                      strategy_behavior(s2, kChshScenario)};
    const std::vector<double> w{0.5, 0.5};
    return mix(parts, w);
}

// ---------------------------------------------------------------------------
// Causal-effect measures

/// One (b, y, a, a') instance of the interventional shift, a != a'.
struct ShiftInstance {
    int b, y, a, a_prime;
};

inline std::vector<ShiftInstance> shift_instances(const Scenario &s) {
    std::vector<ShiftInstance> out;
    for (int b = 0; b < s.o_b; ++b) {
        for (int y = 0; y < s.m_y; ++y) {
            for (int a = 0; a < s.o_a; ++a) {
                for (int ap = 0; ap < s.o_a; ++ap) {
                    if (a != ap) {
                        out.push_back({b, y, a, ap});
                    }
                }
            }
        }
    }
    return out;
}

/// delta(b, f_B(a,y)) - delta(b, f_B(a',y)) for an A->B strategy.
inline int shift(const DeterministicStrategy &st, const Scenario &s,
                 const ShiftInstance &i) {
    return static_cast<int>(st.f_b[i.a * s.m_y + i.y] == i.b) -
           static_cast<int>(st.f_b[i.a_prime * s.m_y + i.y] == i.b);
}

/// Probability vector over the lexicographically ordered A->B strategies.
class ExplicitModel {
  public:
    ExplicitModel(Scenario scenario, std::vector<double> weights)
        : scenario_(scenario), weights_(std::move(weights)) {
        const auto n = strategy_count(scenario_, Direction::a_to_b);
        if (!n || *n != weights_.size()) {
            throw DomainError("model needs one weight per A->B strategy");
        }
        double total = 0.0;
        for (double w : weights_) {
            if (!(w >= 0.0)) {
                throw DomainError("model weights must be non-negative");
            }
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-9) {
            throw DomainError("model weights must sum to 1");
        }
    }

    [[nodiscard]] const Scenario &scenario() const noexcept {
        return scenario_;
    }
    [[nodiscard]] const std::vector<double> &weights() const noexcept {
        return weights_;
    }

  private:
    Scenario scenario_;
    std::vector<double> weights_;
};

/// T w for an explicit model.
inline Behavior model_behavior(const ExplicitModel &model) {
    const Scenario &s = model.scenario();
    std::vector<double> table(s.table_size(), 0.0);
    for (std::size_t l = 0; l < model.weights().size(); ++l) {
        const double w = model.weights()[l];
        if (w == 0.0) {
            continue;
        }
        const auto st = strategy_at(s, Direction::a_to_b, l);
        for (int x = 0; x < s.m_x; ++x) {
            for (int y = 0; y < s.m_y; ++y) {
                const auto [a, b] = outcomes(st, s, x, y);
                table[s.index(a, b, x, y)] += w;
            }
        }
    }
    return Behavior(s, std::move(table));
}

/// sup_{b,y,a,a'} sum_lambda w_lambda |delta(b,f_B(a,y)) - delta(b,f_B(a',y))|
inline double direct_causal_effect(const ExplicitModel &model) {
    const Scenario &s = model.scenario();
    const auto instances = shift_instances(s);
    std::vector<double> totals(instances.size(), 0.0);
    for (std::size_t l = 0; l < model.weights().size(); ++l) {
        const double w = model.weights()[l];
        if (w == 0.0) {
            continue;
        }
        const auto st = strategy_at(s, Direction::a_to_b, l);
        for (std::size_t k = 0; k < instances.size(); ++k) {
            totals[k] += w * std::abs(shift(st, s, instances[k]));
        }
    }
    return totals.empty() ? 0.0
                          : *std::max_element(totals.begin(), totals.end());
}

/// ACE of explicit weights: sup |sum_lambda w_lambda shift_lambda|.
inline double ace_of_weights(const Scenario &s,
                             const std::vector<DeterministicStrategy> &strategies,
                             const std::vector<double> &weights) {
    double best = 0.0;
    for (const auto &inst : shift_instances(s)) {
        double v = 0.0;
        for (std::size_t l = 0; l < strategies.size(); ++l) {
            v += weights[l] * shift(strategies[l], s, inst);
        }
        best = std::max(best, std::abs(v));
    }
    return best;
}

enum class AceStatus { optimal, infeasible };

inline const char *to_string(AceStatus s) {
    return s == AceStatus::optimal ? "optimal" : "infeasible";
}

struct AceResult {
    AceStatus status = AceStatus::infeasible;
    double value = 0.0;
    std::vector<double> weights;
    /// Max |T q - p| of the returned weights (0 when infeasible).
    double residual = 0.0;
};

struct PolytopeOptions {
    std::uint64_t max_strategies = kDefaultStrategyCap;
    lp::Options lp{};
};

/// LP: minimize t s.t. T q = p, sum q = 1, q >= 0, shift_i . q <= t.
inline lp::LinearProgram ace_program(const Behavior &behavior,
                                     const StrategyMatrix &m) {
    const Scenario &s = behavior.scenario();
    const std::size_t n = m.strategies.size();
    const std::size_t rows = s.table_size();
    lp::LinearProgram prog;
    prog.num_vars = n;
    prog.equality = lp::DenseMatrix(rows + 1, n);
    prog.rhs.assign(rows + 1, 0.0);
    for (std::size_t j = 0; j < rows; ++j) {
        for (std::size_t l = 0; l < n; ++l) {
            prog.equality(j, l) = m.entries(j, l);
        }
        prog.rhs[j] = behavior.table()[j];
    }
    for (std::size_t l = 0; l < n; ++l) {
        prog.equality(rows, l) = 1.0;
    }
    prog.rhs[rows] = 1.0;
    const auto instances = shift_instances(s);
    prog.coupled = lp::DenseMatrix(instances.size(), n);
    for (std::size_t k = 0; k < instances.size(); ++k) {
        for (std::size_t l = 0; l < n; ++l) {
            prog.coupled(k, l) = shift(m.strategies[l], s, instances[k]);
        }
    }
    return prog;
}

inline double residual(const StrategyMatrix &m, const Behavior &behavior,
                       const std::vector<double> &q) {
    double worst = 0.0;
    for (std::size_t j = 0; j < m.entries.rows; ++j) {
        double v = 0.0;
        for (std::size_t l = 0; l < m.entries.cols; ++l) {
            v += m.entries(j, l) * q[l];
        }
        worst = std::max(worst, std::abs(v - behavior.table()[j]));
    }
    return worst;
}

/// Minimal average causal effect A->B over all models reproducing p.
inline AceResult min_ace(const Behavior &behavior,
                         const PolytopeOptions &opt = {}) {
    const auto m = strategy_matrix(behavior.scenario(), Direction::a_to_b,
                                   opt.max_strategies);
    const auto prog = ace_program(behavior, m);
    const auto out = lp::solve(prog, opt.lp);
    AceResult r;
    if (out.status != lp::Status::optimal) {
        r.status = AceStatus::infeasible;
        return r;
    }
    r.status = AceStatus::optimal;
    r.value = std::max(0.0, out.objective);
    r.weights = out.solution;
    r.residual = residual(m, behavior, r.weights);
    return r;
}

/// max[0, (S2 - 2) / 2] with S2 maximized over the CHSH symmetries.
inline double ace_closed_form(const ChshReport &report) {
    return std::max(0.0, (report.s2 - kChshLocalBound) / 2.0);
}

/**
 * Replaces Alice's marginal p(a|x,y) by its average over y while keeping
 * p(b|a,x,y). Returns the projected behavior and the max-abs entry change.
 */
inline std::pair<Behavior, double>
project_no_signalling_to_alice(const Behavior &behavior) {
    const Scenario &s = behavior.scenario();
    std::vector<double> table(behavior.table().begin(), behavior.table().end());
    double distance = 0.0;
    for (int x = 0; x < s.m_x; ++x) {
        for (int a = 0; a < s.o_a; ++a) {
            double mean = 0.0;
            for (int y = 0; y < s.m_y; ++y) {
                mean += behavior.marginal_a(a, x, y);
            }
            mean /= s.m_y;
            for (int y = 0; y < s.m_y; ++y) {
                const double current = behavior.marginal_a(a, x, y);
                for (int b = 0; b < s.o_b; ++b) {
                    const double cond = current > 0.0
                                            ? behavior(a, b, x, y) / current
                                            : 1.0 / s.o_b;
                    const double v = mean * cond;
                    distance = std::max(distance,
                                        std::abs(v - behavior(a, b, x, y)));
                    table[s.index(a, b, x, y)] = v;
                }
            }
        }
    }
    return {Behavior(s, std::move(table)), distance};
}

// ---------------------------------------------------------------------------
// Vertex checks

/// Integer Bell functional sum_xy c_xy E_xy with E_xy = (-1)^(a+b).
struct IntegerFunctional {
    std::string name;
    Scenario scenario;
    std::vector<std::vector<int>> coefficients; // [x][y]
    int bound = 0;
};

inline IntegerFunctional s3_functional() {
    IntegerFunctional f{"s3", kThreeSettingScenario, {}, 4};
    for (const auto &row : kS3Signs) {
        f.coefficients.emplace_back(row.begin(), row.end());
    }
    return f;
}

/// Raw CHSH form; on outcome-dependent vertices its algebraic maximum 4
/// is attained, so the bound checked is 4.
inline IntegerFunctional chsh_functional() {
    return {"chsh", kChshScenario, {{1, 1}, {1, -1}}, 4};
}

inline int vertex_value(const DeterministicStrategy &st,
                        const IntegerFunctional &f) {
    int total = 0;
    for (int x = 0; x < f.scenario.m_x; ++x) {
        for (int y = 0; y < f.scenario.m_y; ++y) {
            const auto [a, b] = outcomes(st, f.scenario, x, y);
            total += f.coefficients[x][y] * (((a + b) % 2 == 0) ? 1 : -1);
        }
    }
    return total;
}

struct VertexReport {
    std::vector<int> a_to_b_values;
    std::vector<int> b_to_a_values;
    int max_value = std::numeric_limits<int>::min();
    std::vector<DeterministicStrategy> offenders; // value > bound
    [[nodiscard]] bool within_bound() const { return offenders.empty(); }
};

inline VertexReport verify_bound(const IntegerFunctional &f,
                                 const std::vector<DeterministicStrategy> &a_to_b,
                                 const std::vector<DeterministicStrategy> &b_to_a) {
    VertexReport r;
    auto scan = [&](const std::vector<DeterministicStrategy> &set,
                    std::vector<int> &values) {
        values.reserve(set.size());
        for (const auto &st : set) {
            const int v = vertex_value(st, f);
            values.push_back(v);
            r.max_value = std::max(r.max_value, v);
            if (v > f.bound) {
                r.offenders.push_back(st);
            }
        }
    };
    scan(a_to_b, r.a_to_b_values);
    scan(b_to_a, r.b_to_a_values);
    return r;
}

inline VertexReport verify_bound(const IntegerFunctional &f) {
    return verify_bound(f, enumerate_strategies(f.scenario, Direction::a_to_b),
                        enumerate_strategies(f.scenario, Direction::b_to_a));
}

/// All 512 + 512 vertices of the (3,3,2,2) models against S3 <= 4.
inline VertexReport verify_s3_bound() { return verify_bound(s3_functional()); }

// ---------------------------------------------------------------------------
// Membership in the mixture of both directions

/// Separating functional: sum_j coefficients_j p_j <= bound on every vertex
/// of both models, violated by the tested behavior.
struct Certificate {
    std::vector<double> coefficients; // indexed like Behavior::table()
    double bound = 0.0;
    double value = 0.0; // functional at the tested behavior
};

struct MembershipResult {
    bool member = false;
    std::vector<double> weights_a_to_b;
    std::vector<double> weights_b_to_a;
    double infeasibility = 0.0;
    std::optional<Certificate> certificate;
};

inline double evaluate(const Certificate &c, std::span<const double> p) {
    double v = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        v += c.coefficients[j] * p[j];
    }
    return v;
}

/// LP feasibility of p = T_AB q + T_BA mu, sum q + sum mu = 1, q, mu >= 0.
inline MembershipResult mixture_membership(const Behavior &behavior,
                                           const PolytopeOptions &opt = {}) {
    const Scenario &s = behavior.scenario();
    auto strategies = enumerate_strategies(s, Direction::a_to_b, opt.max_strategies);
    const std::size_t n_ab = strategies.size();
    auto mirrored = enumerate_strategies(s, Direction::b_to_a, opt.max_strategies);
    strategies.insert(strategies.end(), mirrored.begin(), mirrored.end());
    const auto m = strategy_matrix(s, std::move(strategies));

    const std::size_t rows = s.table_size();
    const std::size_t n = m.strategies.size();
    lp::LinearProgram prog;
    prog.num_vars = n;
    prog.equality = lp::DenseMatrix(rows + 1, n);
    prog.rhs.assign(rows + 1, 0.0);
    for (std::size_t j = 0; j < rows; ++j) {
        for (std::size_t l = 0; l < n; ++l) {
            prog.equality(j, l) = m.entries(j, l);
        }
        prog.rhs[j] = behavior.table()[j];
    }
    for (std::size_t l = 0; l < n; ++l) {
        prog.equality(rows, l) = 1.0;
    }
    prog.rhs[rows] = 1.0;

    const auto out = lp::solve(prog, opt.lp);
    MembershipResult r;
    r.infeasibility = out.infeasibility;
    if (out.status == lp::Status::optimal) {
        r.member = true;
        r.weights_a_to_b.assign(out.solution.begin(),
                                out.solution.begin() + static_cast<long>(n_ab));
        r.weights_b_to_a.assign(out.solution.begin() + static_cast<long>(n_ab),
                                out.solution.end());
        return r;
    }
    // Farkas ray y: y.T_l + y_norm <= 0 for every vertex, y.p + y_norm > 0.
    const auto &y = out.dual_equality;
    double scale = 0.0;
    for (std::size_t j = 0; j < rows; ++j) {
        scale = std::max(scale, std::abs(y[j]));
    }
    if (scale == 0.0) {
        scale = 1.0;
    }
    Certificate c;
    c.coefficients.resize(rows);
    for (std::size_t j = 0; j < rows; ++j) {
        c.coefficients[j] = y[j] / scale;
    }
    c.bound = -y[rows] / scale;
    c.value = evaluate(c, behavior.table());
    r.certificate = std::move(c);
    return r;
}

// ---------------------------------------------------------------------------
// Vertex CSV: header row, then one strategy per row (f_A entries, f_B entries)

inline std::string vertex_csv_header(const Scenario &s, Direction d) {
    std::ostringstream os;
    bool first = true;
    auto col = [&](const std::string &name) {
        os << (first ? "" : ",") << name;
        first = false;
    };
    if (d == Direction::a_to_b) {
        for (int x = 0; x < s.m_x; ++x) {
            col("fA_x" + std::to_string(x));
        }
        for (int a = 0; a < s.o_a; ++a) {
            for (int y = 0; y < s.m_y; ++y) {
                col("fB_a" + std::to_string(a) + "y" + std::to_string(y));
            }
        }
    } else {
        for (int b = 0; b < s.o_b; ++b) {
            for (int x = 0; x < s.m_x; ++x) {
                col("fA_b" + std::to_string(b) + "x" + std::to_string(x));
            }
        }
        for (int y = 0; y < s.m_y; ++y) {
            col("fB_y" + std::to_string(y));
        }
    }
    return os.str();
}

inline void write_vertices_csv(std::ostream &os, const Scenario &s, Direction d,
                               const std::vector<DeterministicStrategy> &set) {
    os << vertex_csv_header(s, d) << '\n';
    for (const auto &st : set) {
        bool first = true;
        for (int v : st.f_a) {
            os << (first ? "" : ",") << v;
            first = false;
        }
        for (int v : st.f_b) {
            os << ',' << v;
        }
        os << '\n';
    }
}

inline std::string format_strategy(const DeterministicStrategy &st) {
    std::ostringstream os;
    os << to_string(st.direction) << " fA=[";
    for (std::size_t i = 0; i < st.f_a.size(); ++i) {
        os << (i ? "," : "") << st.f_a[i];
    }
    os << "] fB=[";
    for (std::size_t i = 0; i < st.f_b.size(); ++i) {
        os << (i ? "," : "") << st.f_b[i];
    }
    os << ']';
    return os.str();
}

struct VertexParse {
    std::vector<DeterministicStrategy> strategies;
    /// (1-based line number, reason) for rows that are not valid strategies.
    std::vector<std::pair<std::size_t, std::string>> rejected;
};

inline VertexParse read_vertices_csv(std::istream &is, const Scenario &s,
                                     Direction d) {
    const auto [la, lb] = table_lengths(s, d);
    const int radix_a = s.o_a;
    const int radix_b = s.o_b;
    VertexParse out;
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(is, line)) {
        return out;
    }
    ++line_no;
    if (line != vertex_csv_header(s, d)) {
        out.rejected.emplace_back(line_no, "unexpected header: " + line);
    }
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::vector<int> cells;
        std::stringstream ss(line);
        std::string cell;
        bool ok = true;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                cells.push_back(std::stoi(cell, &used));
                ok = ok && used == cell.size();
            } catch (const std::exception &) {
                ok = false;
            }
        }
        if (!ok || static_cast<int>(cells.size()) != la + lb) {
            out.rejected.emplace_back(line_no, "malformed row: " + line);
            continue;
        }
        DeterministicStrategy st{d, {cells.begin(), cells.begin() + la},
                                 {cells.begin() + la, cells.end()}};
        const bool in_range =
            std::all_of(st.f_a.begin(), st.f_a.end(),
                        [&](int v) { return v >= 0 && v < radix_a; }) &&
            std::all_of(st.f_b.begin(), st.f_b.end(),
                        [&](int v) { return v >= 0 && v < radix_b; });
        if (!in_range) {
            out.rejected.emplace_back(line_no, "outcome out of range: " + line);
            continue;
        }
        out.strategies.push_back(std::move(st));
    }
    return out;
}

} // namespace nlcausal
