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
 * Bell functionals on dichotomic behaviors:
 *
 *   S2 = E00 + E01 + E10 - E11                    (bound 2, local models)
 *   S3 = E00 - E02 - E11 + E12 - E20 + E21        (bound 4, one-way
 *                                                  outcome influence)
 *
 * with E_xy = sum_ab (-1)^(a+b) p(a,b|x,y).
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "behavior.hpp"
#include "errors.hpp"
#include "quantum.hpp"

namespace nlcausal {

inline constexpr double kChshLocalBound = 2.0;
inline constexpr double kS3Bound = 4.0;

/// E[x][y] for a scenario with two outcomes per party.
inline std::vector<std::vector<double>> correlators(const Behavior &behavior) {
    const Scenario &s = behavior.scenario();
    if (s.o_a != 2 || s.o_b != 2) {
        throw DomainError("correlators need dichotomic outcomes, scenario " +
                          s.to_string());
    }
    std::vector<std::vector<double>> e(s.m_x, std::vector<double>(s.m_y));
    for (int x = 0; x < s.m_x; ++x) {
        for (int y = 0; y < s.m_y; ++y) {
            e[x][y] = behavior(0, 0, x, y) + behavior(1, 1, x, y) -
                      behavior(0, 1, x, y) - behavior(1, 0, x, y);
        }
    }
    return e;
}

// ---------------------------------------------------------------------------
// CHSH relabelling symmetries

/**
 * Relabelling of a (2,2,2,2) behavior. Applied in this order: output flips
 * (conditioned on the original input), input swaps, party exchange.
 */
struct Relabelling {
    bool swap_x = false;
    bool swap_y = false;
    std::array<bool, 2> flip_a{}; // flip Alice's output when x == index
    std::array<bool, 2> flip_b{};
    bool exchange_parties = false;

    friend bool operator==(const Relabelling &, const Relabelling &) = default;
};

inline Behavior apply(const Relabelling &r, const Behavior &behavior) {
    require_shape(behavior.scenario(), kChshScenario, "CHSH relabelling");
    const Scenario &s = behavior.scenario();
    std::vector<double> out(s.table_size());
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            for (int x = 0; x < 2; ++x) {
                for (int y = 0; y < 2; ++y) {
                    int na = r.flip_a[x] ? 1 - a : a;
                    int nb = r.flip_b[y] ? 1 - b : b;
                    int nx = r.swap_x ? 1 - x : x;
                    int ny = r.swap_y ? 1 - y : y;
                    if (r.exchange_parties) {
                        std::swap(na, nb);
                        std::swap(nx, ny);
                    }
                    out[s.index(na, nb, nx, ny)] = behavior(a, b, x, y);
                }
            }
        }
    }
    return Behavior(s, std::move(out));
}

/**
 * Eight relabellings whose CHSH values are the eight distinct CHSH forms
 * +/-(E00 + E01 + E10 + E11 - 2 E_xy). Index k: bit 0 swaps x, bit 1 swaps
 * y, bit 2 flips all of Alice's outputs.
 */
inline std::array<Relabelling, 8> chsh_symmetries() {
    std::array<Relabelling, 8> out{};
    for (int k = 0; k < 8; ++k) {
        out[k].swap_x = (k & 1) != 0;
        out[k].swap_y = (k & 2) != 0;
        const bool flip = (k & 4) != 0;
        out[k].flip_a = {flip, flip};
    }
    return out;
}

struct ChshReport {
    double s2 = 0.0;
    int best_symmetry_index = 0;
    std::array<double, 8> per_symmetry_values{};
};

/// S2 of the unsymmetrized form.
inline double chsh_raw(const Behavior &behavior) {
    const auto e = correlators(behavior);
    return e[0][0] + e[0][1] + e[1][0] - e[1][1];
}

inline ChshReport chsh_value(const Behavior &behavior) {
    require_shape(behavior.scenario(), kChshScenario, "chsh_value");
    ChshReport report;
    const auto syms = chsh_symmetries();
    for (int k = 0; k < 8; ++k) {
        report.per_symmetry_values[k] = chsh_raw(apply(syms[k], behavior));
    }
    const auto best = std::max_element(report.per_symmetry_values.begin(),
                                       report.per_symmetry_values.end());
    report.best_symmetry_index =
        static_cast<int>(best - report.per_symmetry_values.begin());
    report.s2 = *best;
    return report;
}

// ---------------------------------------------------------------------------
// Three-setting functional

struct S3Report {
    double s3 = 0.0;
    /// E00, E02, E11, E12, E20, E21 in that order.
    std::array<double, 6> expectation_terms{};
};

inline S3Report s3_value(const Behavior &behavior) {
    require_shape(behavior.scenario(), kThreeSettingScenario, "s3_value");
    const auto e = correlators(behavior);
    S3Report r;
    r.expectation_terms = {e[0][0], e[0][2], e[1][1], e[1][2], e[2][0], e[2][1]};
    r.s3 = e[0][0] - e[0][2] - e[1][1] + e[1][2] - e[2][0] + e[2][1];
    return r;
}

/// Signs c_xy with S3 = sum c_xy E_xy.
inline constexpr std::array<std::array<int, 3>, 3> kS3Signs{
    {{1, 0, -1}, {0, -1, 1}, {-1, 1, 0}}};

// ---------------------------------------------------------------------------
// Standard measurement settings

struct SettingsPair {
    std::vector<EquatorialSetting> alice;
    std::vector<EquatorialSetting> bob;
};

/// CHSH settings optimal for the maximally entangled state.
inline SettingsPair chsh_fixed_settings() {
    using std::numbers::pi;
    return {alice_settings({0.0, pi / 2}), bob_settings({pi / 4, -pi / 4})};
}

/**
 * CHSH settings optimal for rho_gamma: Bob measures along the principal
 * axes Z and X, Alice at +/-atan(sin 2g). Reaches S2 = 2 sqrt(1 + sin^2 2g).
 */
inline SettingsPair chsh_optimal_settings(double gamma) {
    using std::numbers::pi;
    const double w = std::atan(std::abs(std::sin(2.0 * gamma)));
    return {alice_settings({w, -w}), bob_settings({0.0, pi / 2})};
}

inline double chsh_optimal_value(double gamma) {
    const double s = std::sin(2.0 * gamma);
    return 2.0 * std::sqrt(1.0 + s * s);
}

/// S3 settings optimal for the maximally entangled state.
inline SettingsPair s3_fixed_settings() {
    using std::numbers::pi;
    return {alice_settings({-pi / 6, 7 * pi / 6, pi / 2}),
            bob_settings({-pi / 3, pi / 3, pi})};
}

/// Template A = {-alpha, alpha + pi, pi/2}, B = {-beta, beta, pi}.
inline SettingsPair s3_template_settings(double alpha, double beta) {
    using std::numbers::pi;
    return {alice_settings({-alpha, alpha + pi, pi / 2}),
            bob_settings({-beta, beta, pi})};
}

// ---------------------------------------------------------------------------
// Analytic S3 curves

/// S3 of rho_gamma(1) under the fixed settings: (3/2) sqrt3 (1 + sin 2g).
inline double s3_fixed_curve(double gamma) {
    return 1.5 * std::numbers::sqrt3 * (1.0 + std::sin(2.0 * gamma));
}

/**
 * Maximum of S3 over the alpha/beta template for rho_gamma(1), in closed
 * form. With c = cos 4g:
 *
 *   S3 = sqrt6 (sqrt(c^2 + 3) - c + 3) / sqrt(2 sqrt(c^2 + 3) + 3 - c)
 *
 * It equals the expression
 *   [(sqrt(cos 4u + 7) - sqrt2 (cos 2u - 3)) / (2 cos^2 u)]
 *     * sqrt(cos 2u + sqrt2 sqrt(cos 4u + 7) - 3)
 * at u = 2g, rationalized to remove its 0/0 at g = pi/4.
 */
inline double s3_optimized_closed_form(double gamma) {
    const double c = std::cos(4.0 * gamma);
    const double r = std::sqrt(c * c + 3.0);
    return std::sqrt(6.0) * (r - c + 3.0) / std::sqrt(2.0 * r + 3.0 - c);
}

/// S3 of rho_gamma(1) for the template angles, from Born-rule correlations.
inline double s3_template_value(double gamma, double alpha, double beta) {
    const TwoQubitState state(gamma);
    const SettingsPair st = s3_template_settings(alpha, beta);
    double total = 0.0;
    for (int x = 0; x < 3; ++x) {
        for (int y = 0; y < 3; ++y) {
            if (kS3Signs[x][y] != 0) {
                total += kS3Signs[x][y] *
                         correlation(state, st.alice[x].theta, st.bob[y].theta);
            }
        }
    }
    return total;
}

/// Golden-section search for the maximizer of a unimodal f on [lo, hi].
inline double golden_section_maximize(const std::function<double(double)> &f,
                                      double lo, double hi, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    while (hi - lo > tol) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    return 0.5 * (lo + hi);
}

struct OptimalSettings {
    double alpha = 0.0;
    double beta = 0.0;
    double predicted_s3 = 0.0;
    bool violation = false; // predicted_s3 > 4
};

/**
 * Maximizes S3 over the template angles by nested golden-section search on
 * [0, pi/2] per angle. Valid for gamma in [0, pi/2]; at the endpoints the
 * state is separable and the result (4) is flagged as no violation.
 */
inline OptimalSettings s3_optimized_curve(double gamma, double tol = 1e-10) {
    using std::numbers::pi;
    if (!(gamma >= 0.0 && gamma <= pi / 2)) {
        throw DomainError("s3_optimized_curve needs gamma in [0, pi/2]");
    }
    auto best_beta = [&](double alpha) {
        return golden_section_maximize(
            [&](double beta) { return s3_template_value(gamma, alpha, beta); },
            0.0, pi / 2, tol);
    };
    OptimalSettings out;
    out.alpha = golden_section_maximize(
        [&](double alpha) {
            return s3_template_value(gamma, alpha, best_beta(alpha));
        },
        0.0, pi / 2, tol);
    out.beta = best_beta(out.alpha);
    out.predicted_s3 = s3_template_value(gamma, out.alpha, out.beta);
    out.violation = out.predicted_s3 > kS3Bound + 1e-12;
    return out;
}

} // namespace nlcausal
