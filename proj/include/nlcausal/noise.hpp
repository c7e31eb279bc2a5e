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
 * Monte-Carlo distribution of the ACE estimator under Poissonian counting
 * noise, and detection-efficiency / visibility thresholds of S3 and CHSH.
 */

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "experiment.hpp"
#include "inequalities.hpp"
#include "parallel.hpp"
#include "quantum.hpp"
#include "random.hpp"
#include "stats.hpp"

namespace nlcausal {

// ---------------------------------------------------------------------------
// ACE noise floor

enum class SamplingMode { poisson, exact };

struct McOptions {
    std::size_t runs = 100'000;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    SamplingMode mode = SamplingMode::poisson;
};

struct McAceDistribution {
    PercentileSummary summary;
    std::vector<double> values; // in run order
};

/// Run r draws its counts from make_engine(seed, r), so the sample does not
/// depend on the thread count.
inline McAceDistribution
mc_ace_distribution(const TwoQubitState &state,
                    std::span<const EquatorialSetting> settings_a,
                    std::span<const EquatorialSetting> settings_b,
                    const InterventionConfig &config, std::int64_t total_counts,
                    const McOptions &options = {}) {
    if (options.runs < 1000) {
        throw DomainError("mc_ace_distribution needs at least 1000 runs");
    }
    if (!config.enabled) {
        throw DomainError("mc_ace_distribution needs an enabled intervention");
    }
    if (total_counts <= 0) {
        throw DomainError("mc_ace_distribution needs total_counts > 0");
    }
    const ExpectedCounts means =
        expected_counts(state, settings_a, settings_b, config, total_counts);
    McAceDistribution out;
    out.values.resize(options.runs);
    if (options.mode == SamplingMode::exact) {
        std::fill(out.values.begin(), out.values.end(), ace_plugin(means));
    } else {
        parallel_for(options.runs, options.threads, [&](std::size_t r) {
            auto engine = make_engine(options.seed, r);
            out.values[r] = ace_plugin(sample_counts(means, engine));
        });
    }
    out.summary = summarize(out.values);
    return out;
}

inline void write_ace_distribution_csv(std::ostream &os,
                                       const std::vector<double> &values) {
    os << "run,value\n";
    os.precision(17);
    for (std::size_t r = 0; r < values.size(); ++r) {
        os << r << ',' << values[r] << '\n';
    }
}

// ---------------------------------------------------------------------------
// Functional maximization over equatorial measurements

enum class Functional { s3, chsh };

inline const char *to_string(Functional f) {
    return f == Functional::s3 ? "S3" : "CHSH";
}

inline double bound_of(Functional f) {
    return f == Functional::s3 ? kS3Bound : kChshLocalBound;
}

/// Correlator weights c[x][y] of sum c_xy E_xy.
using Weights = std::vector<std::vector<double>>;

/// The single S3 form, or the eight CHSH forms +/-(sum E - 2 E_xy).
inline std::vector<Weights> functional_forms(Functional f) {
    if (f == Functional::s3) {
        Weights w(3, std::vector<double>(3));
        for (int x = 0; x < 3; ++x) {
            for (int y = 0; y < 3; ++y) {
                w[x][y] = kS3Signs[x][y];
            }
        }
        return {w};
    }
    std::vector<Weights> forms;
    for (double sign : {1.0, -1.0}) {
        for (int xs = 0; xs < 2; ++xs) {
            for (int ys = 0; ys < 2; ++ys) {
                Weights w(2, std::vector<double>(2));
                for (int x = 0; x < 2; ++x) {
                    for (int y = 0; y < 2; ++y) {
                        w[x][y] = sign * ((x == xs && y == ys) ? -1.0 : 1.0);
                    }
                }
                forms.push_back(std::move(w));
            }
        }
    }
    return forms;
}

/// sum_a (-1)^a M_a for an equatorial setting.
inline LocalOperator signed_observable(const DetectorModel &detector,
                                       const EquatorialSetting &setting) {
    const auto [c, d] = detector.coefficients(0);
    const Vec3 n = setting.direction();
    return {2.0 * c - 1.0, {2.0 * d * n[0], 2.0 * d * n[1], 2.0 * d * n[2]}};
}

inline double weighted_value(const PauliForm &f, const DetectorModel &detector,
                             const Weights &w, const std::vector<double> &alice,
                             const std::vector<double> &bob) {
    double total = 0.0;
    for (std::size_t x = 0; x < alice.size(); ++x) {
        const auto oa = signed_observable(detector, {alice[x], Party::alice});
        for (std::size_t y = 0; y < bob.size(); ++y) {
            if (w[x][y] != 0.0) {
                total += w[x][y] *
                         expectation(f, oa, signed_observable(detector, {bob[y], Party::bob}));
            }
        }
    }
    return total;
}

struct SearchOptions {
    int starts = 20;
    double tolerance = 1e-8;
    int max_sweeps = 10'000;
    std::uint64_t seed = 0x5eed;
};

struct FunctionalOptimum {
    double value = -std::numeric_limits<double>::infinity();
    std::vector<double> alice;
    std::vector<double> bob;
};

/**
 * Maximizes one linear correlator form by coordinate ascent. The form is a
 * sinusoid a + b sin t + c cos t in each single angle, so every coordinate
 * step jumps to the exact maximizer, found from three evaluations.
 */
inline FunctionalOptimum maximize_form(const PauliForm &f, const DetectorModel &detector,
                                       const Weights &w, const SearchOptions &opt,
                                       const std::string &context) {
    using std::numbers::pi;
    const std::size_t mx = w.size();
    const std::size_t my = w.front().size();
    FunctionalOptimum best;
    for (int start = 0; start < opt.starts; ++start) {
        auto engine = make_engine(opt.seed, static_cast<std::uint64_t>(start));
        std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
        std::vector<double> alice(mx), bob(my);
        for (double &t : alice) {
            t = angle(engine);
        }
        for (double &t : bob) {
            t = angle(engine);
        }
        double value = weighted_value(f, detector, w, alice, bob);
        bool converged = false;
        double gain = 0.0;
        for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
            const double before = value;
            for (std::size_t k = 0; k < mx + my; ++k) {
                double &t = k < mx ? alice[k] : bob[k - mx];
                t = 0.0;
                const double f0 = weighted_value(f, detector, w, alice, bob);
                t = pi / 2;
                const double f90 = weighted_value(f, detector, w, alice, bob);
                t = pi;
                const double f180 = weighted_value(f, detector, w, alice, bob);
                const double mean = 0.5 * (f0 + f180);
                t = std::atan2(f90 - mean, 0.5 * (f0 - f180));
                value = weighted_value(f, detector, w, alice, bob);
            }
            gain = value - before;
            if (gain < opt.tolerance) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            std::ostringstream msg;
            msg << "coordinate ascent did not converge (" << context
                << ", start " << start << ", last gain " << gain << ")";
            throw NumericalError(msg.str());
        }
        if (value > best.value) {
            best = {value, alice, bob};
        }
    }
    return best;
}

/**
 * Maximum of S3 or of the symmetrized CHSH value over all equatorial
 * settings, for rho_gamma(v) measured with binned detectors
 * (eta_up = eta, eta_down = 1).
 */
inline FunctionalOptimum max_functional(double gamma, double eta, double v,
                                        Functional functional,
                                        const SearchOptions &opt = {}) {
    const TwoQubitState state(gamma, v);
    const DetectorModel detector = DetectorModel::binned(eta);
    const PauliForm f = pauli_form(state);
    std::ostringstream ctx;
    ctx << to_string(functional) << " gamma=" << gamma << " eta=" << eta << " v=" << v;
    FunctionalOptimum best;
    for (const auto &w : functional_forms(functional)) {
        auto candidate = maximize_form(f, detector, w, opt, ctx.str());
        if (candidate.value > best.value) {
            best = std::move(candidate);
        }
    }
    return best;
}

struct ThresholdResult {
    double gamma = 0.0;
    Functional functional = Functional::s3;
    /// Minimal eta at v = 1 and minimal v at eta = 1; NaN when even the
    /// ideal experiment shows no violation.
    double critical_eta = std::numeric_limits<double>::quiet_NaN();
    double critical_v = std::numeric_limits<double>::quiet_NaN();
    bool violation_possible = false;
};

struct ThresholdOptions {
    double tolerance = 1e-3;
    SearchOptions search{};
};

inline bool violates(double gamma, double eta, double v, Functional functional,
                     const SearchOptions &opt) {
    return max_functional(gamma, eta, v, functional, opt).value >
           bound_of(functional) + 1e-12;
}

/// Bisection in eta (at v = 1) and in v (at eta = 1).
inline ThresholdResult critical_thresholds(double gamma, Functional functional,
                                           const ThresholdOptions &opt = {}) {
    if (!(gamma > 0.0 && gamma < std::numbers::pi / 2)) {
        throw DomainError("critical_thresholds needs gamma in (0, pi/2)");
    }
    ThresholdResult r;
    r.gamma = gamma;
    r.functional = functional;
    r.violation_possible = violates(gamma, 1.0, 1.0, functional, opt.search);
    if (!r.violation_possible) {
        return r;
    }
    auto bisect = [&](auto &&violated_at) {
        double lo = 0.0;
        double hi = 1.0;
        while (hi - lo > opt.tolerance) {
            const double mid = 0.5 * (lo + hi);
            (violated_at(mid) ? hi : lo) = mid;
        }
        return 0.5 * (lo + hi);
    };
    r.critical_eta = bisect([&](double eta) {
        return violates(gamma, eta, 1.0, functional, opt.search);
    });
    r.critical_v = bisect([&](double v) {
        return violates(gamma, 1.0, v, functional, opt.search);
    });
    return r;
}

struct ThresholdGridRow {
    double gamma = 0.0;
    double eta = 0.0;
    double v = 0.0;
    double max_functional = 0.0;
    bool violated = false;
};

/// n evenly spaced points from lo to hi inclusive.
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) /
                                        static_cast<double>(n - 1);
    }
    return out;
}

/// Rows ordered by eta, then v.
inline std::vector<ThresholdGridRow>
threshold_grid(double gamma, Functional functional, const std::vector<double> &etas,
               const std::vector<double> &vs, unsigned threads = 0,
               const SearchOptions &opt = {}) {
    std::vector<ThresholdGridRow> rows(etas.size() * vs.size());
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        const double eta = etas[i / vs.size()];
        const double v = vs[i % vs.size()];
        const double value = max_functional(gamma, eta, v, functional, opt).value;
        rows[i] = {gamma, eta, v, value, value > bound_of(functional) + 1e-12};
    });
    return rows;
}

inline void write_threshold_grid_csv(std::ostream &os,
                                     const std::vector<ThresholdGridRow> &rows) {
    os << "gamma,eta,v,max_functional,violated\n";
    os.precision(10);
    for (const auto &r : rows) {
        os << r.gamma << ',' << r.eta << ',' << r.v << ',' << r.max_functional << ','
           << (r.violated ? 1 : 0) << '\n';
    }
}

} // namespace nlcausal
