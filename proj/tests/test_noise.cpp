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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "nlcausal/noise.hpp"

using namespace nlcausal;
using std::numbers::pi;

namespace {

constexpr std::int64_t kCounts = 48'000;

McAceDistribution floor_at(double gamma, std::size_t runs, std::uint64_t seed,
                           unsigned threads = 0) {
    const auto st = chsh_optimal_settings(gamma);
    McOptions o;
    o.runs = runs;
    o.seed = seed;
    o.threads = threads;
    return mc_ace_distribution(TwoQubitState(gamma), st.alice, st.bob, {true, 0.0}, kCounts, o);
}

/// Exact S3 optimum under binned detectors: eta^2 v times the ideal optimum.
double s3_binned(double gamma, double eta, double v) {
    return eta * eta * v * s3_optimized_closed_form(gamma);
}

} // namespace

TEST(Percentiles, LinearInterpolationBetweenRanks) {
    const std::vector<double> s{1, 2, 3, 4};
    EXPECT_DOUBLE_EQ(percentile_sorted(s, 0.5), 2.5);
    EXPECT_DOUBLE_EQ(percentile_sorted(s, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(percentile_sorted(s, 1.0), 4.0);
    EXPECT_DOUBLE_EQ(percentile_sorted(s, 0.1), 1.3);
    std::vector<double> big(1001);
    for (std::size_t i = 0; i < big.size(); ++i) big[i] = static_cast<double>(i);
    EXPECT_NEAR(percentile_sorted(big, 0.0013), 1.3, 1e-12);
    EXPECT_NEAR(percentile_sorted(big, 0.9987), 998.7, 1e-9);
    EXPECT_THROW(percentile_sorted({}, 0.5), DomainError);
}

TEST(Percentiles, SummaryOrderedAndPermutationInvariant) {
    std::mt19937_64 g(1);
    std::exponential_distribution<double> e(3.0);
    std::vector<double> x(5000);
    for (double &v : x) v = e(g);
    const auto a = summarize(x);
    std::shuffle(x.begin(), x.end(), g);
    const auto b = summarize(x);
    EXPECT_EQ(a.median, b.median);
    EXPECT_EQ(a.p0013, b.p0013);
    EXPECT_EQ(a.p9987, b.p9987);
    EXPECT_LE(a.p0013, a.p1587);
    EXPECT_LE(a.p1587, a.median);
    EXPECT_LE(a.median, a.p8413);
    EXPECT_LE(a.p8413, a.p9987);
    EXPECT_EQ(a.runs, 5000U);
}

TEST(McAceDistribution, PreconditionsAndExactMode) {
    const auto st = chsh_optimal_settings(pi / 4);
    McOptions o;
    o.runs = 999;
    EXPECT_THROW(mc_ace_distribution(TwoQubitState(pi / 4), st.alice, st.bob, {true, 0.0},
                                     kCounts, o),
                 DomainError);
    o.runs = 1000;
    EXPECT_THROW(mc_ace_distribution(TwoQubitState(pi / 4), st.alice, st.bob, {false, 0.0},
                                     kCounts, o),
                 DomainError);
    o.mode = SamplingMode::exact;
    const auto d = mc_ace_distribution(TwoQubitState(pi / 4), st.alice, st.bob, {true, 0.0},
                                       kCounts, o);
    EXPECT_EQ(d.summary.median, 0.0);
    EXPECT_EQ(d.summary.p0013, 0.0);
    EXPECT_EQ(d.summary.p9987, 0.0);
    EXPECT_EQ(d.summary.p1587, 0.0);
    EXPECT_EQ(d.summary.p8413, 0.0);
}

TEST(McAceDistribution, DeterministicAndThreadCountIndependent) {
    const auto a = floor_at(0.5, 2000, 42, 1);
    const auto b = floor_at(0.5, 2000, 42, 4);
    const auto c = floor_at(0.5, 2000, 43, 4);
    EXPECT_EQ(a.values, b.values);
    EXPECT_NE(a.values, c.values);
}

TEST(McAceDistribution, MaximallyEntangledNoiseFloor) {
    const auto d = floor_at(pi / 4, 20'000, 5);
    EXPECT_NEAR(d.summary.median, 0.0068, 0.001);
    EXPECT_NEAR(d.summary.p0013, 0.0003, 0.003);
    EXPECT_NEAR(d.summary.p9987, 0.0219, 0.003);
}

TEST(McAceDistribution, MediansIncreaseWithConcurrence) {
    double previous = 0.0;
    for (double gamma : {pi / 16, pi / 8, 3 * pi / 16, pi / 4}) {
        const double median = floor_at(gamma, 20'000, 6).summary.median;
        EXPECT_GT(median, previous) << "gamma " << gamma;
        previous = median;
    }
}

TEST(McAceDistribution, CsvHasRunValueColumns) {
    std::stringstream ss;
    write_ace_distribution_csv(ss, {0.5, 0.25});
    EXPECT_EQ(ss.str(), "run,value\n0,0.5\n1,0.25\n");
}

TEST(MaxFunctional, IdealS3MatchesTemplateOptimum) {
    for (double gamma : {pi / 16, pi / 8, 0.5, pi / 4}) {
        EXPECT_NEAR(max_functional(gamma, 1, 1, Functional::s3).value,
                    s3_optimized_closed_form(gamma), 1e-7)
            << gamma;
    }
    EXPECT_NEAR(max_functional(pi / 4, 1, 1, Functional::s3).value, 3 * std::sqrt(3.0), 1e-7);
}

TEST(MaxFunctional, BinnedS3ScalesWithEtaSquaredAndVisibility) {
    for (double eta : {0.6, 0.85, 1.0})
        for (double v : {0.5, 0.8, 1.0})
            EXPECT_NEAR(max_functional(pi / 8, eta, v, Functional::s3).value,
                        s3_binned(pi / 8, eta, v), 1e-7);
}

TEST(MaxFunctional, IdealChshMatchesTwoQubitOptimum) {
    for (double gamma : {pi / 16, pi / 8, 0.5, pi / 4}) {
        const double s = std::sin(2 * gamma);
        EXPECT_NEAR(max_functional(gamma, 1, 1, Functional::chsh).value,
                    2 * std::sqrt(1 + s * s), 1e-7);
    }
}

TEST(MaxFunctional, BinnedChshAtMaximalEntanglement) {
    // Zero marginals: S2 = 2 sqrt2 v eta^2 + 2 (1 - eta)^2.
    for (double eta : {0.7, 0.83, 0.95})
        for (double v : {0.6, 0.9, 1.0})
            EXPECT_NEAR(max_functional(pi / 4, eta, v, Functional::chsh).value,
                        2 * std::sqrt(2.0) * v * eta * eta + 2 * (1 - eta) * (1 - eta), 1e-7);
}

TEST(MaxFunctional, NonConvergenceRaisesWithDiagnostics) {
    SearchOptions opt;
    opt.max_sweeps = 1;
    opt.tolerance = -1.0;
    try {
        max_functional(pi / 4, 0.9, 0.9, Functional::s3, opt);
        FAIL() << "expected NumericalError";
    } catch (const NumericalError &e) {
        EXPECT_NE(std::string(e.what()).find("eta=0.9"), std::string::npos) << e.what();
    }
}

TEST(CriticalThresholds, MaximallyEntangledS3) {
    const auto r = critical_thresholds(pi / 4, Functional::s3);
    ASSERT_TRUE(r.violation_possible);
    const double s3max = 3 * std::sqrt(3.0);
    EXPECT_NEAR(r.critical_v, 4 / s3max, 2e-3);
    EXPECT_NEAR(r.critical_eta, std::sqrt(4 / s3max), 2e-3);
    EXPECT_NEAR(r.critical_v, 0.77, 0.02);
    EXPECT_NEAR(r.critical_eta, 0.88, 0.02);
    EXPECT_TRUE(violates(pi / 4, 1, 1, Functional::s3, {}));
}

TEST(CriticalThresholds, ChshLowerThanS3AtMaximalEntanglement) {
    const auto s3 = critical_thresholds(pi / 4, Functional::s3);
    const auto chsh = critical_thresholds(pi / 4, Functional::chsh);
    EXPECT_NEAR(chsh.critical_v, 1 / std::sqrt(2.0), 2e-3);
    EXPECT_NEAR(chsh.critical_eta, 2 / (1 + std::sqrt(2.0)), 2e-3);
    EXPECT_LT(chsh.critical_v, s3.critical_v);
    EXPECT_LT(chsh.critical_eta, s3.critical_eta);
}

TEST(CriticalThresholds, LessEntangledStateIsLessRobustForS3) {
    const auto a = critical_thresholds(pi / 8, Functional::s3);
    const auto b = critical_thresholds(pi / 4, Functional::s3);
    EXPECT_GT(a.critical_v, b.critical_v);
    EXPECT_GT(a.critical_eta, b.critical_eta);
    EXPECT_NEAR(a.critical_v, 4 / s3_optimized_closed_form(pi / 8), 2e-3);
}

TEST(CriticalThresholds, NonIncreasingInEntanglementForS3) {
    double previous_v = 2.0, previous_eta = 2.0;
    for (double gamma : {pi / 16, pi / 8, 3 * pi / 16, pi / 4}) {
        const auto r = critical_thresholds(gamma, Functional::s3);
        EXPECT_LE(r.critical_v, previous_v);
        EXPECT_LE(r.critical_eta, previous_eta);
        previous_v = r.critical_v;
        previous_eta = r.critical_eta;
    }
}

TEST(CriticalThresholds, GammaOutsideOpenIntervalIsDomainError) {
    EXPECT_THROW(critical_thresholds(0.0, Functional::s3), DomainError);
    EXPECT_THROW(critical_thresholds(pi / 2, Functional::chsh), DomainError);
}

TEST(ThresholdGrid, ViolationRegionIsUpwardClosed) {
    const auto etas = linspace(0.7, 1.0, 16);
    const auto vs = linspace(0.6, 1.0, 21);
    for (double gamma : {pi / 8, pi / 4}) {
        const auto rows = threshold_grid(gamma, Functional::s3, etas, vs);
        ASSERT_EQ(rows.size(), etas.size() * vs.size());
        for (std::size_t i = 0; i < etas.size(); ++i)
            for (std::size_t j = 0; j < vs.size(); ++j) {
                const auto &r = rows[i * vs.size() + j];
                EXPECT_NEAR(r.max_functional, s3_binned(gamma, r.eta, r.v), 1e-7);
                if (!r.violated) continue;
                if (i + 1 < etas.size()) {
                    EXPECT_TRUE(rows[(i + 1) * vs.size() + j].violated);
                }
                if (j + 1 < vs.size()) {
                    EXPECT_TRUE(rows[i * vs.size() + j + 1].violated);
                }
            }
    }
}

TEST(ThresholdGrid, PiOverEightRegionInsidePiOverFourRegion) {
    const auto etas = linspace(0.7, 1.0, 16);
    const auto vs = linspace(0.6, 1.0, 21);
    const auto a = threshold_grid(pi / 8, Functional::s3, etas, vs);
    const auto b = threshold_grid(pi / 4, Functional::s3, etas, vs);
    std::size_t strictly = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].violated) {
            EXPECT_TRUE(b[i].violated);
        }
        strictly += b[i].violated && !a[i].violated;
    }
    EXPECT_GT(strictly, 0U);
}

TEST(ThresholdGrid, ChshRegionContainsS3RegionAtMaximalEntanglement) {
    const auto etas = linspace(0.7, 1.0, 16);
    const auto vs = linspace(0.6, 1.0, 21);
    const auto s3 = threshold_grid(pi / 4, Functional::s3, etas, vs);
    const auto chsh = threshold_grid(pi / 4, Functional::chsh, etas, vs);
    std::size_t strictly = 0;
    for (std::size_t i = 0; i < s3.size(); ++i) {
        if (s3[i].violated) {
            EXPECT_TRUE(chsh[i].violated);
        }
        strictly += chsh[i].violated && !s3[i].violated;
    }
    EXPECT_GT(strictly, 0U);
}

TEST(ThresholdGrid, CsvHeaderAndThreadIndependence) {
    const auto etas = linspace(0.8, 1.0, 3);
    const auto vs = linspace(0.8, 1.0, 3);
    const auto a = threshold_grid(0.6, Functional::chsh, etas, vs, 1);
    const auto b = threshold_grid(0.6, Functional::chsh, etas, vs, 3);
    std::stringstream sa, sb;
    write_threshold_grid_csv(sa, a);
    write_threshold_grid_csv(sb, b);
    EXPECT_EQ(sa.str(), sb.str());
    EXPECT_EQ(sa.str().substr(0, sa.str().find('\n')), "gamma,eta,v,max_functional,violated");
}
