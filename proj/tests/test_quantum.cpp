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

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "nlcausal/inequalities.hpp"
#include "nlcausal/quantum.hpp"
#include "oracles.hpp"

using namespace nlcausal;
using std::numbers::pi;

TEST(TwoQubitState, RejectsVisibilityOutsideUnitInterval) {
    EXPECT_THROW(TwoQubitState(0.1, -0.01), DomainError);
    EXPECT_THROW(TwoQubitState(0.1, 1.01), DomainError);
    EXPECT_THROW(TwoQubitState(std::nan(""), 1.0), DomainError);
}

TEST(DensityMatrix, MaximallyEntangledProjector) {
    const auto r = density_matrix(TwoQubitState(pi / 4));
    Eigen::Matrix4cd expected = Eigen::Matrix4cd::Zero();
    expected(1, 1) = expected(2, 2) = expected(1, 2) = expected(2, 1) = 0.5;
    EXPECT_LT((r - expected).norm(), 1e-15);
}

TEST(DensityMatrix, WhiteNoiseLimit) {
    const auto r = density_matrix(TwoQubitState(1.234, 0.0));
    EXPECT_LT((r - Eigen::Matrix4cd::Identity() / 4.0).norm(), 1e-15);
}

TEST(DensityMatrix, PositiveUnitTraceForRandomStates) {
    std::mt19937_64 g(11);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 100; ++i) {
        const TwoQubitState st(u(g) * 2 * pi, u(g));
        const auto r = density_matrix(st);
        EXPECT_NEAR(r.trace().real(), 1.0, 1e-14);
        EXPECT_LT((r - oracle::rho(st.gamma(), st.visibility())).norm(), 1e-14);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(r);
        EXPECT_GE(es.eigenvalues().minCoeff(), -1e-14);
    }
}

TEST(Concurrence, Examples) {
    EXPECT_NEAR(concurrence(pi / 4), 1.0, 1e-15);
    EXPECT_EQ(concurrence(0.0), 0.0);
    EXPECT_NEAR(concurrence(pi / 8), std::sqrt(2.0) / 2, 1e-15);
}

TEST(EquatorialSetting, ObservableHasEigenvaluesPlusMinusOne) {
    for (double t : {0.0, 0.3, 1.7, -2.2}) {
        for (bool bob : {false, true}) {
            const auto n = EquatorialSetting{t, bob ? Party::bob : Party::alice}.direction();
            EXPECT_NEAR(n[0] * n[0] + n[1] * n[1] + n[2] * n[2], 1.0, 1e-15);
            EXPECT_EQ(n[1], 0.0); // no circular component
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(oracle::observable(t, bob));
            EXPECT_NEAR(es.eigenvalues()(0), -1.0, 1e-14);
            EXPECT_NEAR(es.eigenvalues()(1), 1.0, 1e-14);
        }
    }
}

TEST(Correlation, Examples) {
    EXPECT_NEAR(correlation(TwoQubitState(pi / 4), 0, 0), 1.0, 1e-15);
    EXPECT_NEAR(correlation(TwoQubitState(0), pi / 2, pi / 2), 0.0, 1e-15);
    EXPECT_NEAR(correlation(TwoQubitState(pi / 4), pi / 2, pi / 2), 1.0, 1e-15);
}

TEST(Correlation, MatchesDenseOracleAndClosedForm) {
    std::mt19937_64 g(5);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 100; ++i) {
        const double gamma = u(g) * pi, ta = u(g) * 2 * pi, tb = u(g) * 2 * pi;
        const double e = correlation(TwoQubitState(gamma), ta, tb);
        const auto r = oracle::rho(gamma, 1.0);
        const double dense = (r * oracle::kron(oracle::observable(ta, false),
                                              oracle::observable(tb, true)))
                                 .trace()
                                 .real();
        EXPECT_NEAR(e, dense, 1e-12);
        EXPECT_NEAR(e, std::cos(ta) * std::cos(tb) +
                           std::sin(2 * gamma) * std::sin(ta) * std::sin(tb),
                    1e-12);
    }
}

TEST(Correlation, LinearInVisibility) {
    std::mt19937_64 g(6);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 100; ++i) {
        const double gamma = u(g) * pi, v = u(g), ta = u(g) * 6, tb = u(g) * 6;
        EXPECT_NEAR(correlation(TwoQubitState(gamma, v), ta, tb),
                    v * correlation(TwoQubitState(gamma, 1.0), ta, tb), 1e-14);
    }
}

TEST(DetectorModel, PovmCompleteAndPositiveOnGrid) {
    for (int i = 0; i <= 10; ++i) {
        for (int j = 0; j <= 10; ++j) {
            const DetectorModel d(i / 10.0, j / 10.0);
            const EquatorialSetting s{0.7, Party::alice};
            const auto m0 = povm_element(d, s, 0);
            const auto m1 = povm_element(d, s, 1);
            EXPECT_NEAR(m0.scalar + m1.scalar, 1.0, 1e-15);
            for (int k = 0; k < 3; ++k) {
                EXPECT_NEAR(m0.vector[k] + m1.vector[k], 0.0, 1e-15);
            }
            // scalar*I + r.sigma is PSD iff scalar >= |r|.
            for (const auto &m : {m0, m1}) {
                const double norm = std::hypot(m.vector[0], m.vector[1], m.vector[2]);
                EXPECT_GE(m.scalar - norm, -1e-15);
            }
        }
    }
    EXPECT_THROW(DetectorModel(1.1, 1.0), DomainError);
    EXPECT_THROW(DetectorModel(0.5, -0.1), DomainError);
}

TEST(BornBehavior, MatchesDenseOracleOnRandomDraws) {
    std::mt19937_64 g(17);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 100; ++i) {
        const double gamma = u(g) * pi, v = u(g);
        const double eu = u(g), ed = u(g);
        const bool perfect = i < 50;
        std::vector<double> ta(1 + i % 3), tb(1 + (i / 3) % 3);
        for (double &t : ta) t = u(g) * 2 * pi;
        for (double &t : tb) t = u(g) * 2 * pi;
        std::vector<EquatorialSetting> sa, sb;
        for (double t : ta) sa.push_back({t, Party::alice});
        for (double t : tb) sb.push_back({t, Party::bob});
        const DetectorModel d = perfect ? DetectorModel::perfect() : DetectorModel(eu, ed);
        const Behavior p = born_behavior(TwoQubitState(gamma, v), sa, sb, d);
        const auto ref = perfect ? oracle::behavior(gamma, v, ta, tb)
                                 : oracle::behavior(gamma, v, ta, tb, eu, ed);
        ASSERT_EQ(p.table().size(), ref.size());
        for (std::size_t j = 0; j < ref.size(); ++j) {
            EXPECT_NEAR(p.table()[j], ref[j], 1e-12);
        }
    }
}

TEST(BornBehavior, NormalizedAndNoSignalling) {
    std::mt19937_64 g(23);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 100; ++i) {
        const Behavior p = born_behavior(
            TwoQubitState(u(g) * pi, u(g)), alice_settings({u(g) * 6, u(g) * 6, u(g) * 6}),
            bob_settings({u(g) * 6, u(g) * 6}), DetectorModel(u(g), u(g)));
        for (int x = 0; x < 3; ++x)
            for (int y = 0; y < 2; ++y)
                EXPECT_NEAR(p.block_sum(x, y), 1.0, 1e-12);
        EXPECT_LE(p.signalling_to_alice(), 1e-12);
        EXPECT_LE(p.signalling_to_bob(), 1e-12);
    }
}

TEST(BornBehavior, ChshAndS3Examples) {
    const auto chsh = chsh_fixed_settings();
    EXPECT_NEAR(chsh_value(born_behavior(TwoQubitState(pi / 4), chsh.alice, chsh.bob)).s2,
                2 * std::sqrt(2.0), 1e-9);
    const auto s3 = s3_fixed_settings();
    EXPECT_NEAR(s3_value(born_behavior(TwoQubitState(pi / 4), s3.alice, s3.bob)).s3,
                3 * std::sqrt(3.0), 1e-9);
}

TEST(BornBehavior, DeadDetectorPutsAllMassOnDown) {
    const Behavior p = born_behavior(TwoQubitState(0.4, 0.8), alice_settings({0.2, 1.0}),
                                     bob_settings({2.0, -1.0}), DetectorModel(0.0, 1.0));
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            EXPECT_NEAR(p(1, 1, x, y), 1.0, 1e-15);
}

TEST(BornBehavior, RejectsEmptyOrMislabelledSettings) {
    const TwoQubitState st(0.3);
    std::vector<EquatorialSetting> none;
    EXPECT_THROW(born_behavior(st, none, bob_settings({0.0})), DomainError);
    EXPECT_THROW(born_behavior(st, bob_settings({0.0}), bob_settings({0.0})), DomainError);
    EXPECT_THROW(born_behavior(st, alice_settings({0.0}), alice_settings({0.0})), DomainError);
}

TEST(BornBehavior, VisibilityPointSevenSevenSitsAtTheS3Bound) {
    const auto s3 = s3_fixed_settings();
    const double v = s3_value(born_behavior(TwoQubitState(pi / 4, 0.77), s3.alice, s3.bob)).s3;
    EXPECT_NEAR(v, 4.0, 0.02 * 3 * std::sqrt(3.0));
}
