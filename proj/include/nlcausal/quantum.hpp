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
 * Two-qubit polarization states rho_gamma(v) and equatorial dichotomic
 * measurements with lossy detectors.
 *
 * Conventions:
 *  - basis order {HH, HV, VH, VV}; H is the +1 eigenstate of Z;
 *  - pure state cos(g)|HV> + sin(g)|VH>, mixed with white noise of weight 1-v;
 *  - Alice's observable  O_A(t) = cos(t) Z + sin(t) X,
 *    Bob's observable    O_B(t) = -cos(t) Z + sin(t) X.
 *
 * Bob's local bit flip makes E(tA, tB) = cos tA cos tB + sin 2g sin tA sin tB,
 * the form the standard three-setting angle tables assume.
 *
 * Behaviors are computed in the Bloch (Pauli) representation of the state;
 * density_matrix() provides the dense 4x4 form.
 */

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "behavior.hpp"
#include "errors.hpp"

namespace nlcausal {

using Vec3 = std::array<double, 3>; // components along (X, Y, Z)

enum class Party { alice, bob };

inline const char *to_string(Party p) {
    return p == Party::alice ? "alice" : "bob";
}

class TwoQubitState {
  public:
    explicit TwoQubitState(double gamma, double visibility = 1.0)
        : gamma_(gamma), visibility_(visibility) {
        if (!std::isfinite(gamma)) {
            throw DomainError("state angle gamma must be finite");
        }
        if (!(visibility >= 0.0 && visibility <= 1.0)) {
            throw DomainError("visibility must lie in [0,1], got " +
                              std::to_string(visibility));
        }
    }

    [[nodiscard]] double gamma() const noexcept { return gamma_; }
    [[nodiscard]] double visibility() const noexcept { return visibility_; }

  private:
    double gamma_;
    double visibility_;
};

/// Entanglement of the pure state cos g|HV> + sin g|VH>.
inline double concurrence(double gamma) {
    return std::abs(std::sin(2.0 * gamma));
}

/// Measurement direction in the linear-polarization (X-Z) great circle.
struct EquatorialSetting {
    double theta = 0.0;
    Party party = Party::alice;

    /// Bloch vector of the +1 eigenstate.
    [[nodiscard]] Vec3 direction() const noexcept {
        const double z = std::cos(theta);
        return {std::sin(theta), 0.0, party == Party::alice ? z : -z};
    }
};

inline std::vector<EquatorialSetting>
alice_settings(std::initializer_list<double> thetas) {
    std::vector<EquatorialSetting> out;
    for (double t : thetas) {
        out.push_back({t, Party::alice});
    }
    return out;
}

inline std::vector<EquatorialSetting>
bob_settings(std::initializer_list<double> thetas) {
    std::vector<EquatorialSetting> out;
    for (double t : thetas) {
        out.push_back({t, Party::bob});
    }
    return out;
}

/**
 * Binary POVM with efficiencies (eta_up, eta_down):
 *   M_up   = eta_up P_up + (1 - eta_down) P_down
 *   M_down = eta_down P_down + (1 - eta_up) P_up
 * Outcome 0 is "up" (+1), outcome 1 is "down" (-1).
 */
class DetectorModel {
  public:
    DetectorModel() = default;
    DetectorModel(double eta_up, double eta_down)
        : eta_up_(eta_up), eta_down_(eta_down) {
        if (!(eta_up >= 0.0 && eta_up <= 1.0 && eta_down >= 0.0 &&
              eta_down <= 1.0)) {
            throw DomainError("detector efficiencies must lie in [0,1]");
        }
    }

    static DetectorModel perfect() { return {}; }

    /// No-click events binned with the down outcome.
    static DetectorModel binned(double eta) { return {eta, 1.0}; }

    [[nodiscard]] double eta_up() const noexcept { return eta_up_; }
    [[nodiscard]] double eta_down() const noexcept { return eta_down_; }

    /// M_outcome = identity * first + O * second, O the +/-1 observable.
    [[nodiscard]] std::pair<double, double> coefficients(int outcome) const {
        const double c_up = 0.5 * (1.0 + eta_up_ - eta_down_);
        const double d_up = 0.5 * (eta_up_ + eta_down_ - 1.0);
        return outcome == 0 ? std::pair{c_up, d_up}
                            : std::pair{1.0 - c_up, -d_up};
    }

  private:
    double eta_up_ = 1.0;
    double eta_down_ = 1.0;
};

/**
 * Pauli decomposition of rho:
 *   rho = (I + r_a.s x I + I x r_b.s + sum_ij t_ij s_i x s_j) / 4
 */
struct PauliForm {
    Vec3 r_a{};
    Vec3 r_b{};
    std::array<Vec3, 3> t{};
};

inline PauliForm pauli_form(const TwoQubitState &state) {
    const double v = state.visibility();
    const double c = std::cos(2.0 * state.gamma());
    const double s = std::sin(2.0 * state.gamma());
    PauliForm f;
    f.r_a = {0.0, 0.0, v * c};
    f.r_b = {0.0, 0.0, -v * c};
    f.t[0] = {v * s, 0.0, 0.0};
    f.t[1] = {0.0, v * s, 0.0};
    f.t[2] = {0.0, 0.0, -v};
    return f;
}

/// Single-qubit operator scalar*I + vector.sigma.
struct LocalOperator {
    double scalar = 0.0;
    Vec3 vector{};
};

/// Tr[rho (P x Q)].
inline double expectation(const PauliForm &f, const LocalOperator &p,
                          const LocalOperator &q) {
    double value = p.scalar * q.scalar;
    for (int i = 0; i < 3; ++i) {
        value += p.scalar * q.vector[i] * f.r_b[i];
        value += q.scalar * p.vector[i] * f.r_a[i];
        for (int j = 0; j < 3; ++j) {
            value += p.vector[i] * f.t[i][j] * q.vector[j];
        }
    }
    return value;
}

inline LocalOperator povm_element(const DetectorModel &detector,
                                  const EquatorialSetting &setting,
                                  int outcome) {
    const auto [c, d] = detector.coefficients(outcome);
    const Vec3 n = setting.direction();
    return {c, {d * n[0], d * n[1], d * n[2]}};
}

/// v |Psi_g><Psi_g| + (1-v) I/4 in the {HH, HV, VH, VV} basis.
inline Eigen::Matrix4cd density_matrix(const TwoQubitState &state) {
    Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
    psi(1) = std::cos(state.gamma());
    psi(2) = std::sin(state.gamma());
    const double v = state.visibility();
    return v * (psi * psi.adjoint()) +
           (1.0 - v) * Eigen::Matrix4cd::Identity() / 4.0;
}

/// <O_A(thetaA) x O_B(thetaB)> with projective measurements.
inline double correlation(const TwoQubitState &state, double theta_a,
                          double theta_b) {
    const PauliForm f = pauli_form(state);
    const LocalOperator oa{0.0, EquatorialSetting{theta_a, Party::alice}.direction()};
    const LocalOperator ob{0.0, EquatorialSetting{theta_b, Party::bob}.direction()};
    return expectation(f, oa, ob);
}

/**
 * p(a,b|x,y) = Tr[rho (M_a^x x M_b^y)] with the same detector model on both
 * sides. Settings must carry the matching party tag.
 */
inline Behavior born_behavior(const TwoQubitState &state,
                              std::span<const EquatorialSetting> settings_a,
                              std::span<const EquatorialSetting> settings_b,
                              const DetectorModel &detector = {}) {
    if (settings_a.empty() || settings_b.empty()) {
        throw DomainError("born_behavior needs at least one setting per party");
    }
    for (const auto &s : settings_a) {
        if (s.party != Party::alice) {
            throw DomainError("Alice's setting list contains a Bob setting");
        }
    }
    for (const auto &s : settings_b) {
        if (s.party != Party::bob) {
            throw DomainError("Bob's setting list contains an Alice setting");
        }
    }
    const Scenario sc{static_cast<int>(settings_a.size()),
                      static_cast<int>(settings_b.size()), 2, 2};
    const PauliForm f = pauli_form(state);
    std::vector<double> table(sc.table_size());
    for (int x = 0; x < sc.m_x; ++x) {
        for (int y = 0; y < sc.m_y; ++y) {
            for (int a = 0; a < 2; ++a) {
                const LocalOperator ma = povm_element(detector, settings_a[x], a);
                for (int b = 0; b < 2; ++b) {
                    const LocalOperator mb =
                        povm_element(detector, settings_b[y], b);
                    table[sc.index(a, b, x, y)] = expectation(f, ma, mb);
                }
            }
        }
    }
    return Behavior(sc, std::move(table));
}

} // namespace nlcausal
