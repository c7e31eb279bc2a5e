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

// Independent reference computations used only by the tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

inline Mat2 pauli_x() {
    Mat2 m;
    m << 0, 1, 1, 0;
    return m;
}

inline Mat2 pauli_z() {
    Mat2 m;
    m << 1, 0, 0, -1;
    return m;
}

inline Mat4 kron(const Mat2 &a, const Mat2 &b) {
    Mat4 out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (int k = 0; k < 2; ++k) {
                for (int l = 0; l < 2; ++l) {
                    out(2 * i + j, 2 * k + l) = a(i, k) * b(j, l);
                }
            }
        }
    }
    return out;
}

/// v |psi><psi| + (1-v) I/4 with psi = cos g |01> + sin g |10>.
inline Mat4 rho(double gamma, double v) {
    Eigen::Vector4cd psi(0, std::cos(gamma), std::sin(gamma), 0);
    return v * psi * psi.adjoint() + (1 - v) * Mat4::Identity() / 4.0;
}

/// +/-1 observable: Alice cos t Z + sin t X, Bob -cos t Z + sin t X.
inline Mat2 observable(double theta, bool bob) {
    const double zc = bob ? -std::cos(theta) : std::cos(theta);
    return zc * pauli_z() + std::sin(theta) * pauli_x();
}

/// Lossy POVM element for outcome 0 (up) or 1 (down).
inline Mat2 povm(double theta, bool bob, int outcome, double eta_up, double eta_down) {
    const Mat2 up = (Mat2::Identity() + observable(theta, bob)) / 2.0;
    const Mat2 down = Mat2::Identity() - up;
    return outcome == 0 ? Mat2(eta_up * up + (1 - eta_down) * down)
                        : Mat2(eta_down * down + (1 - eta_up) * up);
}

inline double born(const Mat4 &r, const Mat2 &ma, const Mat2 &mb) {
    return (r * kron(ma, mb)).trace().real();
}

/// p[a][b][x][y] flattened as ((a*2+b)*mx+x)*my+y.
inline std::vector<double> behavior(double gamma, double v,
                                    const std::vector<double> &ta,
                                    const std::vector<double> &tb,
                                    double eta_up = 1, double eta_down = 1) {
    const Mat4 r = rho(gamma, v);
    const std::size_t mx = ta.size(), my = tb.size();
    std::vector<double> p(4 * mx * my);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (std::size_t x = 0; x < mx; ++x)
                for (std::size_t y = 0; y < my; ++y)
                    p[((a * 2 + b) * mx + x) * my + y] =
                        born(r, povm(ta[x], false, a, eta_up, eta_down),
                             povm(tb[y], true, b, eta_up, eta_down));
    return p;
}

/// Correlator from a flattened dichotomic table.
inline double correlator(const std::vector<double> &p, std::size_t mx, std::size_t my,
                         std::size_t x, std::size_t y) {
    auto at = [&](int a, int b) { return p[((a * 2 + b) * mx + x) * my + y]; };
    return at(0, 0) + at(1, 1) - at(0, 1) - at(1, 0);
}

/// The unrationalized optimized-S3 expression, term by term, in u.
inline double unrationalized_s3(double u) {
    const double c2 = std::cos(2 * u), c4 = std::cos(4 * u), cu = std::cos(u);
    return (std::sqrt(c4 + 7) - std::sqrt(2.0) * (c2 - 3)) / (2 * cu * cu) *
           std::sqrt(c2 + std::sqrt(2.0) * std::sqrt(c4 + 7) - 3);
}

/// Spearman rank correlation (no tie handling needed for continuous data).
inline double spearman(const std::vector<double> &a, const std::vector<double> &b) {
    auto ranks = [](const std::vector<double> &v) {
        std::vector<std::size_t> idx(v.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return v[i] < v[j]; });
        std::vector<double> r(v.size());
        for (std::size_t k = 0; k < idx.size(); ++k) r[idx[k]] = static_cast<double>(k);
        return r;
    };
    const auto ra = ranks(a), rb = ranks(b);
    const double n = static_cast<double>(a.size());
    const double mean = (n - 1) / 2;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (ra[i] - mean) * (rb[i] - mean);
        saa += (ra[i] - mean) * (ra[i] - mean);
        sbb += (rb[i] - mean) * (rb[i] - mean);
    }
    return sab / std::sqrt(saa * sbb);
}

} // namespace oracle
