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
 * Dense two-phase primal simplex for programs of the form
 *
 *     minimize    t
 *     subject to  A q  = b
 *                 C q <= t      (each row of C)
 *                 q >= 0, t >= 0
 *
 * Sizes of interest are a few dozen rows by about a thousand columns, so the
 * full tableau is kept. Pricing is Dantzig (most negative reduced cost);
 * after a run of degenerate pivots the solver switches to Bland's rule until
 * the objective moves again.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace nlcausal::lp {

/// Row-major dense matrix.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c)
        : rows(r), cols(c), data(r * c, 0.0) {}

    double &operator()(std::size_t i, std::size_t j) {
        return data[i * cols + j];
    }
    double operator()(std::size_t i, std::size_t j) const {
        return data[i * cols + j];
    }
};

struct LinearProgram {
    DenseMatrix equality;          // A
    std::vector<double> rhs;       // b
    DenseMatrix coupled;           // C, rows bounded by the objective t
    std::size_t num_vars = 0;      // columns of A and C

    void validate() const {
        if (equality.cols != num_vars || rhs.size() != equality.rows) {
            throw DomainError("LP equality block has inconsistent dimensions");
        }
        if (coupled.rows > 0 && coupled.cols != num_vars) {
            throw DomainError("LP coupled block has inconsistent dimensions");
        }
        for (double v : rhs) {
            if (!std::isfinite(v)) {
                throw DomainError("LP right-hand side must be finite");
            }
        }
        for (double v : equality.data) {
            if (!std::isfinite(v)) {
                throw DomainError("LP equality matrix must be finite");
            }
        }
        for (double v : coupled.data) {
            if (!std::isfinite(v)) {
                throw DomainError("LP coupled matrix must be finite");
            }
        }
    }
};

enum class Status { optimal, infeasible, unbounded };

inline const char *to_string(Status s) {
    switch (s) {
    case Status::optimal:
        return "optimal";
    case Status::infeasible:
        return "infeasible";
    case Status::unbounded:
        return "unbounded";
    }
    return "?";
}

struct Outcome {
    Status status = Status::infeasible;
    double objective = 0.0;
    std::vector<double> solution;  // q
    /// Optimal: multipliers y of A q = b (b.y equals the objective).
    /// Infeasible: Farkas ray with y.A_j <= 0 for all j and b.y > 0.
    std::vector<double> dual_equality;
    /// Optimal: multipliers w <= 0 of C q - t <= 0.
    std::vector<double> dual_coupled;
    /// Phase-one residual sum (L1 infeasibility).
    double infeasibility = 0.0;
    std::size_t iterations = 0;
};

struct Options {
    double feasibility_tol = 1e-8; // phase-one residual accepted as feasible
    double optimality_tol = 1e-11; // reduced-cost threshold
    double pivot_tol = 1e-9;       // smallest usable pivot magnitude
    std::size_t degenerate_limit = 50;
    std::size_t max_iterations = 100000;
};

namespace detail {

class Tableau {
  public:
    // Column layout: [q (n) | t | slacks (k) | artificials (m) | rhs].
    Tableau(const LinearProgram &lp, const Options &opt)
        : opt_(opt), n_(lp.num_vars), k_(lp.coupled.rows),
          m_eq_(lp.equality.rows), m_(m_eq_ + k_), width_(n_ + 1 + k_ + m_ + 1),
          cells_(m_ * width_, 0.0), obj_(width_, 0.0), basis_(m_),
          sign_(m_, 1.0) {
        for (std::size_t i = 0; i < m_eq_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                at(i, j) = lp.equality(i, j);
            }
            at(i, rhs_col()) = lp.rhs[i];
        }
        for (std::size_t r = 0; r < k_; ++r) {
            const std::size_t i = m_eq_ + r;
            for (std::size_t j = 0; j < n_; ++j) {
                at(i, j) = lp.coupled(r, j);
            }
            at(i, t_col()) = -1.0;
            at(i, slack_col(r)) = 1.0;
        }
        for (std::size_t i = 0; i < m_; ++i) {
            if (at(i, rhs_col()) < 0.0) {
                sign_[i] = -1.0;
                for (std::size_t j = 0; j < art_col(0); ++j) {
                    at(i, j) = -at(i, j);
                }
                at(i, rhs_col()) = -at(i, rhs_col());
            }
            at(i, art_col(i)) = 1.0;
            basis_[i] = art_col(i);
        }
    }

    Outcome run() {
        Outcome out;
        // Phase one: minimize the sum of artificials.
        std::fill(obj_.begin(), obj_.end(), 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < art_col(0); ++j) {
                obj_[j] -= at(i, j);
            }
            obj_[rhs_col()] -= at(i, rhs_col());
        }
        iterate();
        out.infeasibility = -obj_[rhs_col()];
        out.iterations = iterations_;
        if (out.infeasibility > opt_.feasibility_tol) {
            out.status = Status::infeasible;
            out.dual_equality.resize(m_eq_);
            for (std::size_t i = 0; i < m_eq_; ++i) {
                // reduced cost of artificial i is 1 - y_i
                out.dual_equality[i] = sign_[i] * (1.0 - obj_[art_col(i)]);
            }
            return out;
        }
        drive_out_artificials();

        // Phase two: minimize t.
        std::fill(obj_.begin(), obj_.end(), 0.0);
        obj_[t_col()] = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] == t_col()) {
                eliminate_objective(i);
            }
        }
        if (!iterate()) {
            out.status = Status::unbounded;
            out.iterations = iterations_;
            return out;
        }
        out.status = Status::optimal;
        out.iterations = iterations_;
        std::vector<double> x(width_ - 1, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            x[basis_[i]] = at(i, rhs_col());
        }
        out.solution.assign(x.begin(), x.begin() + static_cast<long>(n_));
        out.objective = x[t_col()];
        out.dual_equality.resize(m_eq_);
        out.dual_coupled.resize(k_);
        for (std::size_t i = 0; i < m_; ++i) {
            const double y = -sign_[i] * obj_[art_col(i)];
            if (i < m_eq_) {
                out.dual_equality[i] = y;
            } else {
                out.dual_coupled[i - m_eq_] = y;
            }
        }
        return out;
    }

  private:
    std::size_t t_col() const { return n_; }
    std::size_t slack_col(std::size_t r) const { return n_ + 1 + r; }
    std::size_t art_col(std::size_t i) const { return n_ + 1 + k_ + i; }
    std::size_t rhs_col() const { return width_ - 1; }

    double &at(std::size_t i, std::size_t j) { return cells_[i * width_ + j]; }
    double at(std::size_t i, std::size_t j) const {
        return cells_[i * width_ + j];
    }

    void eliminate_objective(std::size_t row) {
        const double f = obj_[basis_[row]];
        if (f == 0.0) {
            return;
        }
        for (std::size_t j = 0; j < width_; ++j) {
            obj_[j] -= f * at(row, j);
        }
    }

    void pivot(std::size_t row, std::size_t col) {
        const double p = at(row, col);
        for (std::size_t j = 0; j < width_; ++j) {
            at(row, j) /= p;
        }
        at(row, col) = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == row) {
                continue;
            }
            const double f = at(i, col);
            if (f == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < width_; ++j) {
                at(i, j) -= f * at(row, j);
            }
            at(i, col) = 0.0;
            if (at(i, rhs_col()) < 0.0 && at(i, rhs_col()) > -1e-13) {
                at(i, rhs_col()) = 0.0;
            }
        }
        const double f = obj_[col];
        if (f != 0.0) {
            for (std::size_t j = 0; j < width_; ++j) {
                obj_[j] -= f * at(row, j);
            }
            obj_[col] = 0.0;
        }
        basis_[row] = col;
        ++iterations_;
    }

    /// Returns false when the program is unbounded. Artificials never enter.
    bool iterate() {
        const std::size_t last = art_col(0);
        bool bland = false;
        std::size_t stall = 0;
        double best = -obj_[rhs_col()];
        std::size_t bland_rounds = 0;
        for (;;) {
            if (iterations_ >= opt_.max_iterations) {
                std::ostringstream os;
                os << "simplex did not terminate after " << iterations_
                   << " pivots (cycling despite Bland fallback used "
                   << bland_rounds << " times)";
                throw NumericalError(os.str());
            }
            std::size_t enter = last;
            double most = -opt_.optimality_tol;
            for (std::size_t j = 0; j < last; ++j) {
                if (obj_[j] < most) {
                    enter = j;
                    if (bland) {
                        break;
                    }
                    most = obj_[j];
                }
            }
            if (enter == last) {
                return true;
            }
            std::size_t leave = m_;
            double ratio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = at(i, enter);
                if (a <= opt_.pivot_tol) {
                    continue;
                }
                const double r = std::max(0.0, at(i, rhs_col())) / a;
                if (r < ratio - 1e-12 ||
                    (r <= ratio + 1e-12 && leave < m_ &&
                     basis_[i] < basis_[leave])) {
                    ratio = std::min(ratio, r);
                    leave = i;
                }
            }
            if (leave == m_) {
                return false;
            }
            pivot(leave, enter);
            const double value = -obj_[rhs_col()];
            if (value < best - 1e-13) {
                best = value;
                stall = 0;
                bland = false;
            } else if (++stall >= opt_.degenerate_limit && !bland) {
                bland = true;
                ++bland_rounds;
            }
        }
    }

    void drive_out_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < art_col(0)) {
                continue;
            }
            at(i, rhs_col()) = 0.0; // residual already below feasibility_tol
            std::size_t col = art_col(0);
            double biggest = opt_.pivot_tol;
            for (std::size_t j = 0; j < art_col(0); ++j) {
                if (std::abs(at(i, j)) > biggest) {
                    biggest = std::abs(at(i, j));
                    col = j;
                }
            }
            if (col != art_col(0)) {
                pivot(i, col);
            }
            // otherwise the row is redundant; its artificial stays basic at 0
        }
    }

    Options opt_;
    std::size_t n_, k_, m_eq_, m_, width_;
    std::vector<double> cells_;
    std::vector<double> obj_;
    std::vector<std::size_t> basis_;
    std::vector<double> sign_;
    std::size_t iterations_ = 0;
};

} // namespace detail

inline Outcome solve(const LinearProgram &program, const Options &options = {}) {
    program.validate();
    detail::Tableau tableau(program, options);
    return tableau.run();
}

/// max over rows of |A q - b| and max(0, C q - t), plus min(q, t) violations.
inline double max_violation(const LinearProgram &program, const Outcome &out) {
    double worst = 0.0;
    for (double q : out.solution) {
        worst = std::max(worst, -q);
    }
    worst = std::max(worst, -out.objective);
    for (std::size_t i = 0; i < program.equality.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < program.num_vars; ++j) {
            s += program.equality(i, j) * out.solution[j];
        }
        worst = std::max(worst, std::abs(s - program.rhs[i]));
    }
    for (std::size_t i = 0; i < program.coupled.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < program.num_vars; ++j) {
            s += program.coupled(i, j) * out.solution[j];
        }
        worst = std::max(worst, s - out.objective);
    }
    return worst;
}

/**
 * Lower bound b.y on the optimum implied by dual multipliers (y, w), or NaN
 * if they are not dual feasible within tol. Dual feasibility for this
 * program: A^T y + C^T w <= 0 per column of q, -sum(w) <= 1, w <= 0.
 */
inline double dual_bound(const LinearProgram &program,
                         const std::vector<double> &y,
                         const std::vector<double> &w, double tol = 1e-9) {
    double w_sum = 0.0;
    for (double wi : w) {
        if (wi > tol) {
            return std::numeric_limits<double>::quiet_NaN();
        }
        w_sum += wi;
    }
    if (-w_sum > 1.0 + tol) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    for (std::size_t j = 0; j < program.num_vars; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < program.equality.rows; ++i) {
            s += program.equality(i, j) * y[i];
        }
        for (std::size_t i = 0; i < program.coupled.rows; ++i) {
            s += program.coupled(i, j) * w[i];
        }
        if (s > tol) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    }
    double bound = 0.0;
    for (std::size_t i = 0; i < program.rhs.size(); ++i) {
        bound += program.rhs[i] * y[i];
    }
    return bound;
}

} // namespace nlcausal::lp
