// Copyright 2026 The Bellsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bellsim/simplex.h"

#include <cmath>

#include "bellsim/errors.h"

namespace bellsim {

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-12;

class Tableau {
   public:
    Tableau(const DenseMatrix &a, const std::vector<double> &b)
        : m_(a.rows), n_(a.cols), width_(a.cols + a.rows + 1), t_((m_ + 1) * width_, 0.0), basis_(m_) {
        for (std::size_t i = 0; i < m_; i++) {
            double sign = b[i] < 0 ? -1.0 : 1.0;
            for (std::size_t j = 0; j < n_; j++) {
                at(i, j) = sign * a(i, j);
            }
            at(i, n_ + i) = 1;
            at(i, rhs()) = sign * b[i];
            basis_[i] = n_ + i;
        }
        for (std::size_t i = 0; i < m_; i++) {
            for (std::size_t j = 0; j < n_; j++) {
                at(m_, j) -= at(i, j);
            }
            at(m_, rhs()) -= at(i, rhs());
        }
    }

    std::size_t solve() {
        std::size_t iterations = 0;
        std::size_t bland_after = 50 * (m_ + n_) + 1000;
        while (true) {
            bool bland = iterations > bland_after;
            std::size_t enter = pick_entering(bland);
            if (enter == kNone) {
                return iterations;
            }
            std::size_t leave = pick_leaving(enter, bland);
            if (leave == kNone) {
                // Unbounded direction cannot occur in phase 1 (objective >= 0).
                return iterations;
            }
            pivot(leave, enter);
            iterations++;
            if (iterations > 100 * bland_after) {
                throw CapabilityError("simplex failed to terminate");
            }
        }
    }

    double infeasibility() const {
        return -at(m_, rhs());
    }

    std::vector<double> solution() const {
        std::vector<double> x(n_, 0.0);
        for (std::size_t i = 0; i < m_; i++) {
            if (basis_[i] < n_) {
                x[basis_[i]] = at(i, rhs());
            }
        }
        return x;
    }

   private:
    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

    double &at(std::size_t r, std::size_t c) {
        return t_[r * width_ + c];
    }
    double at(std::size_t r, std::size_t c) const {
        return t_[r * width_ + c];
    }
    std::size_t rhs() const {
        return width_ - 1;
    }

    std::size_t pick_entering(bool bland) const {
        std::size_t best = kNone;
        double best_cost = -kCostEps;
        for (std::size_t j = 0; j + 1 < width_; j++) {
            double d = at(m_, j);
            if (d < best_cost) {
                best = j;
                if (bland) {
                    return j;
                }
                best_cost = d;
            }
        }
        return best;
    }

    std::size_t pick_leaving(std::size_t enter, bool bland) const {
        std::size_t best = kNone;
        double best_ratio = 0;
        for (std::size_t i = 0; i < m_; i++) {
            double piv = at(i, enter);
            if (piv <= kPivotEps) {
                continue;
            }
            double ratio = std::max(0.0, at(i, rhs())) / piv;
            if (best == kNone || ratio < best_ratio - 1e-12) {
                best = i;
                best_ratio = ratio;
            } else if (ratio <= best_ratio + 1e-12) {
                bool better = bland ? basis_[i] < basis_[best] : piv > at(best, enter);
                if (better) {
                    best = i;
                    best_ratio = std::min(best_ratio, ratio);
                }
            }
        }
        return best;
    }

    void pivot(std::size_t row, std::size_t col) {
        double inv = 1.0 / at(row, col);
        for (std::size_t c = 0; c < width_; c++) {
            at(row, c) *= inv;
        }
        at(row, col) = 1;
        for (std::size_t r = 0; r <= m_; r++) {
            if (r == row) {
                continue;
            }
            double f = at(r, col);
            if (f == 0) {
                continue;
            }
            for (std::size_t c = 0; c < width_; c++) {
                at(r, c) -= f * at(row, c);
            }
            at(r, col) = 0;
        }
        basis_[row] = col;
    }

    std::size_t m_;
    std::size_t n_;
    std::size_t width_;
    std::vector<double> t_;
    std::vector<std::size_t> basis_;
};

}  // namespace

PhaseOneResult phase_one(const DenseMatrix &a, const std::vector<double> &b, double tolerance) {
    if (b.size() != a.rows) {
        throw ValidationError("phase_one: right-hand side size does not match the matrix");
    }
    Tableau tableau(a, b);
    PhaseOneResult out;
    out.iterations = tableau.solve();
    out.infeasibility = std::max(0.0, tableau.infeasibility());
    out.feasible = out.infeasibility <= tolerance;
    out.x = tableau.solution();
    return out;
}

}  // namespace bellsim
