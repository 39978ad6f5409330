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

#include <gtest/gtest.h>

#include <random>

using namespace bellsim;

namespace {

double residual(const DenseMatrix &a, const std::vector<double> &b, const std::vector<double> &x) {
    double worst = 0;
    for (std::size_t r = 0; r < a.rows; r++) {
        double s = 0;
        for (std::size_t c = 0; c < a.cols; c++) {
            s += a(r, c) * x[c];
        }
        worst = std::max(worst, std::abs(s - b[r]));
    }
    return worst;
}

}  // namespace

TEST(simplex, simple_feasible_system) {
    // x0 + x1 + x2 = 1, x0 - x2 = 0.2
    DenseMatrix a(2, 3);
    a(0, 0) = a(0, 1) = a(0, 2) = 1;
    a(1, 0) = 1;
    a(1, 2) = -1;
    PhaseOneResult r = phase_one(a, {1.0, 0.2});
    ASSERT_TRUE(r.feasible);
    EXPECT_LT(residual(a, {1.0, 0.2}, r.x), 1e-12);
    for (double v : r.x) {
        EXPECT_GE(v, 0.0);
    }
}

TEST(simplex, infeasible_system) {
    // x0 + x1 = 1 and x0 + x1 = 2.
    DenseMatrix a(2, 2);
    a(0, 0) = a(0, 1) = a(1, 0) = a(1, 1) = 1;
    PhaseOneResult r = phase_one(a, {1.0, 2.0});
    EXPECT_FALSE(r.feasible);
    EXPECT_NEAR(r.infeasibility, 1.0, 1e-12);
}

TEST(simplex, negative_right_hand_side) {
    // -x0 = -0.5, x0 + x1 = 1.
    DenseMatrix a(2, 2);
    a(0, 0) = -1;
    a(1, 0) = a(1, 1) = 1;
    PhaseOneResult r = phase_one(a, {-0.5, 1.0});
    ASSERT_TRUE(r.feasible);
    EXPECT_NEAR(r.x[0], 0.5, 1e-12);
    EXPECT_NEAR(r.x[1], 0.5, 1e-12);
}

TEST(simplex, nonnegativity_makes_system_infeasible) {
    // x0 + x1 = -1 has no nonnegative solution.
    DenseMatrix a(1, 2);
    a(0, 0) = a(0, 1) = 1;
    EXPECT_FALSE(phase_one(a, {-1.0}).feasible);
}

TEST(simplex, redundant_rows) {
    DenseMatrix a(3, 3);
    for (std::size_t c = 0; c < 3; c++) {
        a(0, c) = 1;
        a(1, c) = 2;
        a(2, c) = c;
    }
    PhaseOneResult r = phase_one(a, {1.0, 2.0, 1.0});
    ASSERT_TRUE(r.feasible);
    EXPECT_LT(residual(a, {1.0, 2.0, 1.0}, r.x), 1e-12);
}

TEST(simplex, random_feasible_systems) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int rep = 0; rep < 200; rep++) {
        std::size_t m = 1 + rng() % 6;
        std::size_t n = m + rng() % 10;
        DenseMatrix a(m, n);
        std::vector<double> x(n);
        for (auto &v : x) {
            v = rng() % 3 == 0 ? 0.0 : std::abs(u(rng));
        }
        std::vector<double> b(m, 0.0);
        for (std::size_t r = 0; r < m; r++) {
            for (std::size_t c = 0; c < n; c++) {
                a(r, c) = u(rng);
                b[r] += a(r, c) * x[c];
            }
        }
        PhaseOneResult res = phase_one(a, b);
        ASSERT_TRUE(res.feasible) << rep;
        EXPECT_LT(residual(a, b, res.x), 1e-9);
    }
}

TEST(simplex, shape_errors) {
    DenseMatrix a(2, 2);
    EXPECT_THROW(phase_one(a, {1.0}), std::invalid_argument);
}
