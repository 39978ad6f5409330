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

#include "bellsim/rng.h"

#include <gtest/gtest.h>

#include <array>
#include <random>
#include <vector>

#include "bellsim/stats.h"

using namespace bellsim;

TEST(rng, same_key_same_sequence) {
    CounterRng r1(42, 7, RngStream::kTrial);
    CounterRng r2(42, 7, RngStream::kTrial);
    for (int k = 0; k < 100; k++) {
        ASSERT_EQ(r1(), r2());
    }
}

TEST(rng, seed_counter_and_stream_each_change_the_sequence) {
    std::uint64_t base = CounterRng(42, 7, RngStream::kTrial)();
    EXPECT_NE(base, CounterRng(43, 7, RngStream::kTrial)());
    EXPECT_NE(base, CounterRng(42, 8, RngStream::kTrial)());
    EXPECT_NE(base, CounterRng(42, 7, RngStream::kSchedule)());
}

TEST(rng, derive_seed_depends_on_salt) {
    EXPECT_NE(derive_seed(1, 1), derive_seed(1, 2));
    EXPECT_NE(derive_seed(1, 1), derive_seed(2, 1));
    EXPECT_EQ(derive_seed(9, 3), derive_seed(9, 3));
}

TEST(rng, uniform_is_in_unit_interval_and_passes_ks) {
    std::vector<double> xs;
    for (std::uint64_t c = 0; c < 20000; c++) {
        CounterRng r(5, c);
        double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        xs.push_back(u);
    }
    // 99.9% critical value of the KS statistic is about 1.95 / sqrt(n).
    EXPECT_LT(ks_uniform_distance(xs), 1.95 / std::sqrt(20000.0));
}

TEST(rng, usable_with_standard_distributions) {
    CounterRng r(3, 0);
    std::uniform_int_distribution<int> dist(1, 6);
    for (int k = 0; k < 1000; k++) {
        int v = dist(r);
        ASSERT_GE(v, 1);
        ASSERT_LE(v, 6);
    }
}

TEST(rng, discrete_matches_weights) {
    const std::array<double, 4> w{0.1, 0.0, 0.6, 0.3};
    std::array<int, 4> hits{};
    const int n = 100000;
    CounterRng r(11, 0);
    for (int k = 0; k < n; k++) {
        hits[r.discrete(w)]++;
    }
    EXPECT_EQ(hits[1], 0);
    for (std::size_t k = 0; k < w.size(); k++) {
        double se = std::sqrt(w[k] * (1 - w[k]) / n);
        EXPECT_NEAR(static_cast<double>(hits[k]) / n, w[k], 4 * se + 1e-12);
    }
}

TEST(rng, discrete_accepts_unnormalized_weights) {
    const std::array<double, 2> w{0.0, 5.0};
    CounterRng r(1, 1);
    for (int k = 0; k < 100; k++) {
        ASSERT_EQ(r.discrete(w), 1u);
    }
}
