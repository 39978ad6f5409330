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

#include "bellsim/inequalities.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bellsim/builtins.h"
#include "bellsim/errors.h"
#include "bellsim/quantum_oracle.h"
#include "support/random_models.h"

using namespace bellsim;

namespace {

std::array<double, 4> singlet_chsh_correlations() {
    std::array<double, 4> e{};
    auto pairs = chsh_pairs();
    for (std::size_t k = 0; k < 4; k++) {
        e[k] = singlet_correlation(pairs[k].x.angle, pairs[k].y.angle);
    }
    return e;
}

double chsh_value(const std::array<double, 4> &e) {
    ChshInput in;
    in.e = e;
    return chsh(in).value;
}

}  // namespace

TEST(chsh, singlet_reaches_two_root_two) {
    ChshInput in;
    in.e = singlet_chsh_correlations();
    InequalityResult r = chsh(in);
    EXPECT_NEAR(r.value, 2 * std::sqrt(2.0), 1e-12);
    EXPECT_EQ(r.bound, 2.0);
    EXPECT_TRUE(r.violates);
    EXPECT_TRUE(std::isinf(r.sigma));
}

TEST(chsh, standard_error_and_flag) {
    ChshInput in;
    in.e = {0.55, 0.55, 0.55, -0.55};
    in.se = {0.03, 0.04, 0.0, 0.0};
    InequalityResult r = chsh(in);
    EXPECT_NEAR(r.value, 2.2, 1e-12);
    EXPECT_NEAR(r.se, 0.05, 1e-12);
    EXPECT_NEAR(r.sigma, 4.0, 1e-9);
    EXPECT_FALSE(r.violates);
    EXPECT_TRUE(chsh(in, 3.0).violates);
}

TEST(chsh, invariant_under_minus_sign_placement) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int rep = 0; rep < 1000; rep++) {
        std::array<double, 4> e{u(rng), u(rng), u(rng), u(rng)};
        double s = chsh_value(e);
        std::array<double, 4> p = e;
        std::sort(p.begin(), p.end());
        do {
            ASSERT_NEAR(chsh_value(p), s, 1e-12);
        } while (std::next_permutation(p.begin(), p.end()));
    }
}

TEST(chsh, deterministic_strategies_give_bound_two) {
    auto strategies = deterministic_strategies();
    ASSERT_EQ(strategies.size(), 16u);
    double best = 0;
    for (const auto &e : strategies) {
        best = std::max(best, chsh_value(e));
    }
    EXPECT_EQ(best, 2.0);
    for (int n = 2; n <= 4; n++) {
        EXPECT_EQ(deterministic_bound(n), 2.0) << n;
    }
    EXPECT_THROW(deterministic_bound(1), ValidationError);
}

TEST(chsh, mixtures_of_deterministic_strategies) {
    std::mt19937_64 rng(3);
    auto strategies = deterministic_strategies();
    for (int rep = 0; rep < 1000; rep++) {
        auto w = bellsim::testing::random_simplex(rng, strategies.size());
        std::array<double, 4> e{};
        for (std::size_t s = 0; s < strategies.size(); s++) {
            for (std::size_t k = 0; k < 4; k++) {
                e[k] += w[s] * strategies[s][k];
            }
        }
        EXPECT_LE(chsh_value(e), 2.0 + 1e-12);
    }
}

TEST(boole, conditions) {
    BooleResult ok = boole_check({0.2, 0.1, -0.3});
    EXPECT_TRUE(ok.satisfiable);
    EXPECT_TRUE(ok.violated_conditions.empty());
    BooleResult bad = boole_check({-1, -1, -1});
    EXPECT_FALSE(bad.satisfiable);
    EXPECT_EQ(bad.violated_conditions, std::vector<int>{0});
    EXPECT_NEAR(bad.values[0], -2.0, 1e-15);
    EXPECT_TRUE(boole_check({1, 1, 1}).satisfiable);
    EXPECT_TRUE(boole_check({-1, -1, 1}).satisfiable);
}

TEST(feasibility, singlet_chsh_moments_are_infeasible) {
    FeasibilityResult r = joint_feasibility(chsh_problem(singlet_chsh_correlations()));
    EXPECT_FALSE(r.feasible);
}

TEST(feasibility, anticorrelated_triple_is_infeasible) {
    EXPECT_FALSE(joint_feasibility(triple_problem({-1, -1, -1})).feasible);
}

TEST(feasibility, independent_fair_coins_give_uniform_witness) {
    FeasibilityProblem p;
    p.variables = {"c0", "c1", "c2", "c3"};
    for (std::size_t i = 0; i < 4; i++) {
        p.moments.push_back({{i}, 0.0});
        for (std::size_t j = i + 1; j < 4; j++) {
            p.moments.push_back({{i, j}, 0.0});
            for (std::size_t k = j + 1; k < 4; k++) {
                p.moments.push_back({{i, j, k}, 0.0});
            }
        }
    }
    p.moments.push_back({{0, 1, 2, 3}, 0.0});
    FeasibilityResult r = joint_feasibility(p);
    ASSERT_TRUE(r.feasible);
    ASSERT_EQ(r.witness.size(), 16u);
    for (double w : r.witness) {
        EXPECT_NEAR(w, 1.0 / 16, 1e-12);
    }
    EXPECT_LE(r.max_residual, 1e-9);
}

TEST(feasibility, witness_reproduces_moments) {
    std::mt19937_64 rng(4);
    for (int rep = 0; rep < 100; rep++) {
        auto w = bellsim::testing::random_simplex(rng, 8);
        TripleCorrelations t;
        for (std::size_t idx = 0; idx < 8; idx++) {
            auto s = [&](int bit) { return (idx >> bit) & 1 ? 1.0 : -1.0; };
            t.e12 += w[idx] * s(0) * s(1);
            t.e13 += w[idx] * s(0) * s(2);
            t.e23 += w[idx] * s(1) * s(2);
        }
        FeasibilityProblem p = triple_problem(t);
        FeasibilityResult r = joint_feasibility(p);
        ASSERT_TRUE(r.feasible);
        for (const auto &m : p.moments) {
            double got = 0;
            for (std::size_t idx = 0; idx < r.witness.size(); idx++) {
                double prod = 1;
                for (auto v : m.variables) {
                    prod *= (idx >> v) & 1 ? 1.0 : -1.0;
                }
                got += r.witness[idx] * prod;
            }
            EXPECT_NEAR(got, m.value, 1e-9);
        }
    }
}

TEST(feasibility, agrees_with_boole_on_coarse_grid) {
    for (int i = 0; i <= 8; i++) {
        for (int j = 0; j <= 8; j++) {
            for (int k = 0; k <= 8; k++) {
                TripleCorrelations t{-1 + i / 4.0, -1 + j / 4.0, -1 + k / 4.0};
                ASSERT_EQ(boole_check(t).satisfiable, joint_feasibility(triple_problem(t)).feasible)
                    << t.e12 << " " << t.e13 << " " << t.e23;
            }
        }
    }
}

TEST(feasibility, errors) {
    FeasibilityProblem big;
    for (int k = 0; k < 13; k++) {
        big.variables.push_back("v" + std::to_string(k));
    }
    EXPECT_THROW(joint_feasibility(big), CapabilityError);
    FeasibilityProblem bad{{"A", "B"}, {{{0, 5}, 0.1}}};
    EXPECT_THROW(joint_feasibility(bad), ValidationError);
    FeasibilityProblem out_of_range{{"A", "B"}, {{{0, 1}, 1.5}}};
    EXPECT_FALSE(joint_feasibility(out_of_range).feasible);
}

// Every local strategy with no-click outputs: each wing maps its setting to
// one of {-1, 0, +1}. J is linear in the joint distribution, so its maximum
// over local models is the maximum over these 3^2 * 3^2 deterministic
// strategies.
TEST(ch_eberhard, local_bound_is_zero_by_enumeration) {
    double best = -INFINITY;
    const std::array<Outcome, 3> vals{Outcome::kMinus, Outcome::kNone, Outcome::kPlus};
    for (auto ax : vals) {
        for (auto ax2 : vals) {
            for (auto by : vals) {
                for (auto by2 : vals) {
                    CoincidenceCounts c;
                    auto add = [&](const char *x, const char *y, Outcome a, Outcome b) {
                        CountTable &t = c.table_for(bellsim::testing::labeled_pair(x, y));
                        t.at(a, b) = 1;
                    };
                    add("x", "y", ax, by);
                    add("x", "y'", ax, by2);
                    add("x'", "y", ax2, by);
                    add("x'", "y'", ax2, by2);
                    best = std::max(best, ch_eberhard(c, {"x", "x'", "y", "y'"}).value);
                }
            }
        }
    }
    EXPECT_EQ(best, 0.0);
}

TEST(ch_eberhard, golden_counts) {
    CoincidenceCounts c;
    auto &t1 = c.table_for(bellsim::testing::labeled_pair("x", "y"));
    t1.at(Outcome::kPlus, Outcome::kPlus) = 40;
    t1.at(Outcome::kMinus, Outcome::kNone) = 60;
    auto &t2 = c.table_for(bellsim::testing::labeled_pair("x", "y'"));
    t2.at(Outcome::kPlus, Outcome::kNone) = 5;
    t2.at(Outcome::kPlus, Outcome::kMinus) = 5;
    t2.at(Outcome::kPlus, Outcome::kPlus) = 90;
    auto &t3 = c.table_for(bellsim::testing::labeled_pair("x'", "y"));
    t3.at(Outcome::kNone, Outcome::kPlus) = 10;
    t3.at(Outcome::kMinus, Outcome::kMinus) = 90;
    auto &t4 = c.table_for(bellsim::testing::labeled_pair("x'", "y'"));
    t4.at(Outcome::kPlus, Outcome::kPlus) = 20;
    t4.at(Outcome::kNone, Outcome::kNone) = 80;
    InequalityResult r = ch_eberhard(c, {"x", "x'", "y", "y'"});
    EXPECT_NEAR(r.value, 0.4 - 0.1 - 0.1 - 0.2, 1e-15);
    double var = 0.4 * 0.6 / 100 + 0.1 * 0.9 / 100 + 0.1 * 0.9 / 100 + 0.2 * 0.8 / 100;
    EXPECT_NEAR(r.se, std::sqrt(var), 1e-15);
    EXPECT_EQ(r.name, "CH-Eberhard");
    EXPECT_THROW(ch_eberhard(c, {"x", "x'", "y", "nope"}), LookupError);
}

TEST(ch_eberhard, coincidence_model_stays_local) {
    SettingSchedule s{ScheduleMode::kFastSwitching, chsh_pairs(), 10};
    CoincidenceCounts c = run_counts(ModelTrialSource(coincidence_instance(4, 1)), s, 400000, 0.001, 6);
    InequalityResult r = ch_eberhard(c, {"a", "a'", "b", "b'"});
    EXPECT_LE(r.value, 4 * r.se);
    EXPECT_FALSE(r.violates);
}

TEST(no_signaling, product_model_tables) {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 100; rep++) {
        ExperimentModel m = bellsim::testing::random_product_model(rng, true);
        std::map<PairKey, JointOutcomeDist> tables;
        for (const auto &p : chsh_pairs()) {
            tables[key_of(p)] = exact_joint(m, p);
        }
        NoSignalingReport r = no_signaling_check(tables);
        EXPECT_TRUE(r.pass);
        EXPECT_LE(std::max(r.max_discrepancy_a, r.max_discrepancy_b), 1e-12);
        EXPECT_EQ(r.entries.size(), 4u);
    }
}

TEST(no_signaling, needs_a_shared_setting) {
    std::map<PairKey, JointOutcomeDist> tables;
    tables[{"a", "b"}] = singlet_joint(0, 1);
    EXPECT_THROW(no_signaling_check(tables), ValidationError);
}

TEST(no_signaling, estimated_tables_pass_for_product_models) {
    SettingSchedule s{ScheduleMode::kFastSwitching, chsh_pairs(), 10};
    CoincidenceCounts c = run_counts(ModelTrialSource(demo_product_model()), s, 1000000, 1.0, 8);
    NoSignalingTest t = no_signaling_test(c);
    EXPECT_EQ(t.entries.size(), 4u);
    EXPECT_GT(t.min_p_value, 1e-3);
    EXPECT_TRUE(t.pass);
}

TEST(no_signaling, estimated_tables_flag_signaling_targets) {
    JointOutcomeDist t1;
    t1.at(Outcome::kPlus, Outcome::kPlus) = 0.5;
    t1.at(Outcome::kMinus, Outcome::kMinus) = 0.5;
    JointOutcomeDist t2;
    t2.at(Outcome::kPlus, Outcome::kPlus) = 0.7;
    t2.at(Outcome::kMinus, Outcome::kMinus) = 0.3;
    ContextualFittedModel m = fit_contextual({{{"a", "b"}, t1}, {{"a", "b'"}, t2}});
    SettingSchedule s{ScheduleMode::kFastSwitching,
                      {bellsim::testing::labeled_pair("a", "b", 0.5), bellsim::testing::labeled_pair("a", "b'", 0.5)},
                      10};
    CoincidenceCounts c = run_counts(ModelTrialSource(m), s, 20000, 1.0, 1);
    EXPECT_FALSE(no_signaling_test(c).pass);
}

TEST(inequality_json, fields) {
    InequalityResult r{"CHSH", 2.5, 0.0, 2.0, INFINITY, true};
    nlohmann::json j = inequality_to_json(r);
    EXPECT_EQ(j["name"], "CHSH");
    EXPECT_EQ(j["sigma"], "inf");
    EXPECT_EQ(j["bound"], 2.0);
}
