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

#include "bellsim/models.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bellsim/builtins.h"
#include "bellsim/errors.h"
#include "bellsim/inequalities.h"
#include "bellsim/quantum_oracle.h"
#include "support/random_models.h"

using namespace bellsim;
using bellsim::testing::brute_force_joint;
using bellsim::testing::labeled_pair;

namespace {

constexpr double kPi = std::numbers::pi;

void expect_tables_near(const JointOutcomeDist &got, const JointOutcomeDist &want, double tol) {
    for (std::size_t k = 0; k < 9; k++) {
        EXPECT_NEAR(got.p[k], want.p[k], tol) << "cell " << k;
    }
}

JointOutcomeDist oracle_joint(const ExperimentModel &m, const SettingPair &p) {
    return std::visit(
        [&](const auto &model) -> JointOutcomeDist {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, ContextualProductModel> || std::is_same_v<T, ShvModel> ||
                          std::is_same_v<T, LrhvModel>) {
                return brute_force_joint(model, p);
            } else {
                throw std::logic_error("no oracle");
            }
        },
        m);
}

}  // namespace

TEST(models, exact_joint_matches_brute_force_sum) {
    std::mt19937_64 rng(1);
    for (int rep = 0; rep < 300; rep++) {
        ExperimentModel m = bellsim::testing::random_finite_model(rng, rep % 3, rep % 2 == 1);
        for (const auto &p : chsh_pairs()) {
            expect_tables_near(exact_joint(m, p), oracle_joint(m, p), 1e-14);
        }
    }
}

TEST(models, tables_are_normalized) {
    std::mt19937_64 rng(2);
    for (int rep = 0; rep < 300; rep++) {
        ExperimentModel m = bellsim::testing::random_finite_model(rng, rep % 3, true);
        for (const auto &p : chsh_pairs()) {
            JointOutcomeDist d = exact_joint(m, p);
            EXPECT_NEAR(d.total(), 1.0, 1e-12);
            EXPECT_NO_THROW(d.validate());
        }
    }
}

TEST(models, product_form_does_not_signal) {
    std::mt19937_64 rng(3);
    auto s = chsh_settings();
    for (int rep = 0; rep < 200; rep++) {
        ExperimentModel m = bellsim::testing::random_finite_model(rng, rep % 3, true);
        auto m1 = alice_marginal(m, s.a, s.b);
        auto m2 = alice_marginal(m, s.a, s.b2);
        for (std::size_t k = 0; k < 3; k++) {
            EXPECT_NEAR(m1[k], m2[k], 1e-12);
        }
        JointOutcomeDist d1 = exact_joint(m, SettingPair{s.a, s.b});
        JointOutcomeDist d2 = exact_joint(m, SettingPair{s.a2, s.b});
        for (std::size_t k = 0; k < 3; k++) {
            EXPECT_NEAR(d1.bob()[k], d2.bob()[k], 1e-12);
        }
    }
}

TEST(models, instrument_averaging_identity) {
    std::mt19937_64 rng(4);
    for (int rep = 0; rep < 200; rep++) {
        ExperimentModel m = bellsim::testing::random_product_model(rng, rep % 2 == 1);
        for (const auto &p : chsh_pairs()) {
            EXPECT_NEAR(expectation(m, p), bell1970_expectation(m, p), 1e-12);
        }
    }
}

TEST(models, averaged_response_table_by_hand) {
    ContextualProductModel m = demo_product_model();
    SettingPair p{chsh_settings().a, chsh_settings().b};
    AveragedResponseTable t = averaged_responses(m, p);
    ASSERT_EQ(t.mean_a.size(), m.source.n1);
    for (std::size_t l = 0; l < m.source.n1; l++) {
        const auto &r = m.alice.at("a");
        double want = 0;
        for (std::size_t k = 0; k < r.instrument.size(); k++) {
            want += value_of(r.outcome(l, k)) * r.instrument.weights[k];
        }
        EXPECT_NEAR(t.mean_a[l], want, 1e-15);
    }
}

TEST(models, full_sample_chsh_is_bounded) {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 300; rep++) {
        ExperimentModel m = bellsim::testing::random_finite_model(rng, rep % 3, false);
        ChshInput in;
        auto pairs = chsh_pairs();
        for (std::size_t k = 0; k < 4; k++) {
            in.e[k] = expectation(m, pairs[k]);
        }
        EXPECT_LE(chsh(in).value, 2.0 + 1e-10);
    }
}

TEST(models, lrhv_expectation_agrees_with_table) {
    LrhvModel m = demo_lrhv_model();
    for (const auto &p : chsh_pairs()) {
        EXPECT_NEAR(lrhv_expectation(m, p), expectation(m, p), 1e-15);
    }
}

TEST(models, lrhv_perfect_anticorrelation) {
    LrhvModel m;
    m.source = {2, 2, {0.5, 0.0, 0.0, 0.5}};
    m.alice["a"] = {Outcome::kPlus, Outcome::kMinus};
    m.bob["b"] = {Outcome::kMinus, Outcome::kPlus};
    EXPECT_DOUBLE_EQ(expectation(m, labeled_pair("a", "b")), -1.0);
}

TEST(models, fitted_model_reproduces_singlet_targets) {
    std::vector<SettingPair> pairs;
    for (int k = 0; k < 8; k++) {
        double x = k * kPi / 16;
        double y = (7 - k) * kPi / 11;
        pairs.push_back(SettingPair{Setting::make(Side::kA, x, "x" + std::to_string(k)),
                                    Setting::make(Side::kB, y, "y" + std::to_string(k)), 1.0 / 8});
    }
    ContextualFittedModel m = singlet_fit_model(pairs);
    for (const auto &p : pairs) {
        EXPECT_NEAR(expectation(m, p), -std::cos(2 * (p.x.angle - p.y.angle)), 1e-12);
        expect_tables_near(exact_joint(m, p), singlet_joint(p.x.angle, p.y.angle), 1e-12);
    }
}

TEST(models, fitted_model_can_signal_when_targets_do) {
    JointOutcomeDist t1;
    t1.at(Outcome::kPlus, Outcome::kPlus) = 0.5;
    t1.at(Outcome::kMinus, Outcome::kMinus) = 0.5;
    JointOutcomeDist t2;
    t2.at(Outcome::kPlus, Outcome::kPlus) = 0.7;
    t2.at(Outcome::kMinus, Outcome::kMinus) = 0.3;
    ContextualFittedModel m = fit_contextual({{{"a", "b"}, t1}, {{"a", "b'"}, t2}});
    NoSignalingReport r = no_signaling_check({{{"a", "b"}, t1}, {{"a", "b'"}, t2}});
    EXPECT_NEAR(r.max_discrepancy_a, 0.2, 1e-15);
    EXPECT_FALSE(r.pass);
    EXPECT_NEAR(exact_joint(m, labeled_pair("a", "b'")).at(Outcome::kPlus, Outcome::kPlus), 0.7, 1e-15);
}

TEST(models, validation_errors) {
    ContextualProductModel m = demo_product_model();
    m.source.weights[0] += 0.01;
    EXPECT_THROW(validate(ExperimentModel{m}), ValidationError);

    m = demo_product_model();
    m.alice["a"].instrument.weights = {1.2, -0.2};
    EXPECT_THROW(validate(ExperimentModel{m}), ValidationError);

    m = demo_product_model();
    m.alice["a"].outcomes.pop_back();
    EXPECT_THROW(validate(ExperimentModel{m}), ValidationError);

    EXPECT_THROW(validate(ExperimentModel{CoincidenceModel{4.0, 0.0}}), ValidationError);
    EXPECT_THROW(coincidence_instance(-1.0, 1.0), ValidationError);
}

TEST(models, missing_setting_is_a_lookup_error) {
    ExperimentModel m = demo_product_model();
    EXPECT_THROW(exact_joint(m, labeled_pair("nope", "b")), LookupError);
    EXPECT_THROW(exact_joint(ExperimentModel{demo_lrhv_model()}, labeled_pair("a", "nope")), LookupError);
}

TEST(models, capability_errors) {
    ExperimentModel c = coincidence_instance(4, 1);
    SettingPair p = chsh_pairs()[0];
    EXPECT_THROW(contextual_joint(c, p), CapabilityError);
    EXPECT_THROW(exact_joint(c, p), CapabilityError);
    EXPECT_THROW(contextual_joint(ExperimentModel{demo_shv_model()}, p), CapabilityError);
    EXPECT_THROW(bell1970_expectation(ExperimentModel{demo_shv_model()}, p), CapabilityError);
    EXPECT_FALSE(is_finite(c));
    EXPECT_EQ(family_of(c), Family::kContextualProduct);
}

TEST(models, sampling_matches_exact_tables) {
    std::mt19937_64 gen(6);
    const int n = 200000;
    for (int family = 0; family < 3; family++) {
        ExperimentModel m = bellsim::testing::random_finite_model(gen, family, true);
        SettingPair p = chsh_pairs()[1];
        JointOutcomeDist want = exact_joint(m, p);
        std::array<int, 9> hits{};
        for (int k = 0; k < n; k++) {
            CounterRng rng(77, k);
            Trial t = sample_trial(m, p, rng);
            hits[3 * index_of(t.a) + index_of(t.b)]++;
        }
        for (std::size_t k = 0; k < 9; k++) {
            double se = std::sqrt(want.p[k] * (1 - want.p[k]) / n);
            EXPECT_NEAR(static_cast<double>(hits[k]) / n, want.p[k], 4 * se + 1e-12) << "family " << family;
        }
    }
}

// For a shared uniform angle, A = sign cos 2(theta - x) and
// B = sign cos 2(theta - y) disagree on a fraction 2|x - y| / pi of the
// circle, so E = 1 - 4|x - y| / pi for |x - y| <= pi / 2. The integral is
// checked here by a midpoint rule over theta before it is used as an oracle.
double coincidence_full_sample_oracle(double x, double y) {
    const int steps = 400000;
    double sum = 0;
    for (int k = 0; k < steps; k++) {
        double th = (k + 0.5) * 2 * kPi / steps;
        double a = std::cos(2 * (th - x)) >= 0 ? 1 : -1;
        double b = std::cos(2 * (th - y)) >= 0 ? 1 : -1;
        sum += a * b;
    }
    return sum / steps;
}

TEST(models, coincidence_closed_form_oracle) {
    for (double d : {0.0, 0.1, kPi / 8, kPi / 4, 3 * kPi / 8, kPi / 2}) {
        EXPECT_NEAR(coincidence_full_sample_oracle(0.0, d), 1 - 4 * d / kPi, 1e-4);
    }
}

TEST(models, coincidence_full_sample_correlation) {
    ExperimentModel m = coincidence_instance(4, 1);
    const int n = 200000;
    for (const auto &p : chsh_pairs()) {
        double sum = 0;
        int plus_a = 0;
        for (int k = 0; k < n; k++) {
            CounterRng rng(9, k);
            Trial t = sample_trial(m, p, rng);
            ASSERT_NE(t.a, Outcome::kNone);
            ASSERT_NE(t.b, Outcome::kNone);
            ASSERT_GE(t.delay_a, 0.0);
            ASSERT_LE(t.delay_a, 1.0);
            sum += value_of(t.a) * value_of(t.b);
            plus_a += t.a == Outcome::kPlus;
        }
        double e = sum / n;
        double want = 1 - 4 * std::abs(p.x.angle - p.y.angle) / kPi;
        double se = std::sqrt((1 - want * want) / n);
        EXPECT_NEAR(e, want, 4 * se);
        EXPECT_NEAR(static_cast<double>(plus_a) / n, 0.5, 4 * 0.5 / std::sqrt(n));
    }
}

TEST(models, coincidence_delay_scales_with_max_delay) {
    ExperimentModel m1 = coincidence_instance(2, 1);
    ExperimentModel m3 = coincidence_instance(2, 3);
    SettingPair p = chsh_pairs()[0];
    for (int k = 0; k < 100; k++) {
        CounterRng r1(1, k);
        CounterRng r3(1, k);
        Trial t1 = sample_trial(m1, p, r1);
        Trial t3 = sample_trial(m3, p, r3);
        EXPECT_EQ(t1.a, t3.a);
        EXPECT_NEAR(t3.delay_a, 3 * t1.delay_a, 1e-12);
        EXPECT_NEAR(t3.delay_b, 3 * t1.delay_b, 1e-12);
    }
}

TEST(models, quantum_oracle_values) {
    EXPECT_NEAR(singlet_correlation(0, 0), -1.0, 1e-15);
    EXPECT_NEAR(singlet_correlation(0, kPi / 4), 0.0, 1e-15);
    EXPECT_NEAR(singlet_correlation(0, kPi / 8), -std::sqrt(0.5), 1e-15);
    JointOutcomeDist d = singlet_joint(0.3, 1.1);
    EXPECT_NEAR(d.total(), 1.0, 1e-15);
    EXPECT_NEAR(d.correlation(), singlet_correlation(0.3, 1.1), 1e-15);
}
