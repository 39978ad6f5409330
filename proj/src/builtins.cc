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

#include "bellsim/builtins.h"

#include <numbers>

#include "bellsim/errors.h"
#include "bellsim/quantum_oracle.h"

namespace bellsim {

namespace {

constexpr Outcome P = Outcome::kPlus;
constexpr Outcome M = Outcome::kMinus;

double param(const nlohmann::json &params, const char *name, double fallback) {
    if (!params.contains(name)) {
        return fallback;
    }
    if (!params[name].is_number()) {
        throw ValidationError(std::string("model parameter '") + name + "' must be a number");
    }
    return params[name].get<double>();
}

}  // namespace

ChshSettings chsh_settings() {
    constexpr double pi = std::numbers::pi;
    return ChshSettings{
        Setting::make(Side::kA, 0.0, "a"),
        Setting::make(Side::kA, pi / 4, "a'"),
        Setting::make(Side::kB, pi / 8, "b"),
        Setting::make(Side::kB, 3 * pi / 8, "b'"),
    };
}

std::vector<SettingPair> chsh_pairs() {
    ChshSettings s = chsh_settings();
    return {
        SettingPair{s.a, s.b, 0.25},
        SettingPair{s.a, s.b2, 0.25},
        SettingPair{s.a2, s.b, 0.25},
        SettingPair{s.a2, s.b2, 0.25},
    };
}

ContextualFittedModel singlet_fit_model(const std::vector<SettingPair> &pairs) {
    std::map<PairKey, JointOutcomeDist> targets;
    for (const auto &pair : pairs) {
        targets[key_of(pair)] = singlet_joint(pair.x.angle, pair.y.angle);
    }
    return fit_contextual(targets);
}

ContextualProductModel demo_product_model() {
    ContextualProductModel m;
    m.source = FiniteSource{2, 2, {0.4, 0.1, 0.1, 0.4}};
    // Rows are the source parameter, columns the instrument parameter.
    m.alice["a"] = ContextualResponse{FiniteDist{{0.7, 0.3}}, {P, M, M, P}, {}};
    m.alice["a'"] = ContextualResponse{FiniteDist{{0.5, 0.25, 0.25}}, {P, P, M, M, P, M}, {}};
    m.bob["b"] = ContextualResponse{FiniteDist{{0.6, 0.4}}, {P, P, M, P}, {}};
    m.bob["b'"] = ContextualResponse{FiniteDist{{0.8, 0.2}}, {M, P, P, M}, {}};
    return m;
}

ShvModel demo_shv_model() {
    ShvModel m;
    m.source = FiniteSource{2, 2, {0.35, 0.15, 0.15, 0.35}};
    m.alice["a"] = ShvResponse{{{0.2, 0.0, 0.8}, {0.9, 0.0, 0.1}}};
    m.alice["a'"] = ShvResponse{{{0.5, 0.0, 0.5}, {0.3, 0.0, 0.7}}};
    m.bob["b"] = ShvResponse{{{0.25, 0.0, 0.75}, {0.75, 0.0, 0.25}}};
    m.bob["b'"] = ShvResponse{{{0.6, 0.0, 0.4}, {0.1, 0.0, 0.9}}};
    return m;
}

LrhvModel demo_lrhv_model() {
    LrhvModel m;
    m.source = FiniteSource{4, 4, {}};
    m.source.weights.assign(16, 0.0);
    for (std::size_t i = 0; i < 4; i++) {
        m.source.weights[i * 4 + i] = 0.25;
    }
    m.alice["a"] = {P, P, M, M};
    m.alice["a'"] = {P, M, P, M};
    m.bob["b"] = {P, P, P, M};
    m.bob["b'"] = {M, P, P, M};
    return m;
}

ExperimentModel builtin_model(const std::string &name, const nlohmann::json &params) {
    if (name == "coincidence") {
        return coincidence_instance(param(params, "d", 4.0), param(params, "t0", 1.0));
    }
    if (name == "singlet-fit") {
        return singlet_fit_model(chsh_pairs());
    }
    if (name == "product-demo") {
        return demo_product_model();
    }
    if (name == "shv-demo") {
        return demo_shv_model();
    }
    if (name == "lrhv-demo") {
        return demo_lrhv_model();
    }
    throw ValidationError("unknown built-in model '" + name + "'");
}

std::vector<std::string> builtin_model_names() {
    return {"coincidence", "singlet-fit", "product-demo", "shv-demo", "lrhv-demo"};
}

}  // namespace bellsim
