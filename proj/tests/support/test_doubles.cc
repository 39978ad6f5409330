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

#include "support/test_doubles.h"

namespace bellsim::testing {

Trial ScheduleSensitiveSource::sample(const SettingPair &pair, const WindowContext &ctx, CounterRng &rng) const {
    Trial t;
    t.a = rng.uniform() < 0.5 ? Outcome::kPlus : Outcome::kMinus;
    bool repeat = ctx.previous != nullptr && ctx.previous->x.label == pair.x.label;
    bool copy = rng.uniform() < (repeat ? 0.75 : 0.25);
    t.b = copy ? t.a : (t.a == Outcome::kPlus ? Outcome::kMinus : Outcome::kPlus);
    return t;
}

nlohmann::json ScheduleSensitiveSource::descriptor() const {
    return {{"family", "test-double"}, {"kind", "schedule-sensitive"}};
}

MidpointShiftSource::MidpointShiftSource(ExperimentModel first, ExperimentModel second)
    : first_(std::move(first)), second_(std::move(second)) {
}

Trial MidpointShiftSource::sample(const SettingPair &pair, const WindowContext &ctx, CounterRng &rng) const {
    const ExperimentModel &m = 2 * ctx.window < ctx.total_windows ? first_ : second_;
    return sample_trial(m, pair, rng);
}

nlohmann::json MidpointShiftSource::descriptor() const {
    return {{"family", "test-double"}, {"kind", "midpoint-shift"}};
}

namespace {

ContextualFittedModel fitted(const std::vector<SettingPair> &pairs, double shift) {
    std::map<PairKey, JointOutcomeDist> targets;
    for (const auto &p : pairs) {
        JointOutcomeDist d;
        d.at(Outcome::kPlus, Outcome::kPlus) = 0.25 + shift;
        d.at(Outcome::kPlus, Outcome::kMinus) = 0.25 - shift;
        d.at(Outcome::kMinus, Outcome::kPlus) = 0.25;
        d.at(Outcome::kMinus, Outcome::kMinus) = 0.25;
        targets[key_of(p)] = d;
    }
    return fit_contextual(targets);
}

}  // namespace

ContextualFittedModel uniform_fitted(const std::vector<SettingPair> &pairs) {
    return fitted(pairs, 0.0);
}

ContextualFittedModel shifted_fitted(const std::vector<SettingPair> &pairs) {
    return fitted(pairs, 0.1);
}

}  // namespace bellsim::testing
