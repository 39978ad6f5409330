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

#ifndef BELLSIM_TESTS_TEST_DOUBLES_H
#define BELLSIM_TESTS_TEST_DOUBLES_H

#include <vector>

#include "bellsim/protocol.h"

namespace bellsim::testing {

/// Outcomes depend on the setting history: a is a fair +-1 coin and b copies
/// a with probability 0.75 when Alice's setting repeats the previous
/// window's, 0.25 otherwise. Fast switching and fixed blocks then see
/// different correlations.
class ScheduleSensitiveSource final : public TrialSource {
   public:
    Trial sample(const SettingPair &pair, const WindowContext &ctx, CounterRng &rng) const override;
    nlohmann::json descriptor() const override;
};

/// Samples `first` during the first half of a run and `second` afterwards.
class MidpointShiftSource final : public TrialSource {
   public:
    MidpointShiftSource(ExperimentModel first, ExperimentModel second);
    Trial sample(const SettingPair &pair, const WindowContext &ctx, CounterRng &rng) const override;
    nlohmann::json descriptor() const override;

   private:
    ExperimentModel first_;
    ExperimentModel second_;
};

/// Fitted models over `pairs` whose tables are uniform on the four +-1 cells
/// and, for the shifted one, move 0.1 of mass from (+,-) to (+,+): a total
/// variation distance of exactly 0.1.
ContextualFittedModel uniform_fitted(const std::vector<SettingPair> &pairs);
ContextualFittedModel shifted_fitted(const std::vector<SettingPair> &pairs);

}  // namespace bellsim::testing

#endif
