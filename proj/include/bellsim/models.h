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

#ifndef BELLSIM_MODELS_H
#define BELLSIM_MODELS_H

// Hidden-variable model families for two-wing correlation experiments.
//
// A contextual model draws source parameters (l1, l2) shared by the pair and,
// at each wing, instrument parameters lx / ly whose distribution belongs to
// the setting in use. Outcomes are deterministic functions of the local
// parameters:
//
//   P(a, b | x, y) = sum over (l1, l2, lx, ly) of
//                    P(l1, l2) Px(lx) Py(ly) [a == A_x(l1, lx)] [b == B_y(l2, ly)]
//
// SHV models drop the instrument parameters and draw outcomes from
// P(a | x, l1); LRHV models drop the randomness too and read A_x(l1).

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bellsim/outcome.h"
#include "bellsim/rng.h"

namespace bellsim {

/// Tolerance for the normalization of model distributions.
inline constexpr double kModelTolerance = 1e-12;

/// Finite distribution over indices 0..n-1.
struct FiniteDist {
    std::vector<double> weights;

    std::size_t size() const {
        return weights.size();
    }
    void validate(const std::string &what) const;
};

/// Correlated source parameters (l1, l2) on a finite grid. Weights are stored
/// row-major: weights[i * n2 + j] = P(l1 = i, l2 = j).
struct FiniteSource {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::vector<double> weights;

    double weight(std::size_t i, std::size_t j) const {
        return weights[i * n2 + j];
    }
    void validate() const;
};

/// Response of one setting in a contextual product model: the instrument
/// distribution Px over lx and the deterministic table A_x(l, lx).
/// outcomes[l * instrument.size() + lx]. `delays` is empty (all zero) or
/// parallel to `outcomes`.
struct ContextualResponse {
    FiniteDist instrument;
    std::vector<Outcome> outcomes;
    std::vector<double> delays;

    Outcome outcome(std::size_t local, std::size_t inst) const {
        return outcomes[local * instrument.size() + inst];
    }
    double delay(std::size_t local, std::size_t inst) const {
        return delays.empty() ? 0.0 : delays[local * instrument.size() + inst];
    }
};

struct ContextualProductModel {
    FiniteSource source;
    std::map<std::string, ContextualResponse> alice;
    std::map<std::string, ContextualResponse> bob;
};

/// One lambda distribution per setting pair. lambda ranges over
/// Outcome x Outcome and the responses copy its components to (a, b), so the
/// per-pair table is exactly the fitted target.
struct ContextualFittedModel {
    std::map<PairKey, JointOutcomeDist> targets;
};

/// Stochastic response table: probs[l] = P(a | x, l) ordered (-1, 0, +1).
struct ShvResponse {
    std::vector<std::array<double, 3>> probs;
};

struct ShvModel {
    FiniteSource source;
    std::map<std::string, ShvResponse> alice;
    std::map<std::string, ShvResponse> bob;
};

/// Deterministic local responses A_x(l1), B_y(l2).
struct LrhvModel {
    FiniteSource source;
    std::map<std::string, std::vector<Outcome>> alice;
    std::map<std::string, std::vector<Outcome>> bob;
};

/// Continuous contextual product model with detection delays. The source
/// emits one polarization angle shared by both wings; each wing draws
/// r ~ U[0, 1); at setting angle x the outcome is sign(cos 2(theta - x))
/// (ties to +1) and the delay is max_delay * r * |sin 2(theta - x)|^delay_exponent.
struct CoincidenceModel {
    double delay_exponent = 4.0;
    double max_delay = 1.0;
};

enum class Family { kContextualProduct, kContextualFitted, kShv, kLrhv };

const char *family_name(Family family);

using ExperimentModel = std::variant<ContextualProductModel, ContextualFittedModel, ShvModel, LrhvModel, CoincidenceModel>;

Family family_of(const ExperimentModel &model);

/// True for models whose outcome tables can be summed exactly.
bool is_finite(const ExperimentModel &model);

/// Throws ValidationError describing the first broken invariant.
void validate(const ExperimentModel &model);

/// Exact P(a, b | x, y) for ContextualProduct and ContextualFitted models.
/// Throws CapabilityError for continuous models and for other families.
JointOutcomeDist contextual_joint(const ExperimentModel &model, const SettingPair &pair);

/// Exact P(a, b | x, y) for SHV models.
JointOutcomeDist shv_joint(const ShvModel &model, const SettingPair &pair);

/// Exact joint table for any finite family.
JointOutcomeDist exact_joint(const ExperimentModel &model, const SettingPair &pair);

/// Alice's marginal P(a | x) measured while Bob used `y`, ordered (-1, 0, +1).
std::array<double, 3> alice_marginal(const ExperimentModel &model, const Setting &x, const Setting &y);

/// E(x, y) = sum a*b*P(a, b | x, y) from the exact table.
double expectation(const ExperimentModel &model, const SettingPair &pair);

/// E = sum A_x(l1) B_y(l2) P(l1, l2).
double lrhv_expectation(const LrhvModel &model, const SettingPair &pair);

/// Instrument-averaged responses: mean_a[l1] = sum_lx A_x(l1, lx) Px(lx),
/// likewise mean_b[l2].
struct AveragedResponseTable {
    std::vector<double> mean_a;
    std::vector<double> mean_b;
};

AveragedResponseTable averaged_responses(const ContextualProductModel &model, const SettingPair &pair);

/// Expectation computed by first averaging out the instrument parameters and
/// then summing over the source. Requires the product form.
double bell1970_expectation(const ExperimentModel &model, const SettingPair &pair);

/// Builds a ContextualFitted model whose table at each pair is the target.
ContextualFittedModel fit_contextual(const std::map<PairKey, JointOutcomeDist> &targets);

CoincidenceModel coincidence_instance(double delay_exponent, double max_delay);

struct Trial {
    Outcome a = Outcome::kNone;
    Outcome b = Outcome::kNone;
    double delay_a = 0;
    double delay_b = 0;
};

/// Draws one emitted pair and the instrument parameters from `rng` and
/// applies the responses. No window suppression is applied here.
Trial sample_trial(const ExperimentModel &model, const SettingPair &pair, CounterRng &rng);

}  // namespace bellsim

#endif
