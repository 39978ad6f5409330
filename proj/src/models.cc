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

#include <cmath>
#include <numbers>
#include <type_traits>

#include "bellsim/errors.h"

namespace bellsim {

namespace {

template <typename... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <typename... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

template <typename Map>
const typename Map::mapped_type &find_setting(const Map &map, const std::string &label, Side side) {
    auto it = map.find(label);
    if (it == map.end()) {
        throw LookupError(std::string("model has no setting '") + label + "' on side " + side_name(side));
    }
    return it->second;
}

void check_weights(std::span<const double> weights, const std::string &what) {
    if (weights.empty()) {
        throw ValidationError(what + ": empty distribution");
    }
    double total = 0;
    for (double w : weights) {
        if (!(w >= 0) || !std::isfinite(w)) {
            throw ValidationError(what + ": negative or non-finite weight");
        }
        total += w;
    }
    if (std::abs(total - 1) > kModelTolerance) {
        throw ValidationError(what + ": weights sum to " + std::to_string(total) + ", not 1");
    }
}

void validate_contextual_side(const std::map<std::string, ContextualResponse> &side, std::size_t n_local,
                              const std::string &name) {
    for (const auto &[label, resp] : side) {
        std::string what = name + " setting '" + label + "'";
        resp.instrument.validate(what + " instrument");
        if (resp.outcomes.size() != n_local * resp.instrument.size()) {
            throw ValidationError(what + ": response table has wrong size");
        }
        for (Outcome o : resp.outcomes) {
            outcome_from_int(value_of(o));
        }
        if (!resp.delays.empty()) {
            if (resp.delays.size() != resp.outcomes.size()) {
                throw ValidationError(what + ": delay table has wrong size");
            }
            for (double d : resp.delays) {
                if (!(d >= 0) || !std::isfinite(d)) {
                    throw ValidationError(what + ": delays must be nonnegative");
                }
            }
        }
    }
}

void validate_shv_side(const std::map<std::string, ShvResponse> &side, std::size_t n_local, const std::string &name) {
    for (const auto &[label, resp] : side) {
        std::string what = name + " setting '" + label + "'";
        if (resp.probs.size() != n_local) {
            throw ValidationError(what + ": response table has wrong size");
        }
        for (const auto &row : resp.probs) {
            check_weights(row, what + " response row");
        }
    }
}

void validate_lrhv_side(const std::map<std::string, std::vector<Outcome>> &side, std::size_t n_local,
                        const std::string &name) {
    for (const auto &[label, values] : side) {
        if (values.size() != n_local) {
            throw ValidationError(name + " setting '" + label + "': response table has wrong size");
        }
        for (Outcome o : values) {
            outcome_from_int(value_of(o));
        }
    }
}

// Per-local-parameter outcome distribution of one contextual setting:
// dist[l][k] = P(outcome index k | l) after summing over the instrument.
std::vector<std::array<double, 3>> instrument_summed(const ContextualResponse &resp, std::size_t n_local) {
    std::vector<std::array<double, 3>> dist(n_local, std::array<double, 3>{});
    std::size_t m = resp.instrument.size();
    for (std::size_t l = 0; l < n_local; l++) {
        for (std::size_t k = 0; k < m; k++) {
            dist[l][index_of(resp.outcome(l, k))] += resp.instrument.weights[k];
        }
    }
    return dist;
}

JointOutcomeDist source_sum(const FiniteSource &source, const std::vector<std::array<double, 3>> &da,
                            const std::vector<std::array<double, 3>> &db) {
    JointOutcomeDist out;
    for (std::size_t i = 0; i < source.n1; i++) {
        for (std::size_t j = 0; j < source.n2; j++) {
            double w = source.weight(i, j);
            if (w == 0) {
                continue;
            }
            for (std::size_t a = 0; a < 3; a++) {
                for (std::size_t b = 0; b < 3; b++) {
                    out.p[3 * a + b] += w * da[i][a] * db[j][b];
                }
            }
        }
    }
    return out;
}

JointOutcomeDist product_joint(const ContextualProductModel &model, const SettingPair &pair) {
    const auto &ra = find_setting(model.alice, pair.x.label, Side::kA);
    const auto &rb = find_setting(model.bob, pair.y.label, Side::kB);
    return source_sum(model.source, instrument_summed(ra, model.source.n1), instrument_summed(rb, model.source.n2));
}

JointOutcomeDist fitted_joint(const ContextualFittedModel &model, const SettingPair &pair) {
    auto it = model.targets.find(key_of(pair));
    if (it == model.targets.end()) {
        throw LookupError("fitted model has no lambda distribution for pair (" + pair.x.label + ", " + pair.y.label +
                          ")");
    }
    return it->second;
}

JointOutcomeDist lrhv_joint(const LrhvModel &model, const SettingPair &pair) {
    const auto &va = find_setting(model.alice, pair.x.label, Side::kA);
    const auto &vb = find_setting(model.bob, pair.y.label, Side::kB);
    JointOutcomeDist out;
    for (std::size_t i = 0; i < model.source.n1; i++) {
        for (std::size_t j = 0; j < model.source.n2; j++) {
            out.at(va[i], vb[j]) += model.source.weight(i, j);
        }
    }
    return out;
}

std::pair<std::size_t, std::size_t> sample_source(const FiniteSource &source, CounterRng &rng) {
    std::size_t k = rng.discrete(source.weights);
    return {k / source.n2, k % source.n2};
}

Outcome draw_outcome(const std::array<double, 3> &probs, CounterRng &rng) {
    return kAllOutcomes[rng.discrete(probs)];
}

Outcome sign_outcome(double c) {
    return c >= 0 ? Outcome::kPlus : Outcome::kMinus;
}

}  // namespace

void FiniteDist::validate(const std::string &what) const {
    check_weights(weights, what);
}

void FiniteSource::validate() const {
    if (n1 == 0 || n2 == 0 || weights.size() != n1 * n2) {
        throw ValidationError("source: weight grid does not match its dimensions");
    }
    check_weights(weights, "source");
}

const char *family_name(Family family) {
    switch (family) {
        case Family::kContextualProduct:
            return "ContextualProduct";
        case Family::kContextualFitted:
            return "ContextualFitted";
        case Family::kShv:
            return "SHV";
        case Family::kLrhv:
            return "LRHV";
    }
    return "?";
}

Family family_of(const ExperimentModel &model) {
    return std::visit(Overloaded{
                          [](const ContextualProductModel &) { return Family::kContextualProduct; },
                          [](const ContextualFittedModel &) { return Family::kContextualFitted; },
                          [](const ShvModel &) { return Family::kShv; },
                          [](const LrhvModel &) { return Family::kLrhv; },
                          [](const CoincidenceModel &) { return Family::kContextualProduct; },
                      },
                      model);
}

bool is_finite(const ExperimentModel &model) {
    return !std::holds_alternative<CoincidenceModel>(model);
}

void validate(const ExperimentModel &model) {
    std::visit(Overloaded{
                   [](const ContextualProductModel &m) {
                       m.source.validate();
                       validate_contextual_side(m.alice, m.source.n1, "A");
                       validate_contextual_side(m.bob, m.source.n2, "B");
                   },
                   [](const ContextualFittedModel &m) {
                       for (const auto &[key, table] : m.targets) {
                           try {
                               table.validate(kModelTolerance);
                           } catch (const ValidationError &e) {
                               throw ValidationError("target (" + key.first + ", " + key.second + "): " + e.what());
                           }
                       }
                   },
                   [](const ShvModel &m) {
                       m.source.validate();
                       validate_shv_side(m.alice, m.source.n1, "A");
                       validate_shv_side(m.bob, m.source.n2, "B");
                   },
                   [](const LrhvModel &m) {
                       m.source.validate();
                       validate_lrhv_side(m.alice, m.source.n1, "A");
                       validate_lrhv_side(m.bob, m.source.n2, "B");
                   },
                   [](const CoincidenceModel &m) {
                       if (!(m.delay_exponent >= 0) || !(m.max_delay > 0) || !std::isfinite(m.max_delay)) {
                           throw ValidationError("coincidence model requires delay_exponent >= 0 and max_delay > 0");
                       }
                   },
               },
               model);
}

JointOutcomeDist contextual_joint(const ExperimentModel &model, const SettingPair &pair) {
    if (std::holds_alternative<CoincidenceModel>(model)) {
        throw CapabilityError("exact summation unavailable for continuous models, use sampling");
    }
    validate(model);
    if (const auto *m = std::get_if<ContextualProductModel>(&model)) {
        return product_joint(*m, pair);
    }
    if (const auto *m = std::get_if<ContextualFittedModel>(&model)) {
        return fitted_joint(*m, pair);
    }
    throw CapabilityError(std::string("contextual_joint expects a contextual model, got ") +
                          family_name(family_of(model)));
}

JointOutcomeDist shv_joint(const ShvModel &model, const SettingPair &pair) {
    model.source.validate();
    validate_shv_side(model.alice, model.source.n1, "A");
    validate_shv_side(model.bob, model.source.n2, "B");
    const auto &ra = find_setting(model.alice, pair.x.label, Side::kA);
    const auto &rb = find_setting(model.bob, pair.y.label, Side::kB);
    return source_sum(model.source, ra.probs, rb.probs);
}

JointOutcomeDist exact_joint(const ExperimentModel &model, const SettingPair &pair) {
    if (const auto *m = std::get_if<ShvModel>(&model)) {
        return shv_joint(*m, pair);
    }
    if (const auto *m = std::get_if<LrhvModel>(&model)) {
        validate(model);
        return lrhv_joint(*m, pair);
    }
    return contextual_joint(model, pair);
}

std::array<double, 3> alice_marginal(const ExperimentModel &model, const Setting &x, const Setting &y) {
    return exact_joint(model, SettingPair{x, y, 1.0}).alice();
}

double expectation(const ExperimentModel &model, const SettingPair &pair) {
    return exact_joint(model, pair).correlation();
}

double lrhv_expectation(const LrhvModel &model, const SettingPair &pair) {
    validate(ExperimentModel{model});
    const auto &va = find_setting(model.alice, pair.x.label, Side::kA);
    const auto &vb = find_setting(model.bob, pair.y.label, Side::kB);
    double e = 0;
    for (std::size_t i = 0; i < model.source.n1; i++) {
        for (std::size_t j = 0; j < model.source.n2; j++) {
            e += value_of(va[i]) * value_of(vb[j]) * model.source.weight(i, j);
        }
    }
    return e;
}

AveragedResponseTable averaged_responses(const ContextualProductModel &model, const SettingPair &pair) {
    const auto &ra = find_setting(model.alice, pair.x.label, Side::kA);
    const auto &rb = find_setting(model.bob, pair.y.label, Side::kB);
    auto average = [](const ContextualResponse &resp, std::size_t n_local) {
        std::vector<double> mean(n_local, 0.0);
        for (std::size_t l = 0; l < n_local; l++) {
            for (std::size_t k = 0; k < resp.instrument.size(); k++) {
                mean[l] += value_of(resp.outcome(l, k)) * resp.instrument.weights[k];
            }
        }
        return mean;
    };
    return AveragedResponseTable{average(ra, model.source.n1), average(rb, model.source.n2)};
}

double bell1970_expectation(const ExperimentModel &model, const SettingPair &pair) {
    const auto *m = std::get_if<ContextualProductModel>(&model);
    if (m == nullptr) {
        throw CapabilityError("instrument averaging requires the finite product form");
    }
    validate(model);
    AveragedResponseTable avg = averaged_responses(*m, pair);
    double e = 0;
    for (std::size_t i = 0; i < m->source.n1; i++) {
        for (std::size_t j = 0; j < m->source.n2; j++) {
            e += avg.mean_a[i] * avg.mean_b[j] * m->source.weight(i, j);
        }
    }
    return e;
}

ContextualFittedModel fit_contextual(const std::map<PairKey, JointOutcomeDist> &targets) {
    ContextualFittedModel model{targets};
    validate(ExperimentModel{model});
    return model;
}

CoincidenceModel coincidence_instance(double delay_exponent, double max_delay) {
    CoincidenceModel model{delay_exponent, max_delay};
    validate(ExperimentModel{model});
    return model;
}

Trial sample_trial(const ExperimentModel &model, const SettingPair &pair, CounterRng &rng) {
    return std::visit(
        Overloaded{
            [&](const ContextualProductModel &m) {
                const auto &ra = find_setting(m.alice, pair.x.label, Side::kA);
                const auto &rb = find_setting(m.bob, pair.y.label, Side::kB);
                auto [i, j] = sample_source(m.source, rng);
                std::size_t ka = rng.discrete(ra.instrument.weights);
                std::size_t kb = rng.discrete(rb.instrument.weights);
                return Trial{ra.outcome(i, ka), rb.outcome(j, kb), ra.delay(i, ka), rb.delay(j, kb)};
            },
            [&](const ContextualFittedModel &m) {
                const auto &table = fitted_joint(m, pair);
                std::size_t k = rng.discrete(table.p);
                return Trial{kAllOutcomes[k / 3], kAllOutcomes[k % 3], 0.0, 0.0};
            },
            [&](const ShvModel &m) {
                const auto &ra = find_setting(m.alice, pair.x.label, Side::kA);
                const auto &rb = find_setting(m.bob, pair.y.label, Side::kB);
                auto [i, j] = sample_source(m.source, rng);
                Outcome a = draw_outcome(ra.probs[i], rng);
                Outcome b = draw_outcome(rb.probs[j], rng);
                return Trial{a, b, 0.0, 0.0};
            },
            [&](const LrhvModel &m) {
                const auto &va = find_setting(m.alice, pair.x.label, Side::kA);
                const auto &vb = find_setting(m.bob, pair.y.label, Side::kB);
                auto [i, j] = sample_source(m.source, rng);
                return Trial{va[i], vb[j], 0.0, 0.0};
            },
            [&](const CoincidenceModel &m) {
                double theta = 2 * std::numbers::pi * rng.uniform();
                double ra = rng.uniform();
                double rb = rng.uniform();
                double phase_a = 2 * (theta - pair.x.angle);
                double phase_b = 2 * (theta - pair.y.angle);
                double da = m.max_delay * ra * std::pow(std::abs(std::sin(phase_a)), m.delay_exponent);
                double db = m.max_delay * rb * std::pow(std::abs(std::sin(phase_b)), m.delay_exponent);
                return Trial{sign_outcome(std::cos(phase_a)), sign_outcome(std::cos(phase_b)), da, db};
            },
        },
        model);
}

}  // namespace bellsim
