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

#include "bellsim/bayes.h"

#include <atomic>
#include <cmath>
#include <set>
#include <tuple>

#include "bellsim/errors.h"

namespace bellsim {

namespace {

std::atomic<std::uint64_t> next_space_id{1};

using Lambda = std::tuple<std::size_t, std::size_t, std::string, std::string>;

Rational abs_rational(const Rational &r) {
    return r < 0 ? Rational(-r) : r;
}

void check_distribution(const std::vector<Rational> &weights, const std::string &what) {
    if (weights.empty()) {
        throw ValidationError(what + ": empty distribution");
    }
    Rational total = 0;
    for (const auto &w : weights) {
        if (w < 0) {
            throw ValidationError(what + ": negative weight");
        }
        total += w;
    }
    if (total != 1) {
        throw ValidationError(what + ": weights sum to " + rational_string(total) + ", not 1");
    }
}

/// Divides by the exact total so converted double weights sum to exactly 1.
void normalize(std::vector<Rational> &weights) {
    Rational total = 0;
    for (const auto &w : weights) {
        total += w;
    }
    if (total > 0) {
        for (auto &w : weights) {
            w /= total;
        }
    }
}

const RationalProductModel::Instrument &instrument_for(const std::map<std::string, RationalProductModel::Instrument> &m,
                                                       const std::string &label, Side side) {
    auto it = m.find(label);
    if (it == m.end()) {
        throw LookupError(std::string("model has no setting '") + label + "' on side " + side_name(side));
    }
    return it->second;
}

void check_schedule(const RationalSchedule &schedule, bool exact) {
    if (schedule.empty()) {
        throw ValidationError("schedule has no setting pairs");
    }
    Rational total = 0;
    for (const auto &[key, w] : schedule) {
        if (w <= 0) {
            throw ValidationError("schedule weight for (" + key.first + ", " + key.second + ") must be positive");
        }
        total += w;
    }
    if (exact ? total != 1 : std::abs(static_cast<double>(total) - 1) > 1e-12) {
        throw ValidationError("schedule weights must sum to 1");
    }
}

// P(lambda | x, y) over the union space for a product model. Atom keys are
// "<setting>\x1f<atom>" when `tag_with_setting`, the bare atom label otherwise.
std::map<PairKey, std::map<Lambda, Rational>> product_conditionals(const RationalProductModel &model,
                                                                   const RationalSchedule &schedule,
                                                                   bool tag_with_setting) {
    std::map<PairKey, std::map<Lambda, Rational>> cond;
    for (const auto &[key, w] : schedule) {
        const auto &ia = instrument_for(model.alice, key.first, Side::kA);
        const auto &ib = instrument_for(model.bob, key.second, Side::kB);
        auto &table = cond[key];
        for (std::size_t i = 0; i < model.n1; i++) {
            for (std::size_t j = 0; j < model.n2; j++) {
                const Rational &src = model.source[i * model.n2 + j];
                for (std::size_t ka = 0; ka < ia.atoms.size(); ka++) {
                    for (std::size_t kb = 0; kb < ib.atoms.size(); kb++) {
                        std::string la = tag_with_setting ? key.first + '\x1f' + ia.atoms[ka] : ia.atoms[ka];
                        std::string lb = tag_with_setting ? key.second + '\x1f' + ib.atoms[kb] : ib.atoms[kb];
                        table[{i, j, la, lb}] += src * ia.weights[ka] * ib.weights[kb];
                    }
                }
            }
        }
    }
    return cond;
}

IndependenceReport independence_from_conditionals(const std::map<PairKey, std::map<Lambda, Rational>> &cond,
                                                  const RationalSchedule &schedule, bool exact) {
    std::map<Lambda, Rational> marginal;
    for (const auto &[key, table] : cond) {
        const Rational &pxy = schedule.at(key);
        for (const auto &[lambda, p] : table) {
            marginal[lambda] += pxy * p;
        }
    }
    IndependenceReport report;
    report.lambda_atoms = marginal.size();
    report.max_deviation = 0;
    for (const auto &[key, table] : cond) {
        for (const auto &[lambda, p_lambda] : marginal) {
            auto it = table.find(lambda);
            Rational conditional = it == table.end() ? Rational(0) : it->second;
            Rational dev = abs_rational(conditional - p_lambda);
            if (dev > report.max_deviation) {
                report.max_deviation = dev;
            }
        }
    }
    report.max_deviation_value = static_cast<double>(report.max_deviation);
    report.independent = exact ? report.max_deviation == 0 : report.max_deviation_value <= 1e-12;
    return report;
}

IndependenceReport product_independence(const RationalProductModel &model, const RationalSchedule &schedule,
                                        bool exact) {
    model.validate();
    check_schedule(schedule, exact);
    return independence_from_conditionals(product_conditionals(model, schedule, true), schedule, exact);
}

}  // namespace

Rational exact_rational(double v) {
    if (!std::isfinite(v)) {
        throw ValidationError("cannot convert a non-finite value to a rational");
    }
    if (v == 0) {
        return Rational(0);
    }
    int exp = 0;
    double mant = std::frexp(v, &exp);
    auto scaled = static_cast<long long>(std::ldexp(mant, 53));
    exp -= 53;
    boost::multiprecision::cpp_int num(scaled);
    boost::multiprecision::cpp_int den(1);
    if (exp >= 0) {
        num <<= exp;
    } else {
        den <<= -exp;
    }
    return Rational(num, den);
}

std::string rational_string(const Rational &r) {
    auto num = boost::multiprecision::numerator(r);
    auto den = boost::multiprecision::denominator(r);
    if (den == 1) {
        return num.str();
    }
    return num.str() + "/" + den.str();
}

std::size_t Event::size() const {
    std::size_t n = 0;
    for (bool b : members_) {
        n += b ? 1 : 0;
    }
    return n;
}

void Event::check_same_space(const Event &other) const {
    if (space_id_ != other.space_id_) {
        throw ValidationError("events belong to different probability spaces");
    }
}

bool Event::subset_of(const Event &other) const {
    check_same_space(other);
    for (std::size_t k = 0; k < members_.size(); k++) {
        if (members_[k] && !other.members_[k]) {
            return false;
        }
    }
    return true;
}

bool Event::disjoint_from(const Event &other) const {
    check_same_space(other);
    for (std::size_t k = 0; k < members_.size(); k++) {
        if (members_[k] && other.members_[k]) {
            return false;
        }
    }
    return true;
}

Event Event::operator&(const Event &other) const {
    check_same_space(other);
    std::vector<bool> m(members_.size());
    for (std::size_t k = 0; k < m.size(); k++) {
        m[k] = members_[k] && other.members_[k];
    }
    return Event(space_id_, std::move(m));
}

Event Event::operator|(const Event &other) const {
    check_same_space(other);
    std::vector<bool> m(members_.size());
    for (std::size_t k = 0; k < m.size(); k++) {
        m[k] = members_[k] || other.members_[k];
    }
    return Event(space_id_, std::move(m));
}

Event Event::complement() const {
    std::vector<bool> m(members_.size());
    for (std::size_t k = 0; k < m.size(); k++) {
        m[k] = !members_[k];
    }
    return Event(space_id_, std::move(m));
}

FiniteProbabilitySpace::FiniteProbabilitySpace(std::vector<std::string> atoms, std::vector<Rational> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)), id_(next_space_id++) {
    if (atoms_.size() != weights_.size()) {
        throw ValidationError("probability space: one weight per atom required");
    }
    std::set<std::string> unique(atoms_.begin(), atoms_.end());
    if (unique.size() != atoms_.size()) {
        throw ValidationError("probability space: duplicate atom labels");
    }
    check_distribution(weights_, "probability space");
}

Event FiniteProbabilitySpace::event(const std::vector<std::string> &labels) const {
    std::vector<bool> m(atoms_.size(), false);
    for (const auto &label : labels) {
        bool found = false;
        for (std::size_t k = 0; k < atoms_.size(); k++) {
            if (atoms_[k] == label) {
                m[k] = true;
                found = true;
            }
        }
        if (!found) {
            throw LookupError("probability space has no atom '" + label + "'");
        }
    }
    return Event(id_, std::move(m));
}

Event FiniteProbabilitySpace::all() const {
    return Event(id_, std::vector<bool>(atoms_.size(), true));
}

Event FiniteProbabilitySpace::empty() const {
    return Event(id_, std::vector<bool>(atoms_.size(), false));
}

Rational FiniteProbabilitySpace::prob(const Event &e) const {
    if (e.space_id() != id_) {
        throw ValidationError("event belongs to a different probability space");
    }
    Rational p = 0;
    for (std::size_t k = 0; k < atoms_.size(); k++) {
        if (e.contains(k)) {
            p += weights_[k];
        }
    }
    return p;
}

Rational cond_prob(const FiniteProbabilitySpace &space, const Event &a, const Event &e) {
    Rational pe = space.prob(e);
    if (pe == 0) {
        throw UndefinedConditionalError("conditioning event has probability zero");
    }
    return space.prob(a & e) / pe;
}

Rational total_prob(const FiniteProbabilitySpace &space, const Event &a, const std::vector<Event> &partition) {
    if (partition.empty()) {
        throw ValidationError("partition is empty");
    }
    Event cover = space.empty();
    for (std::size_t i = 0; i < partition.size(); i++) {
        if (space.prob(partition[i]) == 0) {
            throw ValidationError("partition event has probability zero");
        }
        for (std::size_t j = i + 1; j < partition.size(); j++) {
            if (!partition[i].disjoint_from(partition[j])) {
                throw ValidationError("partition events overlap");
            }
        }
        cover = cover | partition[i];
    }
    if (space.prob(a & cover.complement()) != 0) {
        throw ValidationError("partition does not cover the support of the event");
    }
    Rational total = 0;
    for (const auto &part : partition) {
        total += cond_prob(space, a, part) * space.prob(part);
    }
    return total;
}

FiniteProbabilitySpace balls_space() {
    return FiniteProbabilitySpace({"(r,b)", "(r,s)", "(w,b)", "(w,s)"},
                                  {Rational(1, 8), Rational(1, 4), Rational(3, 8), Rational(1, 4)});
}

FiniteProbabilitySpace drug_trial_space() {
    return FiniteProbabilitySpace({"(C,Y)", "(C,N)", "(P,Y)", "(P,N)"},
                                  {Rational(7, 20), Rational(3, 20), Rational(3, 20), Rational(7, 20)});
}

void RationalProductModel::validate() const {
    if (n1 == 0 || n2 == 0 || source.size() != n1 * n2) {
        throw ValidationError("source: weight grid does not match its dimensions");
    }
    check_distribution(source, "source");
    for (const auto *side : {&alice, &bob}) {
        for (const auto &[label, inst] : *side) {
            if (inst.atoms.size() != inst.weights.size()) {
                throw ValidationError("setting '" + label + "': one weight per instrument atom required");
            }
            check_distribution(inst.weights, "setting '" + label + "' instrument");
        }
    }
}

RationalProductModel to_rational(const ContextualProductModel &model) {
    validate(ExperimentModel{model});
    RationalProductModel out;
    out.n1 = model.source.n1;
    out.n2 = model.source.n2;
    for (double w : model.source.weights) {
        out.source.push_back(exact_rational(w));
    }
    normalize(out.source);
    auto convert = [](const std::map<std::string, ContextualResponse> &side,
                      std::map<std::string, RationalProductModel::Instrument> &dest) {
        for (const auto &[label, resp] : side) {
            RationalProductModel::Instrument inst;
            for (std::size_t k = 0; k < resp.instrument.size(); k++) {
                inst.atoms.push_back(label + "#" + std::to_string(k));
                inst.weights.push_back(exact_rational(resp.instrument.weights[k]));
            }
            normalize(inst.weights);
            dest[label] = std::move(inst);
        }
    };
    convert(model.alice, out.alice);
    convert(model.bob, out.bob);
    return out;
}

RationalProductModel demo_rational_product_model() {
    RationalProductModel m;
    m.n1 = 2;
    m.n2 = 2;
    m.source = {Rational(3, 8), Rational(1, 8), Rational(1, 8), Rational(3, 8)};
    m.alice["a"] = {{"a#0", "a#1"}, {Rational(1, 3), Rational(2, 3)}};
    m.alice["a'"] = {{"a'#0", "a'#1", "a'#2"}, {Rational(1, 2), Rational(1, 4), Rational(1, 4)}};
    m.bob["b"] = {{"b#0", "b#1"}, {Rational(1, 5), Rational(4, 5)}};
    m.bob["b'"] = {{"b'#0", "b'#1"}, {Rational(1, 2), Rational(1, 2)}};
    return m;
}

RationalSchedule to_rational_schedule(const std::vector<SettingPair> &pairs) {
    RationalSchedule s;
    for (const auto &p : pairs) {
        s[key_of(p)] += exact_rational(p.weight);
    }
    return s;
}

IndependenceReport measurement_independence_check(const RationalProductModel &model,
                                                  const RationalSchedule &schedule) {
    return product_independence(model, schedule, true);
}

IndependenceReport measurement_independence_check(const ExperimentModel &model,
                                                  const std::vector<SettingPair> &pairs) {
    if (!is_finite(model)) {
        throw CapabilityError("measurement independence needs a finite model");
    }
    validate(model);
    RationalSchedule schedule = to_rational_schedule(pairs);
    if (const auto *m = std::get_if<ContextualProductModel>(&model)) {
        return product_independence(to_rational(*m), schedule, false);
    }
    check_schedule(schedule, false);
    std::map<PairKey, std::map<Lambda, Rational>> cond;
    if (const auto *m = std::get_if<ContextualFittedModel>(&model)) {
        for (const auto &[key, w] : schedule) {
            auto it = m->targets.find(key);
            if (it == m->targets.end()) {
                throw LookupError("fitted model has no lambda distribution for pair (" + key.first + ", " +
                                  key.second + ")");
            }
            std::string tag = key.first + '\x1f' + key.second;
            for (std::size_t k = 0; k < 9; k++) {
                cond[key][{k / 3, k % 3, tag, tag}] = exact_rational(it->second.p[k]);
            }
        }
    } else {
        const FiniteSource &source = std::holds_alternative<ShvModel>(model) ? std::get<ShvModel>(model).source
                                                                             : std::get<LrhvModel>(model).source;
        for (const auto &[key, w] : schedule) {
            for (std::size_t i = 0; i < source.n1; i++) {
                for (std::size_t j = 0; j < source.n2; j++) {
                    cond[key][{i, j, "", ""}] = exact_rational(source.weight(i, j));
                }
            }
        }
    }
    return independence_from_conditionals(cond, schedule, false);
}

FreedomReport freedom_check(const RationalProductModel &model, const RationalSchedule &schedule) {
    model.validate();
    check_schedule(schedule, true);
    std::map<std::string, std::string> owner_a;
    std::map<std::string, std::string> owner_b;
    for (const auto &[side, owners] : {std::pair{&model.alice, &owner_a}, std::pair{&model.bob, &owner_b}}) {
        for (const auto &[label, inst] : *side) {
            for (const auto &atom : inst.atoms) {
                if (!owners->emplace(atom, label).second) {
                    throw ValidationError("instrument atom '" + atom + "' is shared by settings '" +
                                          owners->at(atom) + "' and '" + label + "'; settings are not identifiable");
                }
            }
        }
    }

    auto cond = product_conditionals(model, schedule, false);
    std::map<Lambda, Rational> marginal;
    std::map<PairKey, Rational> pair_marginal;
    for (const auto &[key, table] : cond) {
        const Rational &pxy = schedule.at(key);
        for (const auto &[lambda, p] : table) {
            marginal[lambda] += pxy * p;
            pair_marginal[key] += pxy * p;
        }
    }

    FreedomReport report;
    report.factorization_holds = true;
    for (const auto &[key, table] : cond) {
        const auto &ia = instrument_for(model.alice, key.first, Side::kA);
        const auto &ib = instrument_for(model.bob, key.second, Side::kB);
        const Rational &pxy = pair_marginal.at(key);
        if (pxy != schedule.at(key)) {
            report.factorization_holds = false;
        }
        for (const auto &[lambda, p] : table) {
            const auto &[i, j, la, lb] = lambda;
            Rational px = 0;
            Rational py = 0;
            for (std::size_t k = 0; k < ia.atoms.size(); k++) {
                if (ia.atoms[k] == la) {
                    px = ia.weights[k];
                }
            }
            for (std::size_t k = 0; k < ib.atoms.size(); k++) {
                if (ib.atoms[k] == lb) {
                    py = ib.weights[k];
                }
            }
            Rational recovered = schedule.at(key) * p / pxy;
            if (recovered != model.source[i * model.n2 + j] * px * py) {
                report.factorization_holds = false;
            }
        }
    }

    report.identification_holds = true;
    bool first = true;
    for (const auto &[lambda, p_lambda] : marginal) {
        if (p_lambda == 0) {
            report.skipped++;
            continue;
        }
        const auto &[i, j, la, lb] = lambda;
        PairKey owner{owner_a.at(la), owner_b.at(lb)};
        Rational joint = schedule.at(owner) * cond.at(owner).at(lambda);
        Rational posterior = joint / p_lambda;
        report.checked++;
        if (posterior != 1) {
            report.identification_holds = false;
        }
        if (posterior != schedule.at(owner)) {
            report.posterior_differs_from_prior = true;
        }
        if (first || posterior < report.min_posterior) {
            report.min_posterior = posterior;
        }
        if (first || posterior > report.max_posterior) {
            report.max_posterior = posterior;
        }
        first = false;
    }
    report.conclusion =
        report.identification_holds
            ? "P(x,y|lambda) = 1 for every lambda carrying instrument parameters of (x,y): the instrument "
              "parameters identify which settings were used. The conditional is an inference from lambda to "
              "settings already chosen and implies no causal constraint on how they were chosen."
            : "P(x,y|lambda) is not identically 1; instrument parameters do not identify the settings.";
    return report;
}

FreedomReport freedom_check(const ExperimentModel &model, const std::vector<SettingPair> &pairs) {
    const auto *m = std::get_if<ContextualProductModel>(&model);
    if (m == nullptr) {
        throw CapabilityError("freedom check needs a finite product-form model");
    }
    RationalSchedule schedule = to_rational_schedule(pairs);
    check_schedule(schedule, false);
    Rational total = 0;
    for (const auto &[key, w] : schedule) {
        total += w;
    }
    for (auto &[key, w] : schedule) {
        w /= total;
    }
    return freedom_check(to_rational(*m), schedule);
}

}  // namespace bellsim
