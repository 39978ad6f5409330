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

#ifndef BELLSIM_BAYES_H
#define BELLSIM_BAYES_H

// Exact conditional-probability engine on finite spaces, and the setting /
// hidden-variable joint tables used to separate measurement independence
// from freedom of choice. Everything here is rational arithmetic; no
// tolerances except where a double-valued model is converted.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bellsim/models.h"

namespace bellsim {

using Rational = boost::multiprecision::cpp_rational;

/// The exact binary value of a finite double.
Rational exact_rational(double v);

/// "p/q", or "p" for integers.
std::string rational_string(const Rational &r);

class FiniteProbabilitySpace;

/// A subset of the atoms of one particular space.
class Event {
   public:
    bool contains(std::size_t atom) const {
        return members_[atom];
    }
    std::size_t size() const;
    bool subset_of(const Event &other) const;
    bool disjoint_from(const Event &other) const;
    Event operator&(const Event &other) const;
    Event operator|(const Event &other) const;
    Event complement() const;
    std::uint64_t space_id() const {
        return space_id_;
    }

   private:
    friend class FiniteProbabilitySpace;
    Event(std::uint64_t space_id, std::vector<bool> members) : space_id_(space_id), members_(std::move(members)) {
    }
    void check_same_space(const Event &other) const;

    std::uint64_t space_id_;
    std::vector<bool> members_;
};

/// Labeled atoms with exact weights summing to exactly 1.
class FiniteProbabilitySpace {
   public:
    /// Throws ValidationError for negative weights, duplicate labels, a size
    /// mismatch, or a total other than 1.
    FiniteProbabilitySpace(std::vector<std::string> atoms, std::vector<Rational> weights);

    std::size_t size() const {
        return atoms_.size();
    }
    const std::vector<std::string> &atoms() const {
        return atoms_;
    }
    const std::vector<Rational> &weights() const {
        return weights_;
    }
    std::uint64_t id() const {
        return id_;
    }

    /// Throws LookupError for unknown labels.
    Event event(const std::vector<std::string> &labels) const;
    Event all() const;
    Event empty() const;

    /// Throws ValidationError when `e` belongs to another space.
    Rational prob(const Event &e) const;

   private:
    std::vector<std::string> atoms_;
    std::vector<Rational> weights_;
    std::uint64_t id_;
};

/// P(A | E) = P(A n E) / P(E). Throws UndefinedConditionalError if P(E) = 0.
Rational cond_prob(const FiniteProbabilitySpace &space, const Event &a, const Event &e);

/// sum_i P(A | E_i) P(E_i). The partition must be pairwise disjoint, each
/// part with positive probability, and cover the support of A; otherwise
/// ValidationError.
Rational total_prob(const FiniteProbabilitySpace &space, const Event &a, const std::vector<Event> &partition);

/// Colored balls drawn with replacement: atoms (r,b), (r,s), (w,b), (w,s)
/// with weights 1/8, 1/4, 3/8, 1/4.
FiniteProbabilitySpace balls_space();

/// Drug-trial layout: atoms (C,Y), (C,N), (P,Y), (P,N) for candesartan or
/// placebo and blood pressure lowered or not. The weights are illustrative
/// placeholders, not measured data: 7/20, 3/20, 3/20, 7/20.
FiniteProbabilitySpace drug_trial_space();

/// Product-form contextual model with exact weights and labeled instrument
/// atoms. Response functions play no role in these computations.
struct RationalProductModel {
    struct Instrument {
        std::vector<std::string> atoms;
        std::vector<Rational> weights;
    };
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::vector<Rational> source;  // row-major P(l1, l2)
    std::map<std::string, Instrument> alice;
    std::map<std::string, Instrument> bob;

    void validate() const;
};

/// Exact conversion of each weight, then each distribution is divided by its
/// exact total (double rounding leaves sums a few ulps from 1). Instrument
/// atoms are labeled "<setting>#<index>".
RationalProductModel to_rational(const ContextualProductModel &model);

/// Two settings per side with disjoint instrument atoms.
RationalProductModel demo_rational_product_model();

/// P(x, y) per pair; must be positive and sum to exactly 1.
using RationalSchedule = std::map<PairKey, Rational>;

RationalSchedule to_rational_schedule(const std::vector<SettingPair> &pairs);

struct IndependenceReport {
    bool independent = true;
    Rational max_deviation;
    double max_deviation_value = 0;
    std::size_t lambda_atoms = 0;
};

/// Builds P(x, y, lambda) = P(lambda | x, y) P(x, y) over the union lambda
/// space (instrument atoms tagged by setting, fitted lambdas tagged by pair)
/// and reports max |P(lambda | x, y) - P(lambda)|. Rational inputs are
/// compared exactly.
IndependenceReport measurement_independence_check(const RationalProductModel &model,
                                                  const RationalSchedule &schedule);

/// Double-valued models are converted exactly; independence is declared when
/// the deviation is at most 1e-12. Throws CapabilityError for continuous
/// models.
IndependenceReport measurement_independence_check(const ExperimentModel &model,
                                                  const std::vector<SettingPair> &schedule);

struct FreedomReport {
    /// P(lambda | x, y) recovered from the joint table equals
    /// P(l1, l2) Px(lx) Py(ly) for every pair and lambda.
    bool factorization_holds = false;
    /// P(x, y | lambda) = 1 for every lambda of positive probability carrying
    /// instrument atoms of (x, y).
    bool identification_holds = false;
    /// Some P(x, y | lambda) differs from the prior P(x, y).
    bool posterior_differs_from_prior = false;
    std::size_t checked = 0;
    /// Zero-probability lambdas, for which P(x, y | lambda) is undefined.
    std::size_t skipped = 0;
    Rational min_posterior;
    Rational max_posterior;
    std::string conclusion;
};

/// Throws ValidationError when two settings on one side share an instrument
/// atom label (the settings could not be identified from lambda).
FreedomReport freedom_check(const RationalProductModel &model, const RationalSchedule &schedule);
FreedomReport freedom_check(const ExperimentModel &model, const std::vector<SettingPair> &schedule);

}  // namespace bellsim

#endif
