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

#ifndef BELLSIM_OUTCOME_H
#define BELLSIM_OUTCOME_H

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>

namespace bellsim {

/// A single detector reading. kNone is the absence of a click.
enum class Outcome : std::int8_t { kMinus = -1, kNone = 0, kPlus = 1 };

inline constexpr std::array<Outcome, 3> kAllOutcomes{Outcome::kMinus, Outcome::kNone, Outcome::kPlus};

constexpr int value_of(Outcome o) {
    return static_cast<int>(o);
}

/// Position of `o` in 3-element tables ordered (-1, 0, +1).
constexpr std::size_t index_of(Outcome o) {
    return static_cast<std::size_t>(value_of(o) + 1);
}

/// Throws ValidationError unless `v` is -1, 0 or +1.
Outcome outcome_from_int(int v);

enum class Side { kA, kB };

const char *side_name(Side side);

/// An analyzer setting on one wing. The angle is kept in [0, 2pi).
struct Setting {
    Side side = Side::kA;
    double angle = 0.0;
    std::string label;

    static Setting make(Side side, double angle, std::string label);
};

/// Normalizes an angle into [0, 2pi).
double normalize_angle(double angle);

/// Setting pair as it appears in a schedule; `weight` is P(x, y).
struct SettingPair {
    Setting x;
    Setting y;
    double weight = 1.0;
};

/// (Alice label, Bob label).
using PairKey = std::pair<std::string, std::string>;

inline PairKey key_of(const SettingPair &pair) {
    return {pair.x.label, pair.y.label};
}

/// P(a, b | x, y) as a 3x3 table over Outcome x Outcome.
struct JointOutcomeDist {
    std::array<double, 9> p{};

    double &at(Outcome a, Outcome b) {
        return p[3 * index_of(a) + index_of(b)];
    }
    double at(Outcome a, Outcome b) const {
        return p[3 * index_of(a) + index_of(b)];
    }

    double total() const;
    /// Marginal over Alice's outcome, ordered (-1, 0, +1).
    std::array<double, 3> alice() const;
    std::array<double, 3> bob() const;
    /// Sum of a*b*P(a, b). Zero outcomes contribute nothing.
    double correlation() const;
    /// Throws ValidationError when an entry leaves [0, 1] or the total is off
    /// by more than `tolerance`.
    void validate(double tolerance = 1e-10) const;
};

}  // namespace bellsim

#endif
