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

#include "bellsim/outcome.h"

#include <cmath>
#include <numbers>

#include "bellsim/errors.h"

namespace bellsim {

Outcome outcome_from_int(int v) {
    if (v < -1 || v > 1) {
        throw ValidationError("outcome must be -1, 0 or +1, got " + std::to_string(v));
    }
    return static_cast<Outcome>(v);
}

const char *side_name(Side side) {
    return side == Side::kA ? "A" : "B";
}

double normalize_angle(double angle) {
    constexpr double two_pi = 2 * std::numbers::pi;
    double r = std::fmod(angle, two_pi);
    if (r < 0) {
        r += two_pi;
    }
    if (r >= two_pi) {
        r = 0;
    }
    return r;
}

Setting Setting::make(Side side, double angle, std::string label) {
    return Setting{side, normalize_angle(angle), std::move(label)};
}

double JointOutcomeDist::total() const {
    double t = 0;
    for (double v : p) {
        t += v;
    }
    return t;
}

std::array<double, 3> JointOutcomeDist::alice() const {
    std::array<double, 3> m{};
    for (size_t i = 0; i < 3; i++) {
        for (size_t j = 0; j < 3; j++) {
            m[i] += p[3 * i + j];
        }
    }
    return m;
}

std::array<double, 3> JointOutcomeDist::bob() const {
    std::array<double, 3> m{};
    for (size_t i = 0; i < 3; i++) {
        for (size_t j = 0; j < 3; j++) {
            m[j] += p[3 * i + j];
        }
    }
    return m;
}

double JointOutcomeDist::correlation() const {
    return at(Outcome::kPlus, Outcome::kPlus) + at(Outcome::kMinus, Outcome::kMinus) -
           at(Outcome::kPlus, Outcome::kMinus) - at(Outcome::kMinus, Outcome::kPlus);
}

void JointOutcomeDist::validate(double tolerance) const {
    for (double v : p) {
        if (!(v >= -tolerance && v <= 1 + tolerance)) {
            throw ValidationError("joint outcome probability outside [0, 1]");
        }
    }
    if (std::abs(total() - 1) > tolerance) {
        throw ValidationError("joint outcome table does not sum to 1");
    }
}

}  // namespace bellsim
