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

#include "bellsim/quantum_oracle.h"

#include <cmath>

namespace bellsim {

double singlet_correlation(double x_angle, double y_angle) {
    return -std::cos(2 * (x_angle - y_angle));
}

JointOutcomeDist singlet_joint(double x_angle, double y_angle) {
    double e = singlet_correlation(x_angle, y_angle);
    JointOutcomeDist t;
    t.at(Outcome::kPlus, Outcome::kPlus) = (1 + e) / 4;
    t.at(Outcome::kMinus, Outcome::kMinus) = (1 + e) / 4;
    t.at(Outcome::kPlus, Outcome::kMinus) = (1 - e) / 4;
    t.at(Outcome::kMinus, Outcome::kPlus) = (1 - e) / 4;
    return t;
}

}  // namespace bellsim
