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

#ifndef BELLSIM_QUANTUM_ORACLE_H
#define BELLSIM_QUANTUM_ORACLE_H

#include "bellsim/outcome.h"

namespace bellsim {

// Reference two-photon singlet predictions. Used only to generate target
// tables and reference values; nothing in the models depends on it.

/// E(x, y) = -cos 2(x - y).
double singlet_correlation(double x_angle, double y_angle);

/// P(a, b | x, y) = (1 + a b E(x, y)) / 4 on a, b = +-1; zero on no-click cells.
JointOutcomeDist singlet_joint(double x_angle, double y_angle);

}  // namespace bellsim

#endif
