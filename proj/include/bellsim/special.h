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

#ifndef BELLSIM_SPECIAL_H
#define BELLSIM_SPECIAL_H

namespace bellsim {

/// Regularized lower incomplete gamma P(a, x). a > 0, x >= 0.
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed
/// directly in the tail so small p-values keep their relative accuracy.
double regularized_gamma_q(double a, double x);

/// Survival function of the chi-square distribution: P(X >= statistic).
/// Returns 1 for dof == 0.
double chi_square_sf(double statistic, double dof);

/// Two-sided normal tail probability P(|Z| >= |z|).
double normal_two_sided_p(double z);

}  // namespace bellsim

#endif
