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

#include "bellsim/special.h"

#include <cmath>
#include <limits>

#include "bellsim/errors.h"

namespace bellsim {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 10000;

// Series for P(a, x), converges quickly for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < kMaxIter; n++) {
        ap += 1;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * kEps) {
            break;
        }
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz continued fraction for Q(a, x), x >= a + 1.
double gamma_q_fraction(double a, double x) {
    constexpr double tiny = std::numeric_limits<double>::min() / kEps;
    double b = x + 1 - a;
    double c = 1 / tiny;
    double d = 1 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; i++) {
        double an = -i * (i - a);
        b += 2;
        d = an * d + b;
        if (std::abs(d) < tiny) {
            d = tiny;
        }
        c = b + an / c;
        if (std::abs(c) < tiny) {
            c = tiny;
        }
        d = 1 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1) < kEps) {
            break;
        }
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

void check_args(double a, double x) {
    if (!(a > 0) || !(x >= 0)) {
        throw ValidationError("incomplete gamma requires a > 0 and x >= 0");
    }
}

}  // namespace

double regularized_gamma_p(double a, double x) {
    check_args(a, x);
    if (x == 0) {
        return 0;
    }
    if (x < a + 1) {
        return gamma_p_series(a, x);
    }
    return 1 - gamma_q_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
    check_args(a, x);
    if (x == 0) {
        return 1;
    }
    if (x < a + 1) {
        return 1 - gamma_p_series(a, x);
    }
    return gamma_q_fraction(a, x);
}

double chi_square_sf(double statistic, double dof) {
    if (dof <= 0) {
        return 1;
    }
    if (statistic <= 0) {
        return 1;
    }
    if (std::isinf(statistic)) {
        return 0;
    }
    return regularized_gamma_q(dof / 2, statistic / 2);
}

double normal_two_sided_p(double z) {
    return std::erfc(std::abs(z) / std::sqrt(2.0));
}

}  // namespace bellsim
