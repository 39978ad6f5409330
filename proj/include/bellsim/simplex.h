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

#ifndef BELLSIM_SIMPLEX_H
#define BELLSIM_SIMPLEX_H

#include <cstddef>
#include <vector>

namespace bellsim {

/// Dense row-major matrix for small LPs.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {
    }
    double &operator()(std::size_t r, std::size_t c) {
        return data[r * cols + c];
    }
    double operator()(std::size_t r, std::size_t c) const {
        return data[r * cols + c];
    }
};

struct PhaseOneResult {
    bool feasible = false;
    /// Optimal sum of artificial variables; 0 for a feasible system.
    double infeasibility = 0;
    std::vector<double> x;
    std::size_t iterations = 0;
};

/// Phase-1 simplex for { x >= 0 : A x = b }. Minimizes the sum of one
/// artificial variable per row. Entering columns follow Dantzig's rule and
/// switch to Bland's rule if the iteration count suggests cycling; ratio-test
/// ties go to the largest pivot magnitude.
PhaseOneResult phase_one(const DenseMatrix &a, const std::vector<double> &b, double tolerance = 1e-9);

}  // namespace bellsim

#endif
