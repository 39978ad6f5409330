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

#ifndef BELLSIM_INEQUALITIES_H
#define BELLSIM_INEQUALITIES_H

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "bellsim/outcome.h"
#include "bellsim/protocol.h"
#include "bellsim/vendor_json.h"

namespace bellsim {

inline constexpr double kDefaultSigmaLevel = 5.0;

struct InequalityResult {
    std::string name;
    double value = 0;
    double se = 0;
    double bound = 0;
    /// (value - bound) / se; +inf when se == 0 and the bound is exceeded.
    double sigma = 0;
    bool violates = false;
};

nlohmann::json inequality_to_json(const InequalityResult &result);

/// Correlations in the order E(x,y), E(x,y'), E(x',y), E(x',y').
struct ChshInput {
    std::array<double, 4> e{};
    std::array<double, 4> se{};
};

/// S = max over k of |sum_i e_i - 2 e_k|, i.e. the CHSH combination with the
/// minus sign on whichever term maximizes it; se_S = sqrt(sum se_i^2).
/// Violation means S exceeds 2 by at least `sigma_level` standard errors.
InequalityResult chsh(const ChshInput &input, double sigma_level = kDefaultSigmaLevel);

/// Which labels play x, x', y, y'.
struct ChshRoles {
    std::string x;
    std::string x2;
    std::string y;
    std::string y2;
};

/// CH inequality in Eberhard's form on raw counts, normalized per emitted pair
/// (one pair per window):
///
///   J = p(++ | x,y) - p(+,not+ | x,y') - p(not+,+ | x',y) - p(++ | x',y')
///
/// where "not+" is a no-click or a -1. Local models, including those with
/// no-click outcomes, give J <= 0. se_J treats the four pairs as independent
/// multinomial samples. Throws LookupError for a missing pair. All-empty
/// tables give J = 0.
InequalityResult ch_eberhard(const CoincidenceCounts &counts, const ChshRoles &roles,
                             double sigma_level = kDefaultSigmaLevel);

/// Correlation vectors (E(x,y), E(x,y'), E(x',y), E(x',y')) of the 16
/// deterministic +-1 strategies with two settings per side.
std::vector<std::array<double, 4>> deterministic_strategies();

/// Max |S| over all deterministic +-1 strategies with `settings_per_side`
/// settings per side, S taken over every choice of two settings per side.
/// Throws ValidationError for fewer than 2 or more than 16 settings.
double deterministic_bound(int settings_per_side = 2);

/// Pairwise correlations of three +-1 variables.
struct TripleCorrelations {
    double e12 = 0;
    double e13 = 0;
    double e23 = 0;
};

struct BooleResult {
    bool satisfiable = true;
    /// Indices (0..3) of the failing conditions, in the order
    ///   1 + e12 + e13 + e23, 1 + e12 - e13 - e23,
    ///   1 - e12 + e13 - e23, 1 - e12 - e13 + e23   (each must be >= 0).
    std::vector<int> violated_conditions;
    std::array<double, 4> values{};
};

/// Tolerance applied to the Boole conditions.
inline constexpr double kBooleTolerance = 1e-9;

BooleResult boole_check(const TripleCorrelations &t);

/// Expected value of the product of the listed +-1 variables.
struct Moment {
    std::vector<std::size_t> variables;
    double value = 0;
};

struct FeasibilityProblem {
    std::vector<std::string> variables;
    std::vector<Moment> moments;
};

inline constexpr std::size_t kMaxFeasibilityVariables = 12;
inline constexpr double kFeasibilityTolerance = 1e-9;

struct FeasibilityResult {
    bool feasible = false;
    /// Joint pmf over the 2^n assignments when feasible. Bit i of the index set
    /// means variable i is +1.
    std::vector<double> witness;
    /// Largest |moment(witness) - target|, including the normalization row.
    double max_residual = 0;
};

/// Decides whether some joint distribution of the variables reproduces every
/// moment within 1e-9. Throws CapabilityError above 12 variables and
/// ValidationError for malformed moments.
FeasibilityResult joint_feasibility(const FeasibilityProblem &problem);

/// Moment set E[S1 S2], E[S1 S3], E[S2 S3] for a triple.
FeasibilityProblem triple_problem(const TripleCorrelations &t);

/// Four pairwise moments over (A, A', B, B') from CHSH-ordered correlations.
FeasibilityProblem chsh_problem(const std::array<double, 4> &e);

/// Exact no-signaling check over a set of joint tables.
struct NoSignalingReport {
    struct Entry {
        Side side = Side::kA;
        std::string setting;
        /// Max total-variation distance between this wing's marginals across
        /// remote settings.
        double discrepancy = 0;
        std::size_t remote_settings = 0;
    };
    std::vector<Entry> entries;
    double max_discrepancy_a = 0;
    double max_discrepancy_b = 0;
    bool pass = true;
};

inline constexpr double kExactNoSignalingTolerance = 1e-10;

/// Throws ValidationError when no setting appears with two remote settings.
NoSignalingReport no_signaling_check(const std::map<PairKey, JointOutcomeDist> &tables,
                                     double tolerance = kExactNoSignalingTolerance);

/// Chi-square version for estimated counts: for each setting seen with two or
/// more remote settings, tests homogeneity of its single-wing outcome counts
/// across remote settings.
struct NoSignalingTest {
    struct Entry {
        Side side = Side::kA;
        std::string setting;
        double chi_square = 0;
        std::size_t dof = 0;
        double p_value = 1;
        bool underpowered = false;
    };
    std::vector<Entry> entries;
    double min_p_value = 1;
    bool pass = true;
};

inline constexpr double kNoSignalingAlpha = 1e-3;

NoSignalingTest no_signaling_test(const CoincidenceCounts &counts, double alpha = kNoSignalingAlpha);

}  // namespace bellsim

#endif
