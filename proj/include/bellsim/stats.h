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

#ifndef BELLSIM_STATS_H
#define BELLSIM_STATS_H

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bellsim/outcome.h"

namespace bellsim {

struct TrialLog;
struct CoincidenceCounts;
struct InequalityResult;

/// Post-selected correlation estimate. For +-1 data the estimator is
/// E = (N++ + N-- - N+- - N-+) / N with se = sqrt((1 - E^2) / N).
struct CorrelationEstimate {
    double e = 0;
    double se = 0;
    std::uint64_t n = 0;
};

/// `counts` is (N++, N+-, N-+, N--). Throws ValidationError when empty.
CorrelationEstimate estimate_correlation(const std::array<std::uint64_t, 4> &counts);

/// Single-wing outcome frequencies over all windows at a setting (not
/// post-selected), ordered (-1, 0, +1), with binomial standard errors.
struct SinglesDistribution {
    std::array<double, 3> p{};
    std::array<double, 3> se{};
    std::array<std::uint64_t, 3> counts{};
    std::uint64_t windows = 0;
};

/// Throws ValidationError when no window used the setting.
SinglesDistribution singles_distribution(const TrialLog &log, Side side, const std::string &setting);
SinglesDistribution singles_distribution(const CoincidenceCounts &counts, Side side, const std::string &setting);

/// Pearson chi-square homogeneity test on a rows x categories table of
/// counts. Categories whose expected counts fall below 5 are merged, smallest
/// first; empty categories are dropped.
struct ContingencyTest {
    double chi_square = 0;
    std::size_t dof = 0;
    double p_value = 1;
    std::size_t rows = 0;
    std::size_t categories = 0;  // after merging
    bool merged = false;
    bool underpowered = false;
};

ContingencyTest pearson_homogeneity(const std::vector<std::vector<std::uint64_t>> &table);

/// Block homogeneity of the windows run at one setting pair.
struct HomogeneityReport {
    std::size_t blocks = 0;
    /// Per-block frequencies over the nine joint outcome categories, ordered
    /// like JointOutcomeDist::p.
    std::vector<std::array<double, 9>> frequencies;
    std::vector<std::uint64_t> block_sizes;
    double chi_square = 0;
    std::size_t dof = 0;
    double p_value = 1;
    std::size_t categories = 0;
    bool merged = false;
    bool underpowered = false;
};

/// Splits the windows at (x_label, y_label) into `blocks` contiguous blocks
/// in log order. Throws ValidationError for blocks < 2; reports underpowered
/// when there are fewer windows than blocks or merging leaves < 2 categories.
HomogeneityReport homogeneity_test(const TrialLog &log, const std::string &x_label, const std::string &y_label,
                                   std::size_t blocks);

/// Same test on pre-split block outcome counts (nine categories per block).
HomogeneityReport homogeneity_from_blocks(const std::vector<std::array<std::uint64_t, 9>> &blocks);

struct Significance {
    double z = 0;
    bool infinite = false;
};

/// (value - bound) / se. With se == 0, a value above the bound gives the
/// infinite flag and z = +inf; otherwise z = 0.
Significance significance(const InequalityResult &result);

/// Kolmogorov-Smirnov distance of the empirical distribution of `samples`
/// from U[0, 1].
double ks_uniform_distance(std::vector<double> samples);

}  // namespace bellsim

#endif
