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

#include "bellsim/stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bellsim/errors.h"
#include "bellsim/inequalities.h"
#include "bellsim/protocol.h"
#include "bellsim/special.h"

namespace bellsim {

namespace {

constexpr double kMinExpected = 5.0;

SinglesDistribution finish_singles(const std::array<std::uint64_t, 3> &counts, const std::string &setting) {
    SinglesDistribution out;
    out.counts = counts;
    out.windows = counts[0] + counts[1] + counts[2];
    if (out.windows == 0) {
        throw ValidationError("no windows at setting '" + setting + "'");
    }
    double n = static_cast<double>(out.windows);
    for (std::size_t k = 0; k < 3; k++) {
        out.p[k] = static_cast<double>(counts[k]) / n;
        out.se[k] = std::sqrt(out.p[k] * (1 - out.p[k]) / n);
    }
    return out;
}

}  // namespace

CorrelationEstimate estimate_correlation(const std::array<std::uint64_t, 4> &counts) {
    std::uint64_t n = counts[0] + counts[1] + counts[2] + counts[3];
    if (n == 0) {
        throw ValidationError("cannot estimate a correlation from an empty table");
    }
    double dn = static_cast<double>(n);
    double e = (static_cast<double>(counts[0]) + static_cast<double>(counts[3]) - static_cast<double>(counts[1]) -
                static_cast<double>(counts[2])) /
               dn;
    return CorrelationEstimate{e, std::sqrt(std::max(0.0, 1 - e * e) / dn), n};
}

SinglesDistribution singles_distribution(const TrialLog &log, Side side, const std::string &setting) {
    std::array<std::uint64_t, 3> counts{};
    for (const auto &r : log.records) {
        const SettingPair &p = log.pair_of(r);
        if (side == Side::kA && p.x.label == setting) {
            counts[index_of(r.a)]++;
        } else if (side == Side::kB && p.y.label == setting) {
            counts[index_of(r.b)]++;
        }
    }
    return finish_singles(counts, setting);
}

SinglesDistribution singles_distribution(const CoincidenceCounts &cc, Side side, const std::string &setting) {
    std::array<std::uint64_t, 3> counts{};
    for (std::size_t k = 0; k < cc.pairs.size(); k++) {
        const auto &label = side == Side::kA ? cc.pairs[k].x.label : cc.pairs[k].y.label;
        if (label != setting) {
            continue;
        }
        for (std::size_t i = 0; i < 3; i++) {
            for (std::size_t j = 0; j < 3; j++) {
                counts[side == Side::kA ? i : j] += cc.tables[k].n[3 * i + j];
            }
        }
    }
    return finish_singles(counts, setting);
}

ContingencyTest pearson_homogeneity(const std::vector<std::vector<std::uint64_t>> &table) {
    ContingencyTest out;
    std::vector<std::vector<double>> rows;
    for (const auto &row : table) {
        if (std::accumulate(row.begin(), row.end(), std::uint64_t{0}) > 0) {
            rows.emplace_back(row.begin(), row.end());
        }
    }
    out.rows = rows.size();
    if (rows.size() < 2) {
        out.underpowered = true;
        return out;
    }
    std::size_t ncols = rows[0].size();
    for (const auto &row : rows) {
        if (row.size() != ncols) {
            throw ValidationError("contingency table rows differ in length");
        }
    }

    // Columns as vectors across rows, empty ones dropped.
    std::vector<std::vector<double>> cols;
    for (std::size_t c = 0; c < ncols; c++) {
        std::vector<double> col(rows.size());
        double t = 0;
        for (std::size_t r = 0; r < rows.size(); r++) {
            col[r] = rows[r][c];
            t += col[r];
        }
        if (t > 0) {
            cols.push_back(std::move(col));
        }
    }
    auto col_total = [](const std::vector<double> &c) { return std::accumulate(c.begin(), c.end(), 0.0); };
    std::vector<double> row_totals(rows.size(), 0.0);
    for (std::size_t r = 0; r < rows.size(); r++) {
        row_totals[r] = std::accumulate(rows[r].begin(), rows[r].end(), 0.0);
    }
    double grand = std::accumulate(row_totals.begin(), row_totals.end(), 0.0);
    double min_row = *std::min_element(row_totals.begin(), row_totals.end());

    while (cols.size() >= 2) {
        std::sort(cols.begin(), cols.end(),
                  [&](const auto &l, const auto &r) { return col_total(l) < col_total(r); });
        if (min_row * col_total(cols[0]) / grand >= kMinExpected) {
            break;
        }
        for (std::size_t r = 0; r < rows.size(); r++) {
            cols[1][r] += cols[0][r];
        }
        cols.erase(cols.begin());
        out.merged = true;
    }
    out.categories = cols.size();
    if (cols.size() < 2 || min_row * col_total(cols[0]) / grand < kMinExpected) {
        out.underpowered = true;
        return out;
    }
    for (const auto &col : cols) {
        double ct = col_total(col);
        for (std::size_t r = 0; r < rows.size(); r++) {
            double expected = row_totals[r] * ct / grand;
            double d = col[r] - expected;
            out.chi_square += d * d / expected;
        }
    }
    out.dof = (rows.size() - 1) * (cols.size() - 1);
    out.p_value = chi_square_sf(out.chi_square, static_cast<double>(out.dof));
    return out;
}

HomogeneityReport homogeneity_from_blocks(const std::vector<std::array<std::uint64_t, 9>> &blocks) {
    if (blocks.size() < 2) {
        throw ValidationError("homogeneity test needs at least 2 blocks");
    }
    HomogeneityReport report;
    report.blocks = blocks.size();
    std::vector<std::vector<std::uint64_t>> table;
    for (const auto &b : blocks) {
        std::uint64_t n = std::accumulate(b.begin(), b.end(), std::uint64_t{0});
        report.block_sizes.push_back(n);
        std::array<double, 9> f{};
        for (std::size_t k = 0; k < 9; k++) {
            f[k] = n == 0 ? 0.0 : static_cast<double>(b[k]) / static_cast<double>(n);
        }
        report.frequencies.push_back(f);
        table.emplace_back(b.begin(), b.end());
        if (n == 0) {
            report.underpowered = true;
        }
    }
    if (report.underpowered) {
        return report;
    }
    ContingencyTest ct = pearson_homogeneity(table);
    report.chi_square = ct.chi_square;
    report.dof = ct.dof;
    report.p_value = ct.p_value;
    report.categories = ct.categories;
    report.merged = ct.merged;
    report.underpowered = ct.underpowered;
    return report;
}

HomogeneityReport homogeneity_test(const TrialLog &log, const std::string &x_label, const std::string &y_label,
                                   std::size_t blocks) {
    if (blocks < 2) {
        throw ValidationError("homogeneity test needs at least 2 blocks");
    }
    std::vector<std::size_t> cells;
    for (const auto &r : log.records) {
        const SettingPair &p = log.pair_of(r);
        if (p.x.label == x_label && p.y.label == y_label) {
            cells.push_back(3 * index_of(r.a) + index_of(r.b));
        }
    }
    std::size_t n = cells.size();
    if (n < blocks) {
        HomogeneityReport report;
        report.blocks = blocks;
        report.underpowered = true;
        return report;
    }
    std::vector<std::array<std::uint64_t, 9>> counts(blocks, std::array<std::uint64_t, 9>{});
    for (std::size_t b = 0; b < blocks; b++) {
        for (std::size_t k = n * b / blocks; k < n * (b + 1) / blocks; k++) {
            counts[b][cells[k]]++;
        }
    }
    return homogeneity_from_blocks(counts);
}

Significance significance(const InequalityResult &result) {
    double excess = result.value - result.bound;
    if (result.se > 0) {
        return Significance{excess / result.se, false};
    }
    if (excess > 0) {
        return Significance{INFINITY, true};
    }
    return Significance{0.0, false};
}

double ks_uniform_distance(std::vector<double> samples) {
    if (samples.empty()) {
        throw ValidationError("KS distance of an empty sample");
    }
    std::sort(samples.begin(), samples.end());
    double n = static_cast<double>(samples.size());
    double d = 0;
    for (std::size_t i = 0; i < samples.size(); i++) {
        double x = std::clamp(samples[i], 0.0, 1.0);
        d = std::max({d, (static_cast<double>(i) + 1) / n - x, x - static_cast<double>(i) / n});
    }
    return d;
}

}  // namespace bellsim
