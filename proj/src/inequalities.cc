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

#include "bellsim/inequalities.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "bellsim/errors.h"
#include "bellsim/simplex.h"
#include "bellsim/stats.h"

namespace bellsim {

using nlohmann::json;

namespace {

constexpr int kMaxEnumeratedSettings = 6;

void finish(InequalityResult &r, double sigma_level) {
    double excess = r.value - r.bound;
    if (r.se > 0) {
        r.sigma = excess / r.se;
        r.violates = excess > 0 && r.sigma >= sigma_level;
    } else {
        r.sigma = excess > 0 ? INFINITY : 0.0;
        r.violates = excess > 0;
    }
}

double total_variation(const std::array<double, 3> &p, const std::array<double, 3> &q) {
    return 0.5 * (std::abs(p[0] - q[0]) + std::abs(p[1] - q[1]) + std::abs(p[2] - q[2]));
}

const CountTable &require(const CoincidenceCounts &counts, const std::string &x, const std::string &y) {
    const CountTable *t = counts.find(x, y);
    if (t == nullptr) {
        throw LookupError("counts have no pair (" + x + ", " + y + ")");
    }
    return *t;
}

}  // namespace

json inequality_to_json(const InequalityResult &r) {
    return {{"name", r.name},
            {"value", r.value},
            {"se", r.se},
            {"bound", r.bound},
            {"sigma", std::isinf(r.sigma) ? json("inf") : json(r.sigma)},
            {"violates", r.violates}};
}

InequalityResult chsh(const ChshInput &input, double sigma_level) {
    double total = input.e[0] + input.e[1] + input.e[2] + input.e[3];
    double s = 0;
    double var = 0;
    for (std::size_t k = 0; k < 4; k++) {
        s = std::max(s, std::abs(total - 2 * input.e[k]));
        var += input.se[k] * input.se[k];
    }
    InequalityResult r{"CHSH", s, std::sqrt(var), 2.0, 0.0, false};
    finish(r, sigma_level);
    return r;
}

InequalityResult ch_eberhard(const CoincidenceCounts &counts, const ChshRoles &roles, double sigma_level) {
    const CountTable &t_xy = require(counts, roles.x, roles.y);
    const CountTable &t_xy2 = require(counts, roles.x, roles.y2);
    const CountTable &t_x2y = require(counts, roles.x2, roles.y);
    const CountTable &t_x2y2 = require(counts, roles.x2, roles.y2);

    constexpr Outcome kP = Outcome::kPlus;
    constexpr Outcome kM = Outcome::kMinus;
    constexpr Outcome kO = Outcome::kNone;
    std::array<std::pair<std::uint64_t, std::uint64_t>, 4> terms{{
        {t_xy.at(kP, kP), t_xy.total()},
        {t_xy2.at(kP, kO) + t_xy2.at(kP, kM), t_xy2.total()},
        {t_x2y.at(kO, kP) + t_x2y.at(kM, kP), t_x2y.total()},
        {t_x2y2.at(kP, kP), t_x2y2.total()},
    }};
    constexpr std::array<double, 4> sign{1, -1, -1, -1};
    double j = 0;
    double var = 0;
    for (std::size_t k = 0; k < 4; k++) {
        auto [hits, n] = terms[k];
        if (n == 0) {
            continue;
        }
        double f = static_cast<double>(hits) / static_cast<double>(n);
        j += sign[k] * f;
        var += f * (1 - f) / static_cast<double>(n);
    }
    InequalityResult r{"CH-Eberhard", j, std::sqrt(var), 0.0, 0.0, false};
    finish(r, sigma_level);
    return r;
}

std::vector<std::array<double, 4>> deterministic_strategies() {
    std::vector<std::array<double, 4>> out;
    for (int sa = 0; sa < 4; sa++) {
        for (int sb = 0; sb < 4; sb++) {
            double a = (sa & 1) ? -1 : 1;
            double a2 = (sa & 2) ? -1 : 1;
            double b = (sb & 1) ? -1 : 1;
            double b2 = (sb & 2) ? -1 : 1;
            out.push_back({a * b, a * b2, a2 * b, a2 * b2});
        }
    }
    return out;
}

double deterministic_bound(int settings_per_side) {
    if (settings_per_side < 2 || settings_per_side > kMaxEnumeratedSettings) {
        throw ValidationError("deterministic_bound supports 2 to 6 settings per side");
    }
    int n = settings_per_side;
    double best = 0;
    for (unsigned sa = 0; sa < (1u << n); sa++) {
        for (unsigned sb = 0; sb < (1u << n); sb++) {
            auto a = [&](int i) { return (sa >> i) & 1u ? -1.0 : 1.0; };
            auto b = [&](int i) { return (sb >> i) & 1u ? -1.0 : 1.0; };
            for (int x = 0; x < n; x++) {
                for (int x2 = 0; x2 < n; x2++) {
                    if (x2 == x) {
                        continue;
                    }
                    for (int y = 0; y < n; y++) {
                        for (int y2 = 0; y2 < n; y2++) {
                            if (y2 == y) {
                                continue;
                            }
                            double s = a(x) * b(y) + a(x) * b(y2) + a(x2) * b(y) - a(x2) * b(y2);
                            best = std::max(best, std::abs(s));
                        }
                    }
                }
            }
        }
    }
    return best;
}

BooleResult boole_check(const TripleCorrelations &t) {
    BooleResult r;
    r.values = {1 + t.e12 + t.e13 + t.e23, 1 + t.e12 - t.e13 - t.e23, 1 - t.e12 + t.e13 - t.e23,
                1 - t.e12 - t.e13 + t.e23};
    for (int k = 0; k < 4; k++) {
        if (r.values[k] < -kBooleTolerance) {
            r.violated_conditions.push_back(k);
        }
    }
    r.satisfiable = r.violated_conditions.empty();
    return r;
}

FeasibilityResult joint_feasibility(const FeasibilityProblem &problem) {
    std::size_t n = problem.variables.size();
    if (n == 0) {
        throw ValidationError("feasibility problem has no variables");
    }
    if (n > kMaxFeasibilityVariables) {
        throw CapabilityError("joint_feasibility supports at most 12 variables, got " + std::to_string(n));
    }
    for (const auto &m : problem.moments) {
        std::set<std::size_t> distinct(m.variables.begin(), m.variables.end());
        if (m.variables.empty() || distinct.size() != m.variables.size() || *distinct.rbegin() >= n) {
            throw ValidationError("moment must name distinct, existing variables");
        }
        if (!std::isfinite(m.value)) {
            throw ValidationError("moment value must be finite");
        }
    }

    std::size_t cells = std::size_t{1} << n;
    std::size_t rows = problem.moments.size() + 1;
    DenseMatrix a(rows, cells);
    std::vector<double> b(rows);
    for (std::size_t k = 0; k < cells; k++) {
        a(0, k) = 1;
    }
    b[0] = 1;
    for (std::size_t r = 0; r < problem.moments.size(); r++) {
        const auto &m = problem.moments[r];
        for (std::size_t k = 0; k < cells; k++) {
            double prod = 1;
            for (std::size_t v : m.variables) {
                prod *= ((k >> v) & 1u) ? 1.0 : -1.0;
            }
            a(r + 1, k) = prod;
        }
        b[r + 1] = m.value;
    }

    PhaseOneResult lp = phase_one(a, b, kFeasibilityTolerance);
    FeasibilityResult out;
    if (!lp.feasible) {
        out.max_residual = lp.infeasibility;
        return out;
    }

    std::vector<double> w = lp.x;
    double total = 0;
    for (double &v : w) {
        v = std::max(0.0, v);
        total += v;
    }
    for (double &v : w) {
        v /= total;
    }
    double residual = 0;
    for (std::size_t r = 0; r < rows; r++) {
        double got = 0;
        for (std::size_t k = 0; k < cells; k++) {
            got += a(r, k) * w[k];
        }
        residual = std::max(residual, std::abs(got - b[r]));
    }
    out.max_residual = residual;
    out.feasible = residual <= kFeasibilityTolerance;
    if (out.feasible) {
        out.witness = std::move(w);
    }
    return out;
}

FeasibilityProblem triple_problem(const TripleCorrelations &t) {
    return FeasibilityProblem{{"S1", "S2", "S3"}, {{{0, 1}, t.e12}, {{0, 2}, t.e13}, {{1, 2}, t.e23}}};
}

FeasibilityProblem chsh_problem(const std::array<double, 4> &e) {
    return FeasibilityProblem{{"A", "A'", "B", "B'"},
                              {{{0, 2}, e[0]}, {{0, 3}, e[1]}, {{1, 2}, e[2]}, {{1, 3}, e[3]}}};
}

NoSignalingReport no_signaling_check(const std::map<PairKey, JointOutcomeDist> &tables, double tolerance) {
    std::map<std::string, std::vector<std::array<double, 3>>> by_a;
    std::map<std::string, std::vector<std::array<double, 3>>> by_b;
    for (const auto &[key, table] : tables) {
        by_a[key.first].push_back(table.alice());
        by_b[key.second].push_back(table.bob());
    }
    NoSignalingReport report;
    auto scan = [&](const auto &groups, Side side, double &side_max) {
        for (const auto &[label, marginals] : groups) {
            if (marginals.size() < 2) {
                continue;
            }
            double worst = 0;
            for (std::size_t i = 0; i < marginals.size(); i++) {
                for (std::size_t j = i + 1; j < marginals.size(); j++) {
                    worst = std::max(worst, total_variation(marginals[i], marginals[j]));
                }
            }
            report.entries.push_back({side, label, worst, marginals.size()});
            side_max = std::max(side_max, worst);
        }
    };
    scan(by_a, Side::kA, report.max_discrepancy_a);
    scan(by_b, Side::kB, report.max_discrepancy_b);
    if (report.entries.empty()) {
        throw ValidationError("no-signaling check needs a setting shared by at least two pairs");
    }
    report.pass = std::max(report.max_discrepancy_a, report.max_discrepancy_b) <= tolerance;
    return report;
}

NoSignalingTest no_signaling_test(const CoincidenceCounts &counts, double alpha) {
    std::map<std::string, std::vector<std::vector<std::uint64_t>>> by_a;
    std::map<std::string, std::vector<std::vector<std::uint64_t>>> by_b;
    for (std::size_t k = 0; k < counts.pairs.size(); k++) {
        const CountTable &t = counts.tables[k];
        std::vector<std::uint64_t> ra(3, 0);
        std::vector<std::uint64_t> rb(3, 0);
        for (std::size_t i = 0; i < 3; i++) {
            for (std::size_t j = 0; j < 3; j++) {
                ra[i] += t.n[3 * i + j];
                rb[j] += t.n[3 * i + j];
            }
        }
        by_a[counts.pairs[k].x.label].push_back(ra);
        by_b[counts.pairs[k].y.label].push_back(rb);
    }
    NoSignalingTest out;
    auto scan = [&](const auto &groups, Side side) {
        for (const auto &[label, rows] : groups) {
            if (rows.size() < 2) {
                continue;
            }
            ContingencyTest ct = pearson_homogeneity(rows);
            out.entries.push_back({side, label, ct.chi_square, ct.dof, ct.p_value, ct.underpowered});
            if (!ct.underpowered) {
                out.min_p_value = std::min(out.min_p_value, ct.p_value);
            }
        }
    };
    scan(by_a, Side::kA);
    scan(by_b, Side::kB);
    if (out.entries.empty()) {
        throw ValidationError("no-signaling test needs a setting shared by at least two pairs");
    }
    out.pass = out.min_p_value > alpha;
    return out;
}

}  // namespace bellsim
