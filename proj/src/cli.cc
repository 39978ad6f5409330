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

#include "bellsim/cli.h"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include "bellsim/bayes.h"
#include "bellsim/builtins.h"
#include "bellsim/errors.h"
#include "bellsim/inequalities.h"
#include "bellsim/log_io.h"
#include "bellsim/protocol.h"
#include "bellsim/serialize.h"
#include "bellsim/stats.h"

namespace bellsim {

namespace {

using nlohmann::json;

std::string read_file(const std::string &path) {
    if (!std::filesystem::exists(path)) {
        throw ValidationError("no such file: " + path);
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw IoError("read failed: " + path);
    }
    return buf.str();
}

json read_json_file(const std::string &path) {
    std::string text = read_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw ValidationError(path + ": " + e.what());
    }
}

void write_file(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path + " for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

/// Writes to `path`, or to `out` when the path is empty or "-".
void emit(const std::string &path, const std::string &content, std::ostream &out) {
    if (path.empty() || path == "-") {
        out << content;
    } else {
        write_file(path, content);
    }
}

std::string dump(const json &doc) {
    return doc.dump(2) + "\n";
}

std::string shortest(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string fixed12(double v) {
    std::ostringstream s;
    s << std::setprecision(12) << v;
    return s.str();
}

// ---------------------------------------------------------------------------
// Run configuration shared by simulate, sweep and compare-schedules.

struct RunOptions {
    std::string builtin;
    std::string model_path;
    std::string config_path;
    double d = 4.0;
    double t0 = 1.0;
    std::vector<double> w{1.0};
    std::uint64_t n = 100000;
    std::uint64_t seed = 0;
    std::string out;
    std::string schedule = "fast";
    std::uint64_t block_length = kDefaultBlockLength;
    unsigned threads = 0;

    CLI::Option *o_builtin = nullptr;
    CLI::Option *o_model = nullptr;
    CLI::Option *o_d = nullptr;
    CLI::Option *o_t0 = nullptr;
    CLI::Option *o_w = nullptr;
    CLI::Option *o_n = nullptr;
    CLI::Option *o_seed = nullptr;
    CLI::Option *o_out = nullptr;
    CLI::Option *o_schedule = nullptr;
    CLI::Option *o_block = nullptr;
    CLI::Option *o_threads = nullptr;
};

void add_run_options(CLI::App *cmd, RunOptions &o, bool multi_w) {
    o.o_builtin = cmd->add_option("builtin", o.builtin, "Built-in model name");
    o.o_model = cmd->add_option("--model", o.model_path, "Model JSON file");
    cmd->add_option("--config", o.config_path, "Run configuration JSON; flags override its values");
    o.o_d = cmd->add_option("--d", o.d, "Delay exponent of the coincidence model");
    o.o_t0 = cmd->add_option("--t0", o.t0, "Maximum delay of the coincidence model");
    if (multi_w) {
        o.o_w = cmd->add_option("--w", o.w, "Coincidence window widths")->delimiter(',');
    } else {
        o.o_w = cmd->add_option("--w", o.w[0], "Coincidence window width");
    }
    o.o_n = cmd->add_option("--n", o.n, "Number of windows");
    o.o_seed = cmd->add_option("--seed", o.seed, "64-bit seed");
    o.o_out = cmd->add_option("--out", o.out, "Output path (stdout when omitted)");
    o.o_schedule = cmd->add_option("--schedule", o.schedule, "fast or blocks");
    o.o_block = cmd->add_option("--block-length", o.block_length, "Windows per block in block mode");
    o.o_threads = cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
}

struct RunConfig {
    ExperimentModel model;
    SettingSchedule schedule;
    std::vector<double> window_widths;
    std::uint64_t windows = 0;
    std::uint64_t seed = 0;
    std::string out;
    unsigned threads = 1;
};

template <typename T>
void take(const json &cfg, const char *key, CLI::Option *flag, T &dest) {
    if (flag != nullptr && flag->count() > 0) {
        return;
    }
    if (cfg.contains(key)) {
        try {
            dest = cfg.at(key).get<T>();
        } catch (const json::exception &e) {
            throw ValidationError(std::string("config key '") + key + "': " + e.what());
        }
    }
}

RunConfig resolve_run(RunOptions o) {
    json cfg = json::object();
    if (!o.config_path.empty()) {
        cfg = read_json_file(o.config_path);
        if (!cfg.is_object()) {
            throw ValidationError("config must be a JSON object");
        }
    }
    take(cfg, "model", o.o_builtin, o.builtin);
    take(cfg, "model_path", o.o_model, o.model_path);
    take(cfg, "windows", o.o_n, o.n);
    take(cfg, "seed", o.o_seed, o.seed);
    take(cfg, "out", o.o_out, o.out);
    take(cfg, "block_length", o.o_block, o.block_length);
    take(cfg, "threads", o.o_threads, o.threads);
    if (o.o_w->count() == 0) {
        if (cfg.contains("window_widths")) {
            take(cfg, "window_widths", nullptr, o.w);
        } else if (cfg.contains("window_width")) {
            o.w.assign(1, 0.0);
            take(cfg, "window_width", nullptr, o.w[0]);
        }
    }
    json params = cfg.value("params", json::object());
    if (!params.is_object()) {
        throw ValidationError("config key 'params' must be an object");
    }
    if (o.o_d->count() > 0) {
        params["d"] = o.d;
    }
    if (o.o_t0->count() > 0) {
        params["t0"] = o.t0;
    }

    bool cli_model = o.o_builtin->count() > 0 || o.o_model->count() > 0;
    if (cli_model && o.o_builtin->count() == 0) {
        o.builtin.clear();
    }
    if (cli_model && o.o_model->count() == 0) {
        o.model_path.clear();
    }
    if (!o.builtin.empty() && !o.model_path.empty()) {
        throw ValidationError("give either a built-in model name or --model, not both");
    }
    RunConfig rc;
    if (!o.model_path.empty()) {
        rc.model = model_from_json(read_json_file(o.model_path));
    } else if (!o.builtin.empty()) {
        rc.model = builtin_model(o.builtin, params);
    } else {
        throw ValidationError("no model given; name a built-in model or pass --model");
    }

    bool schedule_object = cfg.contains("schedule") && cfg["schedule"].is_object();
    if (schedule_object) {
        rc.schedule = schedule_from_json(cfg["schedule"]);
    } else {
        take(cfg, "schedule", o.o_schedule, o.schedule);
        rc.schedule.pairs = chsh_pairs();
    }
    if (!schedule_object || o.o_schedule->count() > 0) {
        rc.schedule.mode = schedule_mode_from_name(o.schedule);
    }
    if (!schedule_object || o.o_block->count() > 0 || cfg.contains("block_length")) {
        rc.schedule.block_length = o.block_length;
    }
    rc.schedule.validate();

    for (double w : o.w) {
        if (!(w > 0) || !std::isfinite(w)) {
            throw ValidationError("window width must be positive and finite");
        }
    }
    if (o.n == 0) {
        throw ValidationError("--n must be positive");
    }
    rc.window_widths = o.w;
    rc.windows = o.n;
    rc.seed = o.seed;
    rc.out = o.out;
    rc.threads = resolve_threads(o.threads);
    return rc;
}

// ---------------------------------------------------------------------------
// simulate

int cmd_simulate(const RunOptions &opts, std::ostream &out) {
    RunConfig rc = resolve_run(opts);
    TrialLog log = run_experiment(rc.model, rc.schedule, rc.windows, rc.window_widths[0], rc.seed, rc.threads);
    std::string csv = format_log_csv(log, rc.threads);
    emit(rc.out, csv, out);
    if (!rc.out.empty() && rc.out != "-") {
        write_file(metadata_path_for(rc.out), dump(metadata_to_json(log.meta)));
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// Shared analysis of count tables.

struct Roles {
    ChshRoles roles;
    bool found = false;
};

bool present(const CoincidenceCounts &counts, const std::string &x, const std::string &y) {
    const CountTable *t = counts.find(x, y);
    return t != nullptr && t->total() > 0;
}

/// First pair of Alice settings and pair of Bob settings, in order of
/// appearance, for which all four combinations were run.
Roles find_roles(const CoincidenceCounts &counts) {
    std::vector<std::string> xs;
    std::vector<std::string> ys;
    for (std::size_t k = 0; k < counts.pairs.size(); k++) {
        if (counts.tables[k].total() == 0) {
            continue;
        }
        const auto &p = counts.pairs[k];
        if (std::find(xs.begin(), xs.end(), p.x.label) == xs.end()) {
            xs.push_back(p.x.label);
        }
        if (std::find(ys.begin(), ys.end(), p.y.label) == ys.end()) {
            ys.push_back(p.y.label);
        }
    }
    for (std::size_t i = 0; i < xs.size(); i++) {
        for (std::size_t i2 = i + 1; i2 < xs.size(); i2++) {
            for (std::size_t j = 0; j < ys.size(); j++) {
                for (std::size_t j2 = j + 1; j2 < ys.size(); j2++) {
                    ChshRoles r{xs[i], xs[i2], ys[j], ys[j2]};
                    if (present(counts, r.x, r.y) && present(counts, r.x, r.y2) && present(counts, r.x2, r.y) &&
                        present(counts, r.x2, r.y2)) {
                        return {r, true};
                    }
                }
            }
        }
    }
    return {};
}

json roles_json(const ChshRoles &r) {
    return {{"x", r.x}, {"x2", r.x2}, {"y", r.y}, {"y2", r.y2}};
}

/// CHSH from post-selected estimates; nullopt when a pair has no
/// coincidences.
std::optional<InequalityResult> chsh_from_counts(const CoincidenceCounts &counts, const ChshRoles &r,
                                                 double sigma) {
    const std::array<std::pair<std::string, std::string>, 4> order{
        {{r.x, r.y}, {r.x, r.y2}, {r.x2, r.y}, {r.x2, r.y2}}};
    ChshInput in;
    for (std::size_t k = 0; k < 4; k++) {
        const CountTable *t = counts.find(order[k].first, order[k].second);
        if (t == nullptr || t->coincidences() == 0) {
            return std::nullopt;
        }
        CorrelationEstimate est = estimate_correlation(t->two_by_two());
        in.e[k] = est.e;
        in.se[k] = est.se;
    }
    return chsh(in, sigma);
}

/// CH/Eberhard J maximized over the four relabelings x <-> x', y <-> y'.
std::pair<InequalityResult, ChshRoles> best_ch(const CoincidenceCounts &counts, const ChshRoles &r, double sigma) {
    std::optional<std::pair<InequalityResult, ChshRoles>> best;
    for (int swap_x = 0; swap_x < 2; swap_x++) {
        for (int swap_y = 0; swap_y < 2; swap_y++) {
            ChshRoles q{swap_x ? r.x2 : r.x, swap_x ? r.x : r.x2, swap_y ? r.y2 : r.y, swap_y ? r.y : r.y2};
            InequalityResult res = ch_eberhard(counts, q, sigma);
            if (!best || res.value > best->first.value) {
                best = std::pair{res, q};
            }
        }
    }
    return *best;
}

json contingency_entries(const NoSignalingTest &t, double alpha) {
    json entries = json::array();
    for (const auto &e : t.entries) {
        entries.push_back({{"side", side_name(e.side)},
                           {"setting", e.setting},
                           {"chi_square", e.chi_square},
                           {"dof", e.dof},
                           {"p_value", e.p_value},
                           {"underpowered", e.underpowered}});
    }
    return {{"entries", entries}, {"min_p_value", t.min_p_value}, {"pass", t.pass}, {"alpha", alpha}};
}

json homogeneity_json(const HomogeneityReport &h) {
    return {{"blocks", h.blocks},
            {"block_sizes", h.block_sizes},
            {"frequencies", h.frequencies},
            {"chi_square", h.chi_square},
            {"dof", h.dof},
            {"p_value", h.p_value},
            {"categories", h.categories},
            {"merged", h.merged},
            {"underpowered", h.underpowered}};
}

json singles_json(const SinglesDistribution &s) {
    return {{"p", s.p}, {"se", s.se}, {"counts", s.counts}, {"windows", s.windows}};
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeOptions {
    std::string log_path;
    std::string meta_path;
    std::string out;
    std::size_t blocks = 10;
    double sigma = kDefaultSigmaLevel;
    double alpha = kNoSignalingAlpha;
    bool strict = false;
};

json analyze_log(const TrialLog &log, bool have_meta, const AnalyzeOptions &o, bool &underpowered) {
    if (log.records.empty()) {
        throw ValidationError("log has no trial rows");
    }
    CoincidenceCounts counts = tabulate(log);
    json report;
    json warnings = json::array();
    report["windows"] = log.records.size();

    json pairs = json::array();
    for (std::size_t k = 0; k < counts.pairs.size(); k++) {
        const CountTable &t = counts.tables[k];
        if (t.total() == 0) {
            continue;
        }
        const SettingPair &p = counts.pairs[k];
        json entry = {{"x", p.x.label},
                      {"y", p.y.label},
                      {"windows", t.total()},
                      {"coincidences", t.coincidences()},
                      {"coincidence_fraction", static_cast<double>(t.coincidences()) / static_cast<double>(t.total())}};
        if (have_meta) {
            entry["x_angle"] = p.x.angle;
            entry["y_angle"] = p.y.angle;
        }
        json rows = json::array();
        for (std::size_t i = 0; i < 3; i++) {
            rows.push_back({t.n[3 * i], t.n[3 * i + 1], t.n[3 * i + 2]});
        }
        entry["counts"] = rows;
        if (t.coincidences() > 0) {
            CorrelationEstimate est = estimate_correlation(t.two_by_two());
            entry["correlation"] = {{"e", est.e}, {"se", est.se}, {"n", est.n}};
        } else {
            entry["correlation"] = nullptr;
            warnings.push_back("pair (" + p.x.label + ", " + p.y.label + ") has no coincidences");
        }
        if (t.coincidences() < kMinCoincidences) {
            underpowered = true;
        }
        HomogeneityReport h = homogeneity_test(log, p.x.label, p.y.label, o.blocks);
        underpowered = underpowered || h.underpowered;
        entry["homogeneity"] = homogeneity_json(h);
        pairs.push_back(entry);
    }
    report["pairs"] = pairs;

    json singles = {{"A", json::object()}, {"B", json::object()}};
    for (std::size_t k = 0; k < counts.pairs.size(); k++) {
        if (counts.tables[k].total() == 0) {
            continue;
        }
        const SettingPair &p = counts.pairs[k];
        singles["A"][p.x.label] = singles_json(singles_distribution(counts, Side::kA, p.x.label));
        singles["B"][p.y.label] = singles_json(singles_distribution(counts, Side::kB, p.y.label));
    }
    report["singles"] = singles;

    CoincidenceCounts run;
    for (std::size_t k = 0; k < counts.pairs.size(); k++) {
        if (counts.tables[k].total() > 0) {
            run.pairs.push_back(counts.pairs[k]);
            run.tables.push_back(counts.tables[k]);
        }
    }
    try {
        NoSignalingTest ns = no_signaling_test(run, o.alpha);
        for (const auto &e : ns.entries) {
            underpowered = underpowered || e.underpowered;
        }
        report["no_signaling"] = contingency_entries(ns, o.alpha);
    } catch (const ValidationError &) {
        warnings.push_back("no setting was run against two remote settings; no-signaling test omitted");
    }

    Roles roles = find_roles(counts);
    if (!roles.found) {
        warnings.push_back("CHSH needs two settings per side with all four pairs; CHSH and CH sections omitted");
    } else {
        auto s = chsh_from_counts(counts, roles.roles, o.sigma);
        if (s) {
            json j = inequality_to_json(*s);
            j["roles"] = roles_json(roles.roles);
            report["chsh"] = j;
        } else {
            warnings.push_back("a CHSH pair has no coincidences; CHSH section omitted");
        }
        auto [ch, ch_roles] = best_ch(counts, roles.roles, o.sigma);
        json j = inequality_to_json(ch);
        j["roles"] = roles_json(ch_roles);
        report["ch_eberhard"] = j;
    }
    report["warnings"] = warnings;
    report["underpowered"] = underpowered;
    return report;
}

int cmd_analyze(const AnalyzeOptions &o, std::ostream &out, std::ostream &err) {
    if (o.blocks < 2) {
        throw ValidationError("--blocks must be at least 2");
    }
    std::string text = read_file(o.log_path);
    std::optional<RunMetadata> meta;
    std::string meta_path = o.meta_path.empty() ? metadata_path_for(o.log_path) : o.meta_path;
    if (!o.meta_path.empty() || (meta_path != o.log_path && std::filesystem::exists(meta_path))) {
        meta = metadata_from_json(read_json_file(meta_path));
    }
    std::istringstream in(text);
    TrialLog log = read_log_csv(in, meta);
    bool underpowered = false;
    json report = analyze_log(log, meta.has_value(), o, underpowered);
    for (const auto &w : report["warnings"]) {
        err << "warning: " << w.get<std::string>() << "\n";
    }
    emit(o.out, dump(report), out);
    return o.strict && underpowered ? kExitUnderpowered : kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

int cmd_sweep(const RunOptions &opts, std::ostream &out) {
    RunConfig rc = resolve_run(opts);
    if (rc.window_widths.size() < 2) {
        throw ValidationError("sweep needs at least two window widths");
    }
    ModelTrialSource source(rc.model);
    std::string csv = "W,S,se_S,coincidence_fraction\n";
    for (double w : rc.window_widths) {
        CoincidenceCounts counts = run_counts(source, rc.schedule, rc.windows, w, rc.seed, rc.threads);
        std::uint64_t coincidences = 0;
        for (const auto &t : counts.tables) {
            coincidences += t.coincidences();
        }
        double s = NAN;
        double se = NAN;
        Roles roles = find_roles(counts);
        if (roles.found) {
            if (auto r = chsh_from_counts(counts, roles.roles, kDefaultSigmaLevel)) {
                s = r->value;
                se = r->se;
            }
        }
        csv += shortest(w) + "," + shortest(s) + "," + shortest(se) + "," +
               shortest(static_cast<double>(coincidences) / static_cast<double>(rc.windows)) + "\n";
    }
    emit(rc.out, csv, out);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// compare-schedules

int cmd_compare(const RunOptions &opts, bool strict, std::ostream &out) {
    RunConfig rc = resolve_run(opts);
    ModelTrialSource source(rc.model);
    ScheduleComparison cmp = compare_schedules(source, rc.schedule.pairs, rc.windows, rc.window_widths[0], rc.seed,
                                               rc.schedule.block_length, rc.threads);
    emit(rc.out, dump(comparison_to_json(cmp)), out);
    return strict && cmp.underpowered ? kExitUnderpowered : kExitOk;
}

// ---------------------------------------------------------------------------
// Moments files:
//   {"variables": ["A", "A'", "B", "B'"],
//    "moments": [{"variables": ["A", "B"], "value": 0.7}, ...]}
// Moment variables are names from "variables" or 0-based indices.

FeasibilityProblem parse_moments(const json &doc) {
    try {
        FeasibilityProblem p;
        p.variables = doc.at("variables").get<std::vector<std::string>>();
        for (const auto &m : doc.at("moments")) {
            Moment mo;
            for (const auto &v : m.at("variables")) {
                if (v.is_number_unsigned()) {
                    mo.variables.push_back(v.get<std::size_t>());
                    continue;
                }
                auto name = v.get<std::string>();
                auto it = std::find(p.variables.begin(), p.variables.end(), name);
                if (it == p.variables.end()) {
                    throw ValidationError("moment refers to unknown variable '" + name + "'");
                }
                mo.variables.push_back(static_cast<std::size_t>(it - p.variables.begin()));
            }
            mo.value = m.at("value").get<double>();
            p.moments.push_back(mo);
        }
        return p;
    } catch (const json::exception &e) {
        throw ValidationError(std::string("moments file: ") + e.what());
    }
}

std::optional<double> pair_moment(const FeasibilityProblem &p, std::size_t i, std::size_t j) {
    for (const auto &m : p.moments) {
        if (m.variables.size() == 2 && ((m.variables[0] == i && m.variables[1] == j) ||
                                        (m.variables[0] == j && m.variables[1] == i))) {
            return m.value;
        }
    }
    return std::nullopt;
}

double require_moment(const FeasibilityProblem &p, std::size_t i, std::size_t j) {
    auto v = pair_moment(p, i, j);
    if (!v) {
        throw ValidationError("moments file lacks E[" + p.variables[i] + " " + p.variables[j] + "]");
    }
    return *v;
}

/// Four variables read as (x, x', y, y') give CHSH; three give the Boole
/// conditions, reported as the largest violation -min_k condition_k against
/// bound 0.
InequalityResult inequality_from_moments(const FeasibilityProblem &p, double sigma) {
    if (p.variables.size() == 4) {
        ChshInput in;
        in.e = {require_moment(p, 0, 2), require_moment(p, 0, 3), require_moment(p, 1, 2), require_moment(p, 1, 3)};
        return chsh(in, sigma);
    }
    if (p.variables.size() == 3) {
        BooleResult b = boole_check({require_moment(p, 0, 1), require_moment(p, 0, 2), require_moment(p, 1, 2)});
        double worst = -*std::min_element(b.values.begin(), b.values.end());
        InequalityResult r{"Boole", worst, 0.0, 0.0, 0.0, !b.satisfiable};
        r.sigma = worst > 0 ? INFINITY : 0.0;
        return r;
    }
    throw ValidationError("inequality from moments needs 3 (Boole) or 4 (CHSH) variables");
}

struct InequalityOptions {
    std::string in;
    std::string out;
    std::string kind = "chsh";
    double sigma = kDefaultSigmaLevel;
};

bool looks_like_json(const std::string &path, const std::string &text) {
    if (std::filesystem::path(path).extension() == ".json") {
        return true;
    }
    auto pos = text.find_first_not_of(" \t\r\n");
    return pos != std::string::npos && text[pos] == '{';
}

int cmd_inequality(const InequalityOptions &o, std::ostream &out) {
    std::string text = read_file(o.in);
    InequalityResult result;
    json doc;
    if (looks_like_json(o.in, text)) {
        try {
            doc = json::parse(text);
        } catch (const json::parse_error &e) {
            throw ValidationError(o.in + ": " + e.what());
        }
        result = inequality_from_moments(parse_moments(doc), o.sigma);
        doc = inequality_to_json(result);
    } else {
        std::istringstream in(text);
        CoincidenceCounts counts = read_counts_csv(in);
        Roles roles = find_roles(counts);
        if (!roles.found) {
            throw ValidationError("counts need two settings per side with all four pairs");
        }
        if (o.kind == "ch") {
            auto [r, q] = best_ch(counts, roles.roles, o.sigma);
            doc = inequality_to_json(r);
            doc["roles"] = roles_json(q);
        } else if (o.kind == "chsh") {
            auto r = chsh_from_counts(counts, roles.roles, o.sigma);
            if (!r) {
                throw ValidationError("a CHSH pair has no coincidences");
            }
            doc = inequality_to_json(*r);
            doc["roles"] = roles_json(roles.roles);
        } else {
            throw ValidationError("--kind must be chsh or ch");
        }
    }
    emit(o.out, dump(doc), out);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// feasibility

int cmd_feasibility(const std::string &in, const std::string &path_out, std::ostream &out) {
    FeasibilityProblem p = parse_moments(read_json_file(in));
    FeasibilityResult r = joint_feasibility(p);
    json doc = {{"verdict", r.feasible ? "feasible" : "infeasible"}, {"variables", p.variables}};
    if (r.feasible) {
        json witness = json::array();
        for (std::size_t idx = 0; idx < r.witness.size(); idx++) {
            if (r.witness[idx] <= 0) {
                continue;
            }
            json assignment = json::object();
            for (std::size_t v = 0; v < p.variables.size(); v++) {
                assignment[p.variables[v]] = (idx >> v) & 1 ? 1 : -1;
            }
            witness.push_back({{"assignment", assignment}, {"p", r.witness[idx]}});
        }
        doc["witness"] = witness;
        doc["max_residual"] = r.max_residual;
    }
    emit(path_out, dump(doc), out);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// bayes-demo

json freedom_json(const FreedomReport &f) {
    return {{"factorization_holds", f.factorization_holds},
            {"identification_holds", f.identification_holds},
            {"posterior_differs_from_prior", f.posterior_differs_from_prior},
            {"checked", f.checked},
            {"skipped", f.skipped},
            {"min_posterior", rational_string(f.min_posterior)},
            {"max_posterior", rational_string(f.max_posterior)},
            {"conclusion", f.conclusion}};
}

int cmd_bayes_demo(const std::string &format, std::ostream &out) {
    FiniteProbabilitySpace space = balls_space();
    Event big = space.event({"(r,b)", "(w,b)"});
    Event red = space.event({"(r,b)", "(r,s)"});
    Event white = space.event({"(w,b)", "(w,s)"});
    Rational a_given_e1 = cond_prob(space, big, red);
    Rational e1_given_a = cond_prob(space, red, big);
    Rational total = total_prob(space, big, {red, white});

    RationalProductModel model = demo_rational_product_model();
    RationalSchedule schedule;
    for (const auto &[x, ix] : model.alice) {
        for (const auto &[y, iy] : model.bob) {
            schedule[{x, y}] = Rational(1, 4);
        }
    }
    FreedomReport freedom = freedom_check(model, schedule);
    IndependenceReport independence = measurement_independence_check(model, schedule);

    if (format == "json") {
        json atoms = json::array();
        for (std::size_t k = 0; k < space.size(); k++) {
            atoms.push_back({{"atom", space.atoms()[k]}, {"p", rational_string(space.weights()[k])}});
        }
        json doc = {{"space", atoms},
                    {"events", {{"A", {"(r,b)", "(w,b)"}}, {"E1", {"(r,b)", "(r,s)"}}, {"E2", {"(w,b)", "(w,s)"}}}},
                    {"P(A|E1)", rational_string(a_given_e1)},
                    {"P(E1|A)", rational_string(e1_given_a)},
                    {"P(A) by total probability", rational_string(total)},
                    {"P(A)", rational_string(space.prob(big))},
                    {"measurement_independence",
                     {{"independent", independence.independent},
                      {"max_deviation", rational_string(independence.max_deviation)},
                      {"lambda_atoms", independence.lambda_atoms}}},
                    {"freedom_check", freedom_json(freedom)}};
        out << dump(doc);
        return kExitOk;
    }
    if (format != "text") {
        throw ValidationError("--format must be json or text");
    }
    out << "atom     P\n";
    for (std::size_t k = 0; k < space.size(); k++) {
        out << std::left << std::setw(9) << space.atoms()[k] << rational_string(space.weights()[k]) << "\n";
    }
    out << "\nA  = {(r,b), (w,b)}\nE1 = {(r,b), (r,s)}\nE2 = {(w,b), (w,s)}\n\n";
    out << "P(A|E1) = " << rational_string(a_given_e1) << " (" << fixed12(static_cast<double>(a_given_e1)) << ")\n";
    out << "P(E1|A) = " << rational_string(e1_given_a) << " (" << fixed12(static_cast<double>(e1_given_a)) << ")\n";
    out << "P(A|E1)P(E1) + P(A|E2)P(E2) = " << rational_string(total) << "\n\n";
    out << "measurement independence: " << (independence.independent ? "holds" : "fails")
        << ", max |P(lambda|x,y) - P(lambda)| = " << rational_string(independence.max_deviation) << "\n";
    out << "factorization P(lambda|x,y) = P(l1,l2) Px(lx) Py(ly): " << (freedom.factorization_holds ? "holds" : "fails")
        << "\n";
    out << "P(x,y|lambda) over " << freedom.checked << " lambdas (" << freedom.skipped
        << " skipped): min " << rational_string(freedom.min_posterior) << ", max "
        << rational_string(freedom.max_posterior) << "\n";
    out << freedom.conclusion << "\n";
    return kExitOk;
}

}  // namespace

unsigned resolve_threads(unsigned requested) {
    unsigned n = requested;
    if (n == 0) {
        n = std::max(1u, std::thread::hardware_concurrency());
    }
    if (const char *env = std::getenv("BELLSIM_THREADS"); env != nullptr && *env != '\0') {
        unsigned cap = 0;
        std::string_view s(env);
        auto res = std::from_chars(s.data(), s.data() + s.size(), cap);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size() || cap == 0) {
            throw ValidationError("BELLSIM_THREADS must be a positive integer");
        }
        n = std::min(n, cap);
    }
    return n;
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Event-by-event simulator and analysis toolkit for Bell-type experiments", "bellsim"};
    app.require_subcommand(1);

    RunOptions sim;
    auto *simulate = app.add_subcommand("simulate", "Run a model and write a trial log CSV plus metadata JSON");
    add_run_options(simulate, sim, false);

    AnalyzeOptions an;
    auto *analyze = app.add_subcommand("analyze", "Analyze a trial log CSV");
    analyze->add_option("log", an.log_path, "Trial log CSV")->required();
    analyze->add_option("--meta", an.meta_path, "Run metadata JSON (default: the log's sidecar, if present)");
    analyze->add_option("--out", an.out, "Report path (stdout when omitted)");
    analyze->add_option("--blocks", an.blocks, "Blocks for the homogeneity test");
    analyze->add_option("--sigma", an.sigma, "Significance level for violation flags");
    analyze->add_option("--alpha", an.alpha, "No-signaling test level");
    analyze->add_flag("--strict", an.strict, "Exit 4 when any part of the analysis is underpowered");

    RunOptions sw;
    sw.w = {1.0, 0.1, 0.01, 0.001};
    auto *sweep = app.add_subcommand("sweep", "Post-selected S versus coincidence window width");
    add_run_options(sweep, sw, true);

    InequalityOptions iq;
    auto *inequality = app.add_subcommand("inequality", "Evaluate CHSH or CH from counts CSV or a moments JSON");
    inequality->add_option("input", iq.in, "Counts CSV or moments JSON")->required();
    inequality->add_option("--kind", iq.kind, "chsh or ch (counts input only)");
    inequality->add_option("--sigma", iq.sigma, "Significance level for the violation flag");
    inequality->add_option("--out", iq.out, "Output path (stdout when omitted)");

    std::string feas_in;
    std::string feas_out;
    auto *feasibility = app.add_subcommand("feasibility", "Decide whether moments admit a joint distribution");
    feasibility->add_option("moments", feas_in, "Moments JSON")->required();
    feasibility->add_option("--out", feas_out, "Output path (stdout when omitted)");

    std::string format = "json";
    auto *bayes = app.add_subcommand("bayes-demo", "Exact conditional probability demo");
    bayes->add_option("--format", format, "json or text");

    RunOptions cs;
    cs.n = 1000000;
    bool cs_strict = false;
    auto *compare = app.add_subcommand("compare-schedules", "Compare fast switching against fixed blocks");
    add_run_options(compare, cs, false);
    compare->add_flag("--strict", cs_strict, "Exit 4 when the comparison is underpowered");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (simulate->parsed()) {
            return cmd_simulate(sim, out);
        }
        if (analyze->parsed()) {
            return cmd_analyze(an, out, err);
        }
        if (sweep->parsed()) {
            return cmd_sweep(sw, out);
        }
        if (inequality->parsed()) {
            return cmd_inequality(iq, out);
        }
        if (feasibility->parsed()) {
            return cmd_feasibility(feas_in, feas_out, out);
        }
        if (bayes->parsed()) {
            return cmd_bayes_demo(format, out);
        }
        if (compare->parsed()) {
            return cmd_compare(cs, cs_strict, out);
        }
    } catch (const IoError &e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

int run_cli(int argc, char **argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace bellsim
