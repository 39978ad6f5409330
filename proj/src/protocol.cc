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

#include "bellsim/protocol.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <set>
#include <thread>

#include "bellsim/errors.h"
#include "bellsim/serialize.h"
#include "bellsim/special.h"
#include "bellsim/stats.h"

namespace bellsim {

using nlohmann::json;

namespace {

constexpr std::uint64_t kBlockScheduleSalt = 0xB10CB10CULL;

// Calls fn(begin, end, shard) over contiguous shards of [0, n).
template <typename F>
void for_each_shard(std::uint64_t n, unsigned threads, F fn) {
    threads = std::max(1u, threads);
    if (threads == 1 || n < 2 * threads) {
        fn(std::uint64_t{0}, n, 0u);
        return;
    }
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(threads);
    workers.reserve(threads);
    for (unsigned t = 0; t < threads; t++) {
        std::uint64_t begin = n * t / threads;
        std::uint64_t end = n * (t + 1) / threads;
        workers.emplace_back([=, &fn, &errors] {
            try {
                fn(begin, end, t);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto &w : workers) {
        w.join();
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

TrialRecord simulate_window(const TrialSource &source, const SettingSchedule &schedule, std::uint64_t window,
                            std::uint64_t windows, double width, std::uint64_t seed) {
    std::size_t idx = schedule.pair_index(seed, window);
    WindowContext ctx{window, windows, nullptr};
    if (window > 0) {
        ctx.previous = &schedule.pairs[schedule.pair_index(seed, window - 1)];
    }
    CounterRng rng(seed, window, RngStream::kTrial);
    Trial t = source.sample(schedule.pairs[idx], ctx, rng);
    TrialRecord r{window, static_cast<std::uint32_t>(idx), t.a, t.b, t.delay_a, t.delay_b};
    if (r.delay_a > width) {
        r.a = Outcome::kNone;
    }
    if (r.delay_b > width) {
        r.b = Outcome::kNone;
    }
    return r;
}

void check_run(const SettingSchedule &schedule, std::uint64_t windows, double width) {
    schedule.validate();
    if (windows < 1) {
        throw ValidationError("a run needs at least one window");
    }
    if (!(width > 0)) {
        throw ValidationError("window width must be positive");
    }
}

json setting_to_json(const Setting &s) {
    return {{"label", s.label}, {"angle", s.angle}};
}

Setting setting_from_json(const json &doc, Side side) {
    return Setting::make(side, doc.value("angle", 0.0), doc.at("label").get<std::string>());
}

}  // namespace

const char *schedule_mode_name(ScheduleMode mode) {
    return mode == ScheduleMode::kFastSwitching ? "FastSwitching" : "FixedBlocks";
}

ScheduleMode schedule_mode_from_name(const std::string &name) {
    if (name == "FastSwitching" || name == "fast") {
        return ScheduleMode::kFastSwitching;
    }
    if (name == "FixedBlocks" || name == "blocks") {
        return ScheduleMode::kFixedBlocks;
    }
    throw ValidationError("unknown schedule mode '" + name + "'");
}

void SettingSchedule::validate() const {
    if (pairs.empty()) {
        throw ValidationError("schedule has no setting pairs");
    }
    if (block_length < 1) {
        throw ValidationError("block_length must be at least 1");
    }
    std::set<PairKey> seen;
    double total = 0;
    for (const auto &p : pairs) {
        if (p.x.side != Side::kA || p.y.side != Side::kB) {
            throw ValidationError("schedule pair must hold an A setting and a B setting");
        }
        if (!seen.insert(key_of(p)).second) {
            throw ValidationError("schedule lists pair (" + p.x.label + ", " + p.y.label + ") twice");
        }
        if (!(p.weight >= 0)) {
            throw ValidationError("schedule weights must be nonnegative");
        }
        total += p.weight;
    }
    if (mode == ScheduleMode::kFastSwitching && std::abs(total - 1) > 1e-12) {
        throw ValidationError("schedule weights must sum to 1");
    }
}

std::size_t SettingSchedule::pair_index(std::uint64_t seed, std::uint64_t window) const {
    if (mode == ScheduleMode::kFixedBlocks) {
        return static_cast<std::size_t>((window / block_length) % pairs.size());
    }
    CounterRng rng(seed, window, RngStream::kSchedule);
    double u = rng.uniform();
    double acc = 0;
    for (std::size_t k = 0; k < pairs.size(); k++) {
        acc += pairs[k].weight;
        if (u < acc) {
            return k;
        }
    }
    for (std::size_t k = pairs.size(); k-- > 0;) {
        if (pairs[k].weight > 0) {
            return k;
        }
    }
    return 0;
}

json schedule_to_json(const SettingSchedule &schedule) {
    json pairs = json::array();
    for (const auto &p : schedule.pairs) {
        pairs.push_back({{"x", setting_to_json(p.x)}, {"y", setting_to_json(p.y)}, {"weight", p.weight}});
    }
    return {{"mode", schedule_mode_name(schedule.mode)}, {"block_length", schedule.block_length}, {"pairs", pairs}};
}

SettingSchedule schedule_from_json(const json &doc) {
    try {
        SettingSchedule s;
        s.mode = schedule_mode_from_name(doc.value("mode", std::string("FastSwitching")));
        s.block_length = doc.value("block_length", kDefaultBlockLength);
        for (const auto &p : doc.at("pairs")) {
            s.pairs.push_back(SettingPair{setting_from_json(p.at("x"), Side::kA), setting_from_json(p.at("y"), Side::kB),
                                          p.value("weight", 0.0)});
        }
        s.validate();
        return s;
    } catch (const json::exception &e) {
        throw ValidationError(std::string("schedule document: ") + e.what());
    }
}

ModelTrialSource::ModelTrialSource(ExperimentModel model) : model_(std::move(model)) {
    validate(model_);
}

Trial ModelTrialSource::sample(const SettingPair &pair, const WindowContext &, CounterRng &rng) const {
    return sample_trial(model_, pair, rng);
}

json ModelTrialSource::descriptor() const {
    return model_to_json(model_);
}

json metadata_to_json(const RunMetadata &meta) {
    return {{"seed", meta.seed},
            {"windows", meta.windows},
            {"window_width", meta.window_width},
            {"schedule", schedule_to_json(meta.schedule)},
            {"model", meta.model}};
}

RunMetadata metadata_from_json(const json &doc) {
    try {
        RunMetadata meta;
        meta.seed = doc.at("seed").get<std::uint64_t>();
        meta.windows = doc.at("windows").get<std::uint64_t>();
        meta.window_width = doc.at("window_width").get<double>();
        meta.schedule = schedule_from_json(doc.at("schedule"));
        meta.model = doc.value("model", json());
        return meta;
    } catch (const json::exception &e) {
        throw ValidationError(std::string("run metadata: ") + e.what());
    }
}

std::uint64_t CountTable::total() const {
    std::uint64_t t = 0;
    for (auto v : n) {
        t += v;
    }
    return t;
}

std::uint64_t CountTable::coincidences() const {
    auto v = two_by_two();
    return v[0] + v[1] + v[2] + v[3];
}

std::array<std::uint64_t, 4> CountTable::two_by_two() const {
    return {at(Outcome::kPlus, Outcome::kPlus), at(Outcome::kPlus, Outcome::kMinus),
            at(Outcome::kMinus, Outcome::kPlus), at(Outcome::kMinus, Outcome::kMinus)};
}

void CountTable::add(const CountTable &other) {
    for (std::size_t k = 0; k < n.size(); k++) {
        n[k] += other.n[k];
    }
}

const CountTable *CoincidenceCounts::find(const std::string &x_label, const std::string &y_label) const {
    for (std::size_t k = 0; k < pairs.size(); k++) {
        if (pairs[k].x.label == x_label && pairs[k].y.label == y_label) {
            return &tables[k];
        }
    }
    return nullptr;
}

CountTable &CoincidenceCounts::table_for(const SettingPair &pair) {
    for (std::size_t k = 0; k < pairs.size(); k++) {
        if (key_of(pairs[k]) == key_of(pair)) {
            return tables[k];
        }
    }
    pairs.push_back(pair);
    tables.emplace_back();
    return tables.back();
}

TrialLog run_experiment(const TrialSource &source, const SettingSchedule &schedule, std::uint64_t windows,
                        double window_width, std::uint64_t seed, unsigned threads) {
    check_run(schedule, windows, window_width);
    TrialLog log;
    log.meta = RunMetadata{seed, windows, window_width, schedule, source.descriptor()};
    log.records.resize(windows);
    for_each_shard(windows, threads, [&](std::uint64_t begin, std::uint64_t end, unsigned) {
        for (std::uint64_t w = begin; w < end; w++) {
            log.records[w] = simulate_window(source, schedule, w, windows, window_width, seed);
        }
    });
    return log;
}

TrialLog run_experiment(const ExperimentModel &model, const SettingSchedule &schedule, std::uint64_t windows,
                        double window_width, std::uint64_t seed, unsigned threads) {
    return run_experiment(ModelTrialSource(model), schedule, windows, window_width, seed, threads);
}

CoincidenceCounts tabulate(const TrialLog &log) {
    CoincidenceCounts counts;
    counts.pairs = log.meta.schedule.pairs;
    counts.tables.assign(counts.pairs.size(), CountTable{});
    for (const auto &r : log.records) {
        counts.tables[r.pair].at(r.a, r.b)++;
    }
    return counts;
}

CoincidenceCounts run_counts(const TrialSource &source, const SettingSchedule &schedule, std::uint64_t windows,
                             double window_width, std::uint64_t seed, unsigned threads) {
    check_run(schedule, windows, window_width);
    threads = std::max(1u, threads);
    std::vector<std::vector<CountTable>> partial(threads, std::vector<CountTable>(schedule.pairs.size()));
    for_each_shard(windows, threads, [&](std::uint64_t begin, std::uint64_t end, unsigned shard) {
        auto &tables = partial[shard];
        for (std::uint64_t w = begin; w < end; w++) {
            TrialRecord r = simulate_window(source, schedule, w, windows, window_width, seed);
            tables[r.pair].at(r.a, r.b)++;
        }
    });
    CoincidenceCounts counts;
    counts.pairs = schedule.pairs;
    counts.tables.assign(schedule.pairs.size(), CountTable{});
    for (const auto &tables : partial) {
        for (std::size_t k = 0; k < tables.size(); k++) {
            counts.tables[k].add(tables[k]);
        }
    }
    return counts;
}

ScheduleComparison compare_schedules(const TrialSource &source, const std::vector<SettingPair> &pairs,
                                     std::uint64_t windows, double window_width, std::uint64_t seed,
                                     std::uint64_t block_length, unsigned threads) {
    SettingSchedule fast{ScheduleMode::kFastSwitching, pairs, block_length};
    for (auto &p : fast.pairs) {
        p.weight = 1.0 / static_cast<double>(pairs.size());
    }
    SettingSchedule blocks{ScheduleMode::kFixedBlocks, fast.pairs, block_length};
    CoincidenceCounts cf = run_counts(source, fast, windows, window_width, seed, threads);
    CoincidenceCounts cb = run_counts(source, blocks, windows, window_width, derive_seed(seed, kBlockScheduleSalt),
                                      threads);

    ScheduleComparison out;
    for (std::size_t k = 0; k < fast.pairs.size(); k++) {
        ScheduleComparison::Entry e;
        e.pair = fast.pairs[k];
        e.n_fast = cf.tables[k].coincidences();
        e.n_block = cb.tables[k].coincidences();
        e.underpowered = e.n_fast < kMinCoincidences || e.n_block < kMinCoincidences;
        if (e.n_fast > 0) {
            auto est = estimate_correlation(cf.tables[k].two_by_two());
            e.e_fast = est.e;
            e.se_fast = est.se;
        }
        if (e.n_block > 0) {
            auto est = estimate_correlation(cb.tables[k].two_by_two());
            e.e_block = est.e;
            e.se_block = est.se;
        }
        if (!e.underpowered) {
            double diff = std::abs(e.e_fast - e.e_block);
            double se = std::hypot(e.se_fast, e.se_block);
            e.z = se > 0 ? diff / se : (diff > 0 ? INFINITY : 0.0);
            out.chi_square += e.z * e.z;
            out.dof++;
        }
        out.underpowered = out.underpowered || e.underpowered;
        out.entries.push_back(e);
    }
    out.p_value = chi_square_sf(out.chi_square, static_cast<double>(out.dof));
    return out;
}

json comparison_to_json(const ScheduleComparison &cmp) {
    json entries = json::array();
    for (const auto &e : cmp.entries) {
        entries.push_back({{"setting_a", e.pair.x.label},
                           {"setting_b", e.pair.y.label},
                           {"e_fast", e.e_fast},
                           {"se_fast", e.se_fast},
                           {"n_fast", e.n_fast},
                           {"e_block", e.e_block},
                           {"se_block", e.se_block},
                           {"n_block", e.n_block},
                           {"z", std::isinf(e.z) ? json("inf") : json(e.z)},
                           {"underpowered", e.underpowered}});
    }
    return {{"pairs", entries},
            {"chi_square", std::isinf(cmp.chi_square) ? json("inf") : json(cmp.chi_square)},
            {"dof", cmp.dof},
            {"p_value", cmp.p_value},
            {"underpowered", cmp.underpowered}};
}

}  // namespace bellsim
