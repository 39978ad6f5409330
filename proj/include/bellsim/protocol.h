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

#ifndef BELLSIM_PROTOCOL_H
#define BELLSIM_PROTOCOL_H

// Event-stream emulation of a two-station experiment. Each synchronized
// window carries exactly one emitted pair; a wing whose detection delay
// exceeds the window width W registers no click (outcome 0).

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bellsim/models.h"
#include "bellsim/vendor_json.h"

namespace bellsim {

enum class ScheduleMode { kFastSwitching, kFixedBlocks };

const char *schedule_mode_name(ScheduleMode mode);
ScheduleMode schedule_mode_from_name(const std::string &name);

inline constexpr std::uint64_t kDefaultBlockLength = 10000;

/// FastSwitching draws the pair of every window i.i.d. from the pair weights.
/// FixedBlocks runs contiguous blocks of `block_length` windows, cycling
/// through `pairs` in order; the weights are not used.
struct SettingSchedule {
    ScheduleMode mode = ScheduleMode::kFastSwitching;
    std::vector<SettingPair> pairs;
    std::uint64_t block_length = kDefaultBlockLength;

    void validate() const;
    /// Index into `pairs` for `window`; a pure function of (seed, window).
    std::size_t pair_index(std::uint64_t seed, std::uint64_t window) const;
};

nlohmann::json schedule_to_json(const SettingSchedule &schedule);
SettingSchedule schedule_from_json(const nlohmann::json &doc);

/// What a sampler may know about the window it is filling.
struct WindowContext {
    std::uint64_t window = 0;
    std::uint64_t total_windows = 0;
    /// Pair used in the previous window, null for window 0.
    const SettingPair *previous = nullptr;
};

/// Source of per-window trials. The model families all go through
/// ModelTrialSource; test doubles implement this directly.
class TrialSource {
   public:
    virtual ~TrialSource() = default;
    virtual Trial sample(const SettingPair &pair, const WindowContext &ctx, CounterRng &rng) const = 0;
    virtual nlohmann::json descriptor() const = 0;
};

class ModelTrialSource final : public TrialSource {
   public:
    explicit ModelTrialSource(ExperimentModel model);
    Trial sample(const SettingPair &pair, const WindowContext &ctx, CounterRng &rng) const override;
    nlohmann::json descriptor() const override;
    const ExperimentModel &model() const {
        return model_;
    }

   private:
    ExperimentModel model_;
};

struct TrialRecord {
    std::uint64_t window = 0;
    std::uint32_t pair = 0;  // index into the schedule's pairs
    Outcome a = Outcome::kNone;
    Outcome b = Outcome::kNone;
    double delay_a = 0;
    double delay_b = 0;

    bool operator==(const TrialRecord &) const = default;
};

struct RunMetadata {
    std::uint64_t seed = 0;
    std::uint64_t windows = 0;
    double window_width = 0;
    SettingSchedule schedule;
    nlohmann::json model;
};

nlohmann::json metadata_to_json(const RunMetadata &meta);
RunMetadata metadata_from_json(const nlohmann::json &doc);

struct TrialLog {
    RunMetadata meta;
    std::vector<TrialRecord> records;

    const SettingPair &pair_of(const TrialRecord &r) const {
        return meta.schedule.pairs[r.pair];
    }
};

/// 3x3 count table over Outcome x Outcome.
struct CountTable {
    std::array<std::uint64_t, 9> n{};

    std::uint64_t &at(Outcome a, Outcome b) {
        return n[3 * index_of(a) + index_of(b)];
    }
    std::uint64_t at(Outcome a, Outcome b) const {
        return n[3 * index_of(a) + index_of(b)];
    }
    std::uint64_t total() const;
    /// Windows in which both wings clicked.
    std::uint64_t coincidences() const;
    /// Post-selected view (N++, N+-, N-+, N--).
    std::array<std::uint64_t, 4> two_by_two() const;
    void add(const CountTable &other);

    bool operator==(const CountTable &) const = default;
};

struct CoincidenceCounts {
    std::vector<SettingPair> pairs;
    std::vector<CountTable> tables;

    /// Table for the pair with these labels, or nullptr.
    const CountTable *find(const std::string &x_label, const std::string &y_label) const;
    CountTable &table_for(const SettingPair &pair);
};

/// Runs `windows` windows. Threads shard the window index range; the log does
/// not depend on the thread count.
TrialLog run_experiment(const TrialSource &source, const SettingSchedule &schedule, std::uint64_t windows,
                        double window_width, std::uint64_t seed, unsigned threads = 1);
TrialLog run_experiment(const ExperimentModel &model, const SettingSchedule &schedule, std::uint64_t windows,
                        double window_width, std::uint64_t seed, unsigned threads = 1);

CoincidenceCounts tabulate(const TrialLog &log);

/// Same counts as tabulate(run_experiment(...)) without materializing the log.
CoincidenceCounts run_counts(const TrialSource &source, const SettingSchedule &schedule, std::uint64_t windows,
                             double window_width, std::uint64_t seed, unsigned threads = 1);

/// Minimum post-selected coincidences per pair for a comparison to count.
inline constexpr std::uint64_t kMinCoincidences = 100;

struct ScheduleComparison {
    struct Entry {
        SettingPair pair;
        double e_fast = 0;
        double se_fast = 0;
        std::uint64_t n_fast = 0;
        double e_block = 0;
        double se_block = 0;
        std::uint64_t n_block = 0;
        double z = 0;
        bool underpowered = false;
    };
    std::vector<Entry> entries;
    double chi_square = 0;
    std::size_t dof = 0;
    double p_value = 1;
    bool underpowered = false;
};

/// Runs the same model under FastSwitching (uniform weights) and FixedBlocks
/// with independent seed streams and compares post-selected correlations.
/// z = |E_fast - E_block| / sqrt(se_fast^2 + se_block^2); the pooled statistic
/// is the sum of z^2 over adequately powered pairs.
ScheduleComparison compare_schedules(const TrialSource &source, const std::vector<SettingPair> &pairs,
                                     std::uint64_t windows, double window_width, std::uint64_t seed,
                                     std::uint64_t block_length = kDefaultBlockLength, unsigned threads = 1);

nlohmann::json comparison_to_json(const ScheduleComparison &cmp);

}  // namespace bellsim

#endif
