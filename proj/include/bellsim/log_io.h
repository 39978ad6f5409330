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

#ifndef BELLSIM_LOG_IO_H
#define BELLSIM_LOG_IO_H

// CSV persistence.
//
// Trial logs:   window,setting_a,setting_b,a,b,delay_a,delay_b
// Count tables: setting_a,setting_b,a,b,count   (nine rows per pair, a and b
//               running over -1, 0, 1)
//
// Doubles are written in shortest round-trip form so that a rerun with the
// same seed reproduces the file byte for byte.

#include <iosfwd>
#include <optional>
#include <string>

#include "bellsim/protocol.h"

namespace bellsim {

inline constexpr const char *kLogHeader = "window,setting_a,setting_b,a,b,delay_a,delay_b";
inline constexpr const char *kCountsHeader = "setting_a,setting_b,a,b,count";

/// Formats the log; rows are formatted in parallel shards when threads > 1.
std::string format_log_csv(const TrialLog &log, unsigned threads = 1);
void write_log_csv(const TrialLog &log, std::ostream &out, unsigned threads = 1);

/// Parses a log. With `meta`, pairs are resolved against its schedule (so
/// angles survive); otherwise pairs are collected in order of first
/// appearance with weights set to their observed frequencies. Throws
/// ParseError carrying the 1-based line number.
TrialLog read_log_csv(std::istream &in, const std::optional<RunMetadata> &meta = std::nullopt);

void write_counts_csv(const CoincidenceCounts &counts, std::ostream &out);
CoincidenceCounts read_counts_csv(std::istream &in);

/// Sidecar path for a log: "run.csv" -> "run.json".
std::string metadata_path_for(const std::string &csv_path);

}  // namespace bellsim

#endif
