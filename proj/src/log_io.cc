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

#include "bellsim/log_io.h"

#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <thread>
#include <vector>

#include "bellsim/errors.h"

namespace bellsim {

namespace {

void append_double(std::string &out, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

void append_uint(std::string &out, std::uint64_t v) {
    char buf[24];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

void check_label(const std::string &label) {
    if (label.empty() || label.find_first_of(",\"\r\n") != std::string::npos) {
        throw ValidationError("setting label '" + label + "' cannot be written to CSV");
    }
}

void format_rows(const TrialLog &log, std::size_t begin, std::size_t end, std::string &out) {
    for (std::size_t k = begin; k < end; k++) {
        const auto &r = log.records[k];
        const auto &p = log.pair_of(r);
        append_uint(out, r.window);
        out += ',';
        out += p.x.label;
        out += ',';
        out += p.y.label;
        out += ',';
        out += std::to_string(value_of(r.a));
        out += ',';
        out += std::to_string(value_of(r.b));
        out += ',';
        append_double(out, r.delay_a);
        out += ',';
        append_double(out, r.delay_b);
        out += '\n';
    }
}

std::vector<std::string> split(const std::string &line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

template <typename T>
T parse_number(const std::string &s, std::size_t line, const char *what) {
    T v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ParseError(std::string("bad ") + what + " '" + s + "'", line);
    }
    return v;
}

Outcome parse_outcome(const std::string &s, std::size_t line) {
    int v = parse_number<int>(s, line, "outcome");
    if (v < -1 || v > 1) {
        throw ParseError("outcome must be -1, 0 or 1", line);
    }
    return static_cast<Outcome>(v);
}

void strip_cr(std::string &line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
}

}  // namespace

std::string format_log_csv(const TrialLog &log, unsigned threads) {
    for (const auto &p : log.meta.schedule.pairs) {
        check_label(p.x.label);
        check_label(p.y.label);
    }
    std::size_t n = log.records.size();
    threads = std::max(1u, threads);
    if (n < 2 * threads) {
        threads = 1;
    }
    std::vector<std::string> parts(threads);
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < threads; t++) {
        std::size_t begin = n * t / threads;
        std::size_t end = n * (t + 1) / threads;
        auto job = [&log, &parts, begin, end, t] {
            parts[t].reserve((end - begin) * 48);
            format_rows(log, begin, end, parts[t]);
        };
        if (threads == 1) {
            job();
        } else {
            workers.emplace_back(job);
        }
    }
    for (auto &w : workers) {
        w.join();
    }
    std::string out = std::string(kLogHeader) + "\n";
    for (const auto &part : parts) {
        out += part;
    }
    return out;
}

void write_log_csv(const TrialLog &log, std::ostream &out, unsigned threads) {
    out << format_log_csv(log, threads);
}

TrialLog read_log_csv(std::istream &in, const std::optional<RunMetadata> &meta) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) {
        throw ParseError("empty log file", 1);
    }
    strip_cr(line);
    if (line != kLogHeader) {
        throw ParseError("unexpected header, want '" + std::string(kLogHeader) + "'", 1);
    }

    TrialLog log;
    std::map<PairKey, std::uint32_t> index;
    if (meta) {
        log.meta = *meta;
        for (std::size_t k = 0; k < meta->schedule.pairs.size(); k++) {
            index[key_of(meta->schedule.pairs[k])] = static_cast<std::uint32_t>(k);
        }
    }
    std::vector<std::uint64_t> seen_per_pair;
    bool have_prev = false;
    std::uint64_t prev = 0;
    while (std::getline(in, line)) {
        line_no++;
        strip_cr(line);
        if (line.empty()) {
            continue;
        }
        auto f = split(line);
        if (f.size() != 7) {
            throw ParseError("expected 7 fields, got " + std::to_string(f.size()), line_no);
        }
        TrialRecord r;
        r.window = parse_number<std::uint64_t>(f[0], line_no, "window index");
        if (have_prev && r.window <= prev) {
            throw ParseError("window indices must strictly increase", line_no);
        }
        have_prev = true;
        prev = r.window;
        if (f[1].empty() || f[2].empty()) {
            throw ParseError("empty setting label", line_no);
        }
        PairKey key{f[1], f[2]};
        auto it = index.find(key);
        if (it == index.end()) {
            if (meta) {
                throw ParseError("pair (" + f[1] + ", " + f[2] + ") not in the run's schedule", line_no);
            }
            it = index.emplace(key, static_cast<std::uint32_t>(log.meta.schedule.pairs.size())).first;
            log.meta.schedule.pairs.push_back(
                SettingPair{Setting{Side::kA, 0.0, f[1]}, Setting{Side::kB, 0.0, f[2]}, 0.0});
        }
        r.pair = it->second;
        r.a = parse_outcome(f[3], line_no);
        r.b = parse_outcome(f[4], line_no);
        r.delay_a = parse_number<double>(f[5], line_no, "delay");
        r.delay_b = parse_number<double>(f[6], line_no, "delay");
        if (!(r.delay_a >= 0) || !(r.delay_b >= 0)) {
            throw ParseError("delays must be nonnegative", line_no);
        }
        if (seen_per_pair.size() <= r.pair) {
            seen_per_pair.resize(r.pair + 1, 0);
        }
        seen_per_pair[r.pair]++;
        log.records.push_back(r);
    }
    if (!meta) {
        log.meta.windows = log.records.size();
        for (std::size_t k = 0; k < log.meta.schedule.pairs.size(); k++) {
            log.meta.schedule.pairs[k].weight =
                static_cast<double>(seen_per_pair[k]) / static_cast<double>(log.records.size());
        }
    }
    return log;
}

void write_counts_csv(const CoincidenceCounts &counts, std::ostream &out) {
    std::string s = std::string(kCountsHeader) + "\n";
    for (std::size_t k = 0; k < counts.pairs.size(); k++) {
        check_label(counts.pairs[k].x.label);
        check_label(counts.pairs[k].y.label);
        for (Outcome a : kAllOutcomes) {
            for (Outcome b : kAllOutcomes) {
                s += counts.pairs[k].x.label + "," + counts.pairs[k].y.label + "," + std::to_string(value_of(a)) +
                     "," + std::to_string(value_of(b)) + ",";
                append_uint(s, counts.tables[k].at(a, b));
                s += '\n';
            }
        }
    }
    out << s;
}

CoincidenceCounts read_counts_csv(std::istream &in) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) {
        throw ParseError("empty counts file", 1);
    }
    strip_cr(line);
    if (line != kCountsHeader) {
        throw ParseError("unexpected header, want '" + std::string(kCountsHeader) + "'", 1);
    }
    CoincidenceCounts counts;
    while (std::getline(in, line)) {
        line_no++;
        strip_cr(line);
        if (line.empty()) {
            continue;
        }
        auto f = split(line);
        if (f.size() != 5) {
            throw ParseError("expected 5 fields, got " + std::to_string(f.size()), line_no);
        }
        SettingPair pair{Setting{Side::kA, 0.0, f[0]}, Setting{Side::kB, 0.0, f[1]}, 0.0};
        Outcome a = parse_outcome(f[2], line_no);
        Outcome b = parse_outcome(f[3], line_no);
        counts.table_for(pair).at(a, b) += parse_number<std::uint64_t>(f[4], line_no, "count");
    }
    return counts;
}

std::string metadata_path_for(const std::string &csv_path) {
    auto dot = csv_path.find_last_of('.');
    auto slash = csv_path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return csv_path + ".json";
    }
    return csv_path.substr(0, dot) + ".json";
}

}  // namespace bellsim
