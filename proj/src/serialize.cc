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

#include "bellsim/serialize.h"

#include "bellsim/errors.h"

namespace bellsim {

using nlohmann::json;

namespace {

json weights_to_json(const std::vector<double> &weights) {
    json out = json::array();
    for (std::size_t k = 0; k < weights.size(); k++) {
        out.push_back({{"index", k}, {"weight", weights[k]}});
    }
    return out;
}

json source_to_json(const FiniteSource &source) {
    json weights = json::array();
    for (std::size_t i = 0; i < source.n1; i++) {
        for (std::size_t j = 0; j < source.n2; j++) {
            weights.push_back({{"index", {i, j}}, {"weight", source.weight(i, j)}});
        }
    }
    return {{"kind", "FiniteJoint"}, {"lambda1", source.n1}, {"lambda2", source.n2}, {"weights", weights}};
}

const json &field(const json &doc, const char *name) {
    if (!doc.is_object() || !doc.contains(name)) {
        throw ValidationError(std::string("model document: missing field '") + name + "'");
    }
    return doc.at(name);
}

std::vector<double> weights_from_json(const json &arr) {
    if (!arr.is_array()) {
        throw ValidationError("model document: distribution must be an array");
    }
    std::vector<double> weights(arr.size(), 0.0);
    std::vector<bool> seen(arr.size(), false);
    for (const auto &entry : arr) {
        auto k = field(entry, "index").get<std::size_t>();
        if (k >= weights.size() || seen[k]) {
            throw ValidationError("model document: bad or repeated distribution index");
        }
        seen[k] = true;
        weights[k] = field(entry, "weight").get<double>();
    }
    return weights;
}

FiniteSource source_from_json(const json &doc) {
    if (field(doc, "kind") != "FiniteJoint") {
        throw ValidationError("model document: finite families need a FiniteJoint source");
    }
    FiniteSource source;
    source.n1 = field(doc, "lambda1").get<std::size_t>();
    source.n2 = field(doc, "lambda2").get<std::size_t>();
    source.weights.assign(source.n1 * source.n2, 0.0);
    for (const auto &entry : field(doc, "weights")) {
        const auto &idx = field(entry, "index");
        if (!idx.is_array() || idx.size() != 2) {
            throw ValidationError("model document: source index must be [i, j]");
        }
        auto i = idx[0].get<std::size_t>();
        auto j = idx[1].get<std::size_t>();
        if (i >= source.n1 || j >= source.n2) {
            throw ValidationError("model document: source index out of range");
        }
        source.weights[i * source.n2 + j] = field(entry, "weight").get<double>();
    }
    return source;
}

json outcome_rows(const std::vector<Outcome> &flat, std::size_t cols) {
    json rows = json::array();
    for (std::size_t start = 0; start < flat.size(); start += cols) {
        json row = json::array();
        for (std::size_t k = 0; k < cols; k++) {
            row.push_back(value_of(flat[start + k]));
        }
        rows.push_back(row);
    }
    return rows;
}

json double_rows(const std::vector<double> &flat, std::size_t cols) {
    json rows = json::array();
    for (std::size_t start = 0; start < flat.size(); start += cols) {
        rows.push_back(std::vector<double>(flat.begin() + start, flat.begin() + start + cols));
    }
    return rows;
}

template <typename T, typename F>
std::vector<T> flatten(const json &rows, F convert) {
    std::vector<T> out;
    if (!rows.is_array()) {
        throw ValidationError("model document: table must be an array of rows");
    }
    for (const auto &row : rows) {
        if (!row.is_array()) {
            throw ValidationError("model document: table row must be an array");
        }
        for (const auto &v : row) {
            out.push_back(convert(v));
        }
    }
    return out;
}

Outcome outcome_json(const json &v) {
    return outcome_from_int(v.get<int>());
}

void expect_builtin(const json &resp, const char *name) {
    if (field(resp, "builtin") != name) {
        throw ValidationError(std::string("model document: expected response builtin '") + name + "'");
    }
}

json to_json_impl(const ContextualProductModel &m) {
    json instruments = {{"A", json::object()}, {"B", json::object()}};
    json responses = {{"A", json::object()}, {"B", json::object()}};
    auto side = [&](const std::map<std::string, ContextualResponse> &map, const char *name) {
        for (const auto &[label, resp] : map) {
            instruments[name][label] = weights_to_json(resp.instrument.weights);
            json r = {{"builtin", "table"}, {"outcomes", outcome_rows(resp.outcomes, resp.instrument.size())}};
            if (!resp.delays.empty()) {
                r["delays"] = double_rows(resp.delays, resp.instrument.size());
            }
            responses[name][label] = r;
        }
    };
    side(m.alice, "A");
    side(m.bob, "B");
    return {{"family", "ContextualProduct"},
            {"source", source_to_json(m.source)},
            {"instruments", instruments},
            {"responses", responses}};
}

ContextualProductModel product_from_json(const json &doc) {
    ContextualProductModel m;
    m.source = source_from_json(field(doc, "source"));
    const json &instruments = field(doc, "instruments");
    const json &responses = field(doc, "responses");
    auto side = [&](std::map<std::string, ContextualResponse> &map, const char *name) {
        for (const auto &[label, resp] : field(responses, name).items()) {
            expect_builtin(resp, "table");
            ContextualResponse r;
            r.instrument.weights = weights_from_json(field(field(instruments, name), label.c_str()));
            r.outcomes = flatten<Outcome>(field(resp, "outcomes"), outcome_json);
            if (resp.contains("delays")) {
                r.delays = flatten<double>(resp["delays"], [](const json &v) { return v.get<double>(); });
            }
            map[label] = std::move(r);
        }
    };
    side(m.alice, "A");
    side(m.bob, "B");
    return m;
}

json to_json_impl(const ContextualFittedModel &m) {
    json pairs = json::array();
    for (const auto &[key, table] : m.targets) {
        json rows = json::array();
        for (std::size_t a = 0; a < 3; a++) {
            rows.push_back({table.p[3 * a], table.p[3 * a + 1], table.p[3 * a + 2]});
        }
        pairs.push_back({{"x", key.first}, {"y", key.second}, {"target", rows}});
    }
    return {{"family", "ContextualFitted"}, {"pairs", pairs}, {"responses", {{"builtin", "copy"}}}};
}

ContextualFittedModel fitted_from_json(const json &doc) {
    ContextualFittedModel m;
    for (const auto &entry : field(doc, "pairs")) {
        auto flat = flatten<double>(field(entry, "target"), [](const json &v) { return v.get<double>(); });
        if (flat.size() != 9) {
            throw ValidationError("model document: fitted target must be 3x3");
        }
        JointOutcomeDist t;
        std::copy(flat.begin(), flat.end(), t.p.begin());
        m.targets[{field(entry, "x").get<std::string>(), field(entry, "y").get<std::string>()}] = t;
    }
    return m;
}

json to_json_impl(const ShvModel &m) {
    json responses = {{"A", json::object()}, {"B", json::object()}};
    auto side = [&](const std::map<std::string, ShvResponse> &map, const char *name) {
        for (const auto &[label, resp] : map) {
            json rows = json::array();
            for (const auto &row : resp.probs) {
                rows.push_back(row);
            }
            responses[name][label] = {{"builtin", "stochastic-table"}, {"probs", rows}};
        }
    };
    side(m.alice, "A");
    side(m.bob, "B");
    return {{"family", "SHV"}, {"source", source_to_json(m.source)}, {"responses", responses}};
}

ShvModel shv_from_json(const json &doc) {
    ShvModel m;
    m.source = source_from_json(field(doc, "source"));
    const json &responses = field(doc, "responses");
    auto side = [&](std::map<std::string, ShvResponse> &map, const char *name) {
        for (const auto &[label, resp] : field(responses, name).items()) {
            expect_builtin(resp, "stochastic-table");
            ShvResponse r;
            for (const auto &row : field(resp, "probs")) {
                if (!row.is_array() || row.size() != 3) {
                    throw ValidationError("model document: SHV response rows need three probabilities");
                }
                r.probs.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
            }
            map[label] = std::move(r);
        }
    };
    side(m.alice, "A");
    side(m.bob, "B");
    return m;
}

json to_json_impl(const LrhvModel &m) {
    json responses = {{"A", json::object()}, {"B", json::object()}};
    auto side = [&](const std::map<std::string, std::vector<Outcome>> &map, const char *name) {
        for (const auto &[label, values] : map) {
            json v = json::array();
            for (Outcome o : values) {
                v.push_back(value_of(o));
            }
            responses[name][label] = {{"builtin", "deterministic"}, {"values", v}};
        }
    };
    side(m.alice, "A");
    side(m.bob, "B");
    return {{"family", "LRHV"}, {"source", source_to_json(m.source)}, {"responses", responses}};
}

LrhvModel lrhv_from_json(const json &doc) {
    LrhvModel m;
    m.source = source_from_json(field(doc, "source"));
    const json &responses = field(doc, "responses");
    auto side = [&](std::map<std::string, std::vector<Outcome>> &map, const char *name) {
        for (const auto &[label, resp] : field(responses, name).items()) {
            expect_builtin(resp, "deterministic");
            std::vector<Outcome> values;
            for (const auto &v : field(resp, "values")) {
                values.push_back(outcome_json(v));
            }
            map[label] = std::move(values);
        }
    };
    side(m.alice, "A");
    side(m.bob, "B");
    return m;
}

json to_json_impl(const CoincidenceModel &m) {
    return {{"family", "ContextualProduct"},
            {"source", {{"kind", "ContinuousShared"}, {"sampler", "uniform-angle"}}},
            {"instruments", {{"kind", "uniform-unit"}}},
            {"responses",
             {{"builtin", "sign-cos2-delay"}, {"delay_exponent", m.delay_exponent}, {"max_delay", m.max_delay}}}};
}

}  // namespace

json model_to_json(const ExperimentModel &model) {
    return std::visit([](const auto &m) { return to_json_impl(m); }, model);
}

ExperimentModel model_from_json(const json &doc) {
    ExperimentModel model;
    try {
        std::string family = field(doc, "family").get<std::string>();
        if (family == "ContextualProduct") {
            if (field(doc, "source").value("kind", "") == "ContinuousShared") {
                const json &resp = field(doc, "responses");
                expect_builtin(resp, "sign-cos2-delay");
                model = CoincidenceModel{field(resp, "delay_exponent").get<double>(),
                                         field(resp, "max_delay").get<double>()};
            } else {
                model = product_from_json(doc);
            }
        } else if (family == "ContextualFitted") {
            model = fitted_from_json(doc);
        } else if (family == "SHV") {
            model = shv_from_json(doc);
        } else if (family == "LRHV") {
            model = lrhv_from_json(doc);
        } else {
            throw ValidationError("model document: unknown family '" + family + "'");
        }
    } catch (const json::exception &e) {
        throw ValidationError(std::string("model document: ") + e.what());
    }
    validate(model);
    return model;
}

}  // namespace bellsim
