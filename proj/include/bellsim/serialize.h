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

#ifndef BELLSIM_SERIALIZE_H
#define BELLSIM_SERIALIZE_H

#include "bellsim/models.h"
#include "bellsim/vendor_json.h"

namespace bellsim {

// Model documents:
//
//   {"family": "ContextualProduct" | "ContextualFitted" | "SHV" | "LRHV",
//    "source": {"kind": "FiniteJoint", "lambda1": n1, "lambda2": n2,
//               "weights": [{"index": [i, j], "weight": w}, ...]},
//    "instruments": {"A": {label: [{"index": k, "weight": w}, ...]}, "B": {...}},
//    "responses": {"A": {label: {"builtin": ..., ...}}, "B": {...}}}
//
// Response built-ins: "table" (contextual: "outcomes"[l][k], optional
// "delays"[l][k]), "stochastic-table" (SHV: "probs"[l] = [p-, p0, p+]),
// "deterministic" (LRHV: "values"[l]). Fitted models list
// {"x", "y", "target": 3x3} under "pairs" with the "copy" response. The
// coincidence model uses a "ContinuousShared" source and the
// "sign-cos2-delay" response with "delay_exponent" and "max_delay".

nlohmann::json model_to_json(const ExperimentModel &model);

/// Throws ValidationError on schema errors and on invalid models.
ExperimentModel model_from_json(const nlohmann::json &doc);

}  // namespace bellsim

#endif
