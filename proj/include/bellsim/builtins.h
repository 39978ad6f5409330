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

#ifndef BELLSIM_BUILTINS_H
#define BELLSIM_BUILTINS_H

#include <string>
#include <vector>

#include "bellsim/models.h"
#include "vendor_json.h"

namespace bellsim {

/// The four analyzer settings used throughout: a = 0, a' = pi/4 on Alice's
/// side and b = pi/8, b' = 3pi/8 on Bob's. Labels "a", "a'", "b", "b'".
struct ChshSettings {
    Setting a;
    Setting a2;
    Setting b;
    Setting b2;
};

ChshSettings chsh_settings();

/// (a,b), (a,b'), (a',b), (a',b') with weight 1/4 each.
std::vector<SettingPair> chsh_pairs();

/// Fitted model reproducing the singlet table at every given pair.
ContextualFittedModel singlet_fit_model(const std::vector<SettingPair> &pairs);

/// Small finite instances over the labels a, a', b, b'. Zero delays.
ContextualProductModel demo_product_model();
ShvModel demo_shv_model();
LrhvModel demo_lrhv_model();

/// Built-in model by name: "coincidence" (params "d", "t0"), "singlet-fit",
/// "product-demo", "shv-demo", "lrhv-demo". Throws ValidationError for
/// unknown names or bad parameters.
ExperimentModel builtin_model(const std::string &name, const nlohmann::json &params = nlohmann::json::object());

std::vector<std::string> builtin_model_names();

}  // namespace bellsim

#endif
