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

#include "bellsim/rng.h"

namespace bellsim {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    return mix64(seed ^ mix64(salt + kGolden));
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t counter, RngStream stream) {
    std::uint64_t k = mix64(seed + kGolden);
    k = mix64(k ^ (counter * kGolden + 0x632BE59BD9B4E019ULL));
    k = mix64(k ^ (static_cast<std::uint64_t>(stream) * 0xD1B54A32D192ED03ULL));
    state_ = k;
}

CounterRng::result_type CounterRng::operator()() {
    state_ += kGolden;
    return mix64(state_);
}

double CounterRng::uniform() {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

std::size_t CounterRng::discrete(std::span<const double> weights) {
    double total = 0;
    for (double w : weights) {
        total += w;
    }
    double u = uniform() * total;
    double acc = 0;
    for (std::size_t k = 0; k < weights.size(); k++) {
        acc += weights[k];
        if (u < acc) {
            return k;
        }
    }
    // Rounding can leave u just above the last partial sum.
    for (std::size_t k = weights.size(); k-- > 0;) {
        if (weights[k] > 0) {
            return k;
        }
    }
    return 0;
}

}  // namespace bellsim
