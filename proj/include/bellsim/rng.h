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

#ifndef BELLSIM_RNG_H
#define BELLSIM_RNG_H

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>

namespace bellsim {

/// Stream identifiers. Each consumer of randomness within a window draws from
/// its own stream so that adding draws to one never shifts another.
enum class RngStream : std::uint64_t {
    kSchedule = 1,
    kTrial = 2,
    kReplication = 3,
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Derives a child seed; used to give independent runs disjoint streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

/// Counter-based generator. The state is a pure function of
/// (seed, counter, stream), so window i of a run can be simulated without
/// touching windows 0..i-1. That is what makes sharded runs reproduce the
/// single-threaded log exactly.
///
/// Satisfies UniformRandomBitGenerator.
class CounterRng {
   public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t counter, RngStream stream = RngStream::kTrial);

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()();

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();

    /// Index drawn from nonnegative `weights` (need not be normalized).
    std::size_t discrete(std::span<const double> weights);

   private:
    std::uint64_t state_;
};

}  // namespace bellsim

#endif
