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

#ifndef BELLSIM_ERRORS_H
#define BELLSIM_ERRORS_H

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bellsim {

/// Malformed or unnormalized input: bad weights, out-of-range outcomes,
/// invalid schedules.
class ValidationError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// The request is well formed but outside what the operation supports
/// (exact summation of a continuous model, LP with too many variables).
class CapabilityError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A setting or setting pair that the model does not know about.
class LookupError : public std::out_of_range {
   public:
    using std::out_of_range::out_of_range;
};

/// Conditioning on a zero-probability event.
class UndefinedConditionalError : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

/// A text input (CSV or JSON) that could not be parsed. `line` is 1-based,
/// 0 when unknown.
class ParseError : public std::runtime_error {
   public:
    ParseError(const std::string &what, std::size_t line)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {
    }
    std::size_t line() const {
        return line_;
    }

   private:
    std::size_t line_;
};

}  // namespace bellsim

#endif
