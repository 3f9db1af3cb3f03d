// Copyright 2026 The wbqc Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace wbqc {

/// Bad argument to a public operation (out-of-range index, non-finite angle, ...).
struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A projection was forced onto an outcome of zero Born probability.
struct ZeroProbabilityBranch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Crosstalk matrix too close to singular to trust the solve.
struct IllConditioned : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Problem too large for the exact state-vector simulator.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A zig-zag layout that violates the link geometry rules.
struct InvalidLayout : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Ran out of chain qubits before the Euler rotations were completed.
struct ChainExhausted : std::runtime_error {
    ChainExhausted(const std::string &what, int depth) : std::runtime_error(what), correction_depth(depth) {}
    int correction_depth;
};

/// Observations that cannot happen under the simulator's own model.
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace wbqc
