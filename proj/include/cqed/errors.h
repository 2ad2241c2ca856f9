// Copyright 2026 The cqedtel Authors
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

#ifndef CQED_ERRORS_H
#define CQED_ERRORS_H

#include <stdexcept>
#include <string>

namespace cqed {

/// Index or dimension outside the truncated space.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Fock truncation too small for the requested amplitude and tolerance.
struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A normalization constant vanishes (odd cat at alpha -> 0).
struct DegenerateAmplitudeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Two states or an operator and a state live on incompatible layouts.
struct LayoutMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Selected measurement outcome has (numerically) zero probability.
struct PostSelectionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Measurement requested on a subsystem that cannot be detected directly.
struct UnsupportedMeasurement : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Malformed or inconsistent experiment configuration.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace cqed

#endif  // CQED_ERRORS_H
