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

#ifndef CQED_VERIFY_H
#define CQED_VERIFY_H

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "cqed/operators.h"

namespace cqed {

struct CheckResult {
    std::string module;
    std::string name;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

/// Implementations under test. Defaults are the library's own; tests swap
/// in broken variants to confirm the checks notice.
struct VerifyHooks {
    std::function<Operator(double gt, std::size_t dim)> jc = jc_unitary;
    std::function<Operator(double alpha, std::size_t dim)> displacement = [](double a, std::size_t d) {
        return cqed::displacement(a, d);
    };
};

/// exp(-i gt (a^dag s- + a s+)) by dense matrix exponential.
Operator jc_oracle(double gt, std::size_t dim);
/// exp(alpha (a^dag - a)) by dense matrix exponential.
Operator displacement_oracle(double alpha, std::size_t dim);

std::vector<std::string> verify_modules();
/// Runs every invariant check of the named module ("" for all). Throws
/// std::invalid_argument for an unknown module name.
std::vector<CheckResult> verify(std::string_view module = "", const VerifyHooks& hooks = {});

}  // namespace cqed

#endif  // CQED_VERIFY_H
