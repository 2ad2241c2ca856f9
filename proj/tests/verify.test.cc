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

#include "cqed/verify.h"

#include <algorithm>

#include <gtest/gtest.h>

using namespace cqed;

namespace {

const CheckResult& find(const std::vector<CheckResult>& rs, const std::string& name) {
    auto it = std::find_if(rs.begin(), rs.end(), [&](const CheckResult& r) { return r.name == name; });
    if (it == rs.end()) throw std::runtime_error("no check " + name);
    return *it;
}

}  // namespace

TEST(verify, all_checks_pass) {
    const auto results = verify();
    EXPECT_GE(results.size(), 25u);
    for (const CheckResult& r : results) {
        EXPECT_TRUE(r.passed) << r.module << "." << r.name << " deviation " << r.max_deviation;
    }
}

TEST(verify, filter_by_module) {
    for (const std::string& m : verify_modules()) {
        const auto results = verify(m);
        EXPECT_FALSE(results.empty()) << m;
        for (const CheckResult& r : results) EXPECT_EQ(r.module, m);
    }
    EXPECT_THROW(verify("nonsense"), std::invalid_argument);
}

TEST(verify, catches_jc_sign_error) {
    VerifyHooks broken;
    broken.jc = [](double gt, std::size_t dim) { return jc_unitary(-gt, dim); };
    const auto results = verify("operators", broken);
    EXPECT_FALSE(find(results, "jc_vs_expm").passed);
    EXPECT_TRUE(find(results, "unitarity").passed);
}

TEST(verify, catches_displacement_error) {
    VerifyHooks broken;
    broken.displacement = [](double a, std::size_t dim) { return displacement(-a, dim); };
    const auto results = verify("operators", broken);
    EXPECT_FALSE(find(results, "displacement_vs_expm").passed);
    EXPECT_FALSE(find(results, "displacement_vs_coherent").passed);
}

TEST(verify, oracles_agree_with_closed_forms) {
    for (std::size_t d : {2u, 5u, 12u}) {
        EXPECT_LT((jc_oracle(1.3, d).matrix() - jc_unitary(1.3, d).matrix()).cwiseAbs().maxCoeff(), 1e-12);
    }
    EXPECT_LT((displacement_oracle(0.9, 20).matrix() - displacement(0.9, 20).matrix()).cwiseAbs().maxCoeff(), 1e-12);
}
