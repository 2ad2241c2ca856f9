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

#ifndef CQED_VERSION_H
#define CQED_VERSION_H

namespace cqed {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kReportSchema = "cqed-teleport-report/1";

}  // namespace cqed

#endif  // CQED_VERSION_H
