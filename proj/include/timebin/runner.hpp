// Copyright 2026 The timebin-lab Authors
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

#include <ostream>
#include <string>

#include "timebin/config.hpp"

namespace timebin::cli {

inline constexpr int kSchemaVersion = 1;

/// Runs the configured experiment and returns the result file contents.
/// Deterministic in (config, seed).
std::string render(const RunConfig& config);

/// render() then write to config.output_path. Returns 0 on success; on
/// failure writes a diagnostic to `diagnostics` and returns nonzero.
int run(const RunConfig& config, std::ostream& diagnostics);

}  // namespace timebin::cli
