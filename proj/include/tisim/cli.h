// Copyright 2026 The tisim Authors
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

#ifndef TISIM_CLI_H
#define TISIM_CLI_H

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace tisim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitPathological = 2;

enum class OutputFormat { Text, Json, Csv };

struct RunConfig {
    std::filesystem::path scenario_path;
    std::filesystem::path ensemble_path;
    std::size_t trials = 10000;
    uint64_t seed = 42;
    OutputFormat format = OutputFormat::Text;
    std::optional<std::filesystem::path> out;
    bool records = false;  // run: include per-trial records in JSON
    unsigned threads = 1;
};

// Each command writes its report to config.out (or `out`) and diagnostics to
// `err`, and returns the process exit status.
int cmd_check(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_run(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_ledger(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_compare(const RunConfig &config, std::ostream &out, std::ostream &err);

/// Parses `args` (args[0] is the program name) and dispatches.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace tisim::cli

#endif  // TISIM_CLI_H
