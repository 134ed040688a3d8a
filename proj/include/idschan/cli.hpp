// SPDX-License-Identifier: Apache-2.0
//
// idschan: mmWave channel toolkit for indoor dense spaces
// Copyright (C) 2026 The idschan authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace idschan::cli {

inline constexpr std::uint64_t kDefaultSeed = 20220601;
inline constexpr const char* kSeedEnv = "IDS_CHAN_SEED";

struct RunConfig {
    std::string subcommand;
    std::optional<std::filesystem::path> in;
    std::optional<std::filesystem::path> out;
    std::optional<std::string> preset;           // trace / gen
    std::optional<std::filesystem::path> scene;  // trace
    std::vector<std::string> presets;            // ber
    std::string condition = "LOS";
    std::string ebn0 = "0:2:30";
    std::uint64_t bits = 1000000;
    std::uint64_t seed = kDefaultSeed;
    unsigned threads = 0;
    std::map<std::string, std::string> overrides;
};

// Each command validates its inputs before writing anything.
void cmd_trace(const RunConfig& cfg, std::ostream& log);
void cmd_extract(const RunConfig& cfg, std::ostream& log);
void cmd_gen(const RunConfig& cfg, std::ostream& log);
void cmd_rssi(const RunConfig& cfg, std::ostream& log);
void cmd_ber(const RunConfig& cfg, std::ostream& log);
void cmd_presets(const RunConfig& cfg, std::ostream& log);

/// Parses "start:step:stop" (inclusive) or a single value.
std::vector<double> parse_grid(const std::string& spec);

/// Full command line entry point; returns the process exit code. Failures
/// print a single "error: <kind>: <message>" line on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace idschan::cli
