// Copyright 2026 The ghzqkd Authors
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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ghzqkd/oracle.hpp"
#include "ghzqkd/protocol.hpp"

namespace ghzqkd::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kInternalError = 1,
    kUsageError = 2,
    kConfigError = 3,
    kRegistryError = 4,
    kIoError = 5,
    kAbortedAuth = 10,
    kAbortedKd = 11,
};

struct SweepConfig {
    DetectionMode mode = DetectionMode::Auth;
    std::vector<double> thetas;
    uint64_t trials = 100000;
    std::filesystem::path output;
};

/// Parsed run configuration file. Relative paths are resolved against the directory that
/// holds the configuration file.
struct RunConfig {
    SessionConfig session;
    ProbeMode probe_mode = ProbeMode::Orthonormal;
    std::filesystem::path registry;
    std::filesystem::path output;
    std::optional<SweepConfig> sweep;
};

/// Validates the document against the schema (unknown fields are rejected) and the session
/// invariants. Throws ConfigError.
RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

int cmd_register(const std::filesystem::path& registry, const std::string& user, const std::string& secret_hex,
                 const std::string& hash_id, std::ostream& out, std::ostream& err);

struct RunOverrides {
    std::optional<uint64_t> seed;
    std::optional<std::filesystem::path> out;
    std::optional<std::filesystem::path> registry;
};

/// Runs one session and writes the SessionResult JSON. Exit code reflects the phase reached.
int cmd_run(const std::filesystem::path& config, const RunOverrides& overrides, std::ostream& out, std::ostream& err);

struct SweepOverrides {
    std::vector<double> thetas;
    std::optional<uint64_t> trials;
    std::optional<uint64_t> seed;
    std::optional<std::filesystem::path> out;
};

/// One CSV row per theta: theta,exact,closed_form,mc_estimate,se,trials
int cmd_sweep(const std::filesystem::path& config, const SweepOverrides& overrides, std::ostream& out,
              std::ostream& err);

/// Writes the sweep CSV for an explicit setup; used by cmd_sweep and the Python module.
std::string sweep_csv(DetectionMode mode, ProbeMode probe_mode, AttackPlacement auth_placement,
                      const std::vector<double>& thetas, uint64_t trials, uint64_t seed);

/// Prints the four exact outcome distributions; also writes JSON when `json_out` is set.
int cmd_table1(const std::optional<std::filesystem::path>& json_out, std::ostream& out, std::ostream& err);

nlohmann::ordered_json table1_json();

}  // namespace ghzqkd::cli
