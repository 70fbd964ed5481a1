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

#include <iostream>

#include "CLI11.hpp"
#include "ghzqkd/cli.hpp"

int main(int argc, char** argv) {
    using namespace ghzqkd::cli;

    CLI::App app{"Three-party GHZ authentication and key distribution simulator"};
    app.require_subcommand(1);

    std::string registry_path, user, secret_hex, hash_id = "sha256";
    auto* reg = app.add_subcommand("register", "Register a user identity with the trusted party");
    reg->add_option("--registry", registry_path, "Registry JSON file")->required();
    reg->add_option("--user", user, "User name")->required();
    reg->add_option("--secret", secret_hex, "Secret identity, hex encoded")->required();
    reg->add_option("--hash", hash_id, "Hash construction (sha256 or test)");

    std::string config_path;
    uint64_t seed = 0;
    std::string out_path, run_registry;
    auto* run = app.add_subcommand("run", "Run one authentication + key distribution session");
    run->add_option("--config", config_path, "Run configuration JSON")->required();
    auto* run_seed = run->add_option("--seed", seed, "Override the master seed");
    auto* run_out = run->add_option("--out", out_path, "SessionResult JSON output path");
    auto* run_reg = run->add_option("--registry", run_registry, "Override the registry path");

    std::vector<double> thetas;
    uint64_t trials = 0;
    std::string sweep_out;
    uint64_t sweep_seed = 0;
    auto* sweep = app.add_subcommand("sweep", "Exact / closed-form / Monte Carlo detection sweep over theta");
    sweep->add_option("--config", config_path, "Run configuration JSON")->required();
    sweep->add_option("--theta", thetas, "Attack angle in radians (repeatable)");
    auto* sweep_trials = sweep->add_option("--trials", trials, "Monte Carlo trials per theta");
    auto* sweep_seed_opt = sweep->add_option("--seed", sweep_seed, "Override the master seed");
    auto* sweep_out_opt = sweep->add_option("--out", sweep_out, "CSV output path");

    std::string table_out;
    auto* table = app.add_subcommand("table1", "Print the exact outcome table for the four operation pairs");
    auto* table_out_opt = table->add_option("--out", table_out, "Also write the table as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsageError;
    }

    if (*reg) {
        return cmd_register(registry_path, user, secret_hex, hash_id, std::cout, std::cerr);
    }
    if (*run) {
        RunOverrides o;
        if (*run_seed) o.seed = seed;
        if (*run_out) o.out = out_path;
        if (*run_reg) o.registry = run_registry;
        return cmd_run(config_path, o, std::cout, std::cerr);
    }
    if (*sweep) {
        SweepOverrides o;
        o.thetas = thetas;
        if (*sweep_trials) o.trials = trials;
        if (*sweep_seed_opt) o.seed = sweep_seed;
        if (*sweep_out_opt) o.out = sweep_out;
        return cmd_sweep(config_path, o, std::cout, std::cerr);
    }
    std::optional<std::filesystem::path> json_out;
    if (*table_out_opt) json_out = table_out;
    return cmd_table1(json_out, std::cout, std::cerr);
}
