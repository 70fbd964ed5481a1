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

#include "ghzqkd/cli.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "ghzqkd/errors.hpp"

namespace ghzqkd::cli {

namespace {

using json = nlohmann::json;

class IoError : public Error {
  public:
    using Error::Error;
};

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view where) {
    if (!obj.is_object()) {
        throw ConfigError(std::string(where) + " must be a JSON object");
    }
    const std::set<std::string_view> ok(allowed);
    for (const auto& [key, _] : obj.items()) {
        if (!ok.contains(key)) {
            throw ConfigError("unknown field '" + key + "' in " + std::string(where));
        }
    }
}

Complex parse_complex(const json& j) {
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (!j.is_array() || j.size() != 2) {
        throw ConfigError("complex values are written as [re, im]");
    }
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

ProbeVector parse_probe(const json& j) {
    if (!j.is_array()) {
        throw ConfigError("probe vectors are arrays of [re, im] pairs");
    }
    ProbeVector v;
    for (const auto& c : j) {
        v.push_back(parse_complex(c));
    }
    return v;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

AttackSpec parse_attack(const json& j, ProbeMode& mode_out) {
    reject_unknown(j,
                   {"theta", "probe_mode", "placement", "alpha", "beta", "alpha_prime", "beta_prime", "e00", "e01",
                    "e10", "e11", "initial_probe"},
                   "attack");
    AttackSpec spec;
    spec.placement = parse_placement(j.at("placement").get<std::string>());
    mode_out = parse_probe_mode(j.value("probe_mode", std::string("orthonormal")));
    if (mode_out == ProbeMode::Custom) {
        AttackParams p;
        if (j.contains("theta")) {
            p = make_attack(j.at("theta").get<double>(), ProbeMode::Orthonormal);
        }
        if (j.contains("alpha")) p.alpha = parse_complex(j.at("alpha"));
        if (j.contains("beta")) p.beta = parse_complex(j.at("beta"));
        if (j.contains("alpha_prime")) p.alpha_prime = parse_complex(j.at("alpha_prime"));
        if (j.contains("beta_prime")) p.beta_prime = parse_complex(j.at("beta_prime"));
        p.e00 = parse_probe(j.at("e00"));
        p.e01 = parse_probe(j.at("e01"));
        p.e10 = parse_probe(j.at("e10"));
        p.e11 = parse_probe(j.at("e11"));
        p.initial_probe = parse_probe(j.at("initial_probe"));
        spec.params = std::move(p);
    } else {
        for (auto field : {"alpha", "beta", "alpha_prime", "beta_prime", "e00", "e01", "e10", "e11", "initial_probe"}) {
            if (j.contains(field)) {
                throw ConfigError(std::string("field '") + field + "' requires probe_mode \"custom\"");
            }
        }
        spec.params = make_attack(j.at("theta").get<double>(), mode_out);
    }
    if (auto report = validate_attack(spec.params); !report.ok()) {
        throw ConfigError("invalid attack: " + report.summary());
    }
    return spec;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << content;
}

// Exclusive advisory lock on "<registry>.lock"; fails fast if another process holds it.
class RegistryLock {
  public:
    explicit RegistryLock(const std::filesystem::path& registry) {
        const auto lock_path = registry.string() + ".lock";
        fd_ = ::open(lock_path.c_str(), O_CREAT | O_RDWR, 0644);
        if (fd_ < 0) {
            throw IoError("cannot open lock file " + lock_path);
        }
        if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
            ::close(fd_);
            throw RegistryError("registry " + registry.string() + " is locked by another process");
        }
    }
    ~RegistryLock() {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
    RegistryLock(const RegistryLock&) = delete;
    RegistryLock& operator=(const RegistryLock&) = delete;

  private:
    int fd_ = -1;
};

template <typename F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const ValidationError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const LabelError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const RegistryError& e) {
        err << "registry error: " << e.what() << "\n";
        return kRegistryError;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << "\n";
        return kIoError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

}  // namespace

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    try {
        reject_unknown(j,
                       {"schema_version", "registry", "alice", "bob", "n", "auth_check_fraction", "kd_check_fraction",
                        "auth_error_threshold", "kd_error_threshold", "seed", "pa_output_length",
                        "measurement_order", "attack", "output", "sweep"},
                       "config");
        if (j.at("schema_version").get<int>() != 1) {
            throw ConfigError("unsupported config schema_version");
        }
        RunConfig rc;
        auto& s = rc.session;
        s.n = j.value("n", s.n);
        s.auth_check_fraction = j.value("auth_check_fraction", s.auth_check_fraction);
        s.kd_check_fraction = j.value("kd_check_fraction", s.kd_check_fraction);
        s.auth_error_threshold = j.value("auth_error_threshold", s.auth_error_threshold);
        s.kd_error_threshold = j.value("kd_error_threshold", s.kd_error_threshold);
        s.seed = j.value("seed", s.seed);
        if (j.contains("pa_output_length")) {
            s.pa_output_length = j.at("pa_output_length").get<size_t>();
        }
        s.measurement_order = parse_measurement_order(j.value("measurement_order", std::string("bell_first")));
        s.alice = j.value("alice", s.alice);
        s.bob = j.value("bob", s.bob);
        if (j.contains("attack") && !j.at("attack").is_null()) {
            s.attack = parse_attack(j.at("attack"), rc.probe_mode);
        }
        rc.registry = resolve(base_dir, j.value("registry", std::string("registry.json")));
        if (j.contains("output")) {
            rc.output = resolve(base_dir, j.at("output").get<std::string>());
        }
        if (j.contains("sweep")) {
            const auto& sw = j.at("sweep");
            reject_unknown(sw, {"mode", "thetas", "trials", "output"}, "sweep");
            SweepConfig cfg;
            cfg.mode = parse_detection_mode(sw.value("mode", std::string("auth")));
            cfg.thetas = sw.value("thetas", std::vector<double>{});
            cfg.trials = sw.value("trials", cfg.trials);
            if (sw.contains("output")) {
                cfg.output = resolve(base_dir, sw.at("output").get<std::string>());
            }
            rc.sweep = std::move(cfg);
        }
        s.validate();
        return rc;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config schema violation: ") + e.what());
    }
}

RunConfig load_run_config(const std::filesystem::path& path) {
    return parse_run_config(read_file(path), path.parent_path());
}

int cmd_register(const std::filesystem::path& registry, const std::string& user, const std::string& secret_hex,
                 const std::string& hash_id, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        RegistryLock lock(registry);
        Registry reg = std::filesystem::exists(registry) ? Registry::load(registry) : Registry{};
        const auto secret = from_hex(secret_hex);
        if (secret.empty()) {
            throw RegistryError("secret must not be empty");
        }
        reg.register_identity(user, secret, hash_id);
        reg.save(registry);
        out << "registered " << user << " (" << hash_id << ")\n";
        return static_cast<int>(kOk);
    });
}

int cmd_run(const std::filesystem::path& config, const RunOverrides& overrides, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        auto rc = load_run_config(config);
        if (overrides.seed) rc.session.seed = *overrides.seed;
        if (overrides.registry) rc.registry = *overrides.registry;
        if (overrides.out) rc.output = *overrides.out;

        RegistryLock lock(rc.registry);
        auto registry = Registry::load(rc.registry);
        const auto result = run_session(rc.session, registry);
        registry.save(rc.registry);

        const std::string body = session_result_to_json(result).dump(2) + "\n";
        if (rc.output.empty()) {
            out << body;
        } else {
            write_file(rc.output, body);
            out << to_string(result.phase) << " auth_error_rate=" << format_double(result.auth_error_rate)
                << " kd_error_rate=" << format_double(result.kd_error_rate)
                << " final_key_bits=" << result.final_key.size() << "\n";
        }
        switch (result.phase) {
            case SessionPhase::AbortedAuth:
                return static_cast<int>(kAbortedAuth);
            case SessionPhase::AbortedKd:
                return static_cast<int>(kAbortedKd);
            case SessionPhase::Completed:
                break;
        }
        return static_cast<int>(kOk);
    });
}

std::string sweep_csv(DetectionMode mode, ProbeMode probe_mode, AttackPlacement auth_placement,
                      const std::vector<double>& thetas, uint64_t trials, uint64_t seed) {
    if (probe_mode == ProbeMode::Custom) {
        throw ConfigError("sweeps need probe_mode orthonormal or shared");
    }
    std::string csv = "theta,exact,closed_form,mc_estimate,se,trials\n";
    const uint64_t sweep_seed = derive_seed(seed, "sweep");
    for (size_t i = 0; i < thetas.size(); ++i) {
        const auto attack = make_attack(thetas[i], probe_mode);
        MonteCarloConfig mc;
        mc.mode = mode;
        mc.attack = attack;
        mc.auth_placement = auth_placement;
        mc.trials = trials;
        mc.seed = derive_trial_seed(sweep_seed, i);
        const auto report = monte_carlo_detection(mc);
        char theta[64];
        std::snprintf(theta, sizeof theta, "%.17g", thetas[i]);
        csv += std::string(theta) + "," + format_double(report.exact_probability) + "," +
               format_double(report.closed_form_probability) + "," + format_double(report.monte_carlo_estimate) + "," +
               format_double(report.standard_error) + "," + std::to_string(report.monte_carlo_trials) + "\n";
    }
    return csv;
}

int cmd_sweep(const std::filesystem::path& config, const SweepOverrides& overrides, std::ostream& out,
              std::ostream& err) {
    return guarded(err, [&] {
        auto rc = load_run_config(config);
        SweepConfig sw = rc.sweep.value_or(SweepConfig{});
        if (!rc.sweep && rc.session.attack && rc.session.attack->placement == AttackPlacement::KdOnB) {
            sw.mode = DetectionMode::Kd;
        }
        if (!overrides.thetas.empty()) sw.thetas = overrides.thetas;
        if (overrides.trials) sw.trials = *overrides.trials;
        if (overrides.out) sw.output = *overrides.out;
        const uint64_t seed = overrides.seed.value_or(rc.session.seed);
        if (sw.thetas.empty()) {
            throw ConfigError("sweep needs at least one theta");
        }
        AttackPlacement placement = AttackPlacement::AuthOnA;
        if (rc.session.attack && rc.session.attack->placement == AttackPlacement::AuthOnB) {
            placement = AttackPlacement::AuthOnB;
        }
        const auto csv = sweep_csv(sw.mode, rc.probe_mode, placement, sw.thetas, sw.trials, seed);
        if (sw.output.empty()) {
            out << csv;
        } else {
            write_file(sw.output, csv);
            out << "wrote " << sw.thetas.size() << " rows to " << sw.output.string() << "\n";
        }
        return static_cast<int>(kOk);
    });
}

nlohmann::ordered_json table1_json() {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (auto a : {EncodingOp::I, EncodingOp::H}) {
        for (auto b : {EncodingOp::I, EncodingOp::H}) {
            const auto dist = table1_distribution(a, b);
            auto outcomes = nlohmann::ordered_json::array();
            for (const auto& key : dist.support()) {
                outcomes.push_back({{"bell", to_string(static_cast<BellOutcome>(key[0]))},
                                    {"x", to_string(static_cast<XOutcome>(key[1]))},
                                    {"probability", dist.probability(key)}});
            }
            rows.push_back({{"alice", to_string(a)}, {"bob", to_string(b)}, {"outcomes", outcomes}});
        }
    }
    return {{"schema_version", 1}, {"rows", rows}};
}

int cmd_table1(const std::optional<std::filesystem::path>& json_out, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto table = table1_json();
        out << "alice bob  outcomes (bell, trent x) : probability\n";
        for (const auto& row : table.at("rows")) {
            out << "  " << row.at("alice").get<std::string>() << "    " << row.at("bob").get<std::string>() << "  ";
            bool first = true;
            for (const auto& o : row.at("outcomes")) {
                out << (first ? "" : ", ") << "(" << o.at("bell").get<std::string>() << ","
                    << o.at("x").get<std::string>() << "):" << format_double(o.at("probability").get<double>());
                first = false;
            }
            out << "\n";
        }
        if (json_out) {
            write_file(*json_out, table.dump(2) + "\n");
        }
        return static_cast<int>(kOk);
    });
}

}  // namespace ghzqkd::cli
