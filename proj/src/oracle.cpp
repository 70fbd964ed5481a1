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

#include "ghzqkd/oracle.hpp"

#include <cmath>

#include "ghzqkd/errors.hpp"

namespace ghzqkd {

namespace {

const std::vector<MeasurementStep>& kd_plan(MeasurementOrder order) {
    static const std::vector<MeasurementStep> bell_first{MeasurementStep::bell("A", "B"), MeasurementStep::x("T")};
    static const std::vector<MeasurementStep> trent_first{MeasurementStep::x("T"), MeasurementStep::bell("A", "B")};
    return order == MeasurementOrder::BellFirst ? bell_first : trent_first;
}

void require_valid(const AttackParams& attack) {
    if (auto report = validate_attack(attack); !report.ok()) {
        throw ValidationError("invalid attack: " + report.summary());
    }
}

double xlog2x(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace

OutcomeDistribution table1_distribution(EncodingOp alice_op, EncodingOp bob_op) {
    auto s = apply_single(make_ghz(), gate_of(alice_op), "A");
    s = apply_single(std::move(s), gate_of(bob_op), "B");
    return exact_distribution(s, kd_plan(MeasurementOrder::BellFirst));
}

double auth_detection_exact(const AttackParams& attack, int key_bit, AttackPlacement placement) {
    require_valid(attack);
    if (placement != AttackPlacement::AuthOnA && placement != AttackPlacement::AuthOnB) {
        throw ConfigError("auth detection needs an authentication-phase placement");
    }
    if (key_bit != 0 && key_bit != 1) {
        throw ConfigError("key bit must be 0 or 1");
    }
    const auto op = gate_of(op_from_bit(static_cast<uint8_t>(key_bit)));
    auto s = apply_single(make_ghz(), op, "A");
    s = apply_single(std::move(s), op, "B");
    s = apply_attack(std::move(s), attack, placement, ProtocolPhase::Auth);
    s = apply_single(std::move(s), op, "A");
    s = apply_single(std::move(s), op, "B");
    const std::vector<MeasurementStep> plan{MeasurementStep::z("A"), MeasurementStep::z("B")};
    const auto dist = exact_distribution(s, plan);
    return dist.probability({0, 1}) + dist.probability({1, 0});
}

double auth_detection_average(const AttackParams& attack, AttackPlacement placement) {
    return 0.5 * (auth_detection_exact(attack, 0, placement) + auth_detection_exact(attack, 1, placement));
}

double auth_detection_closed_form(const AttackParams& attack) {
    return (1.0 + std::norm(attack.beta) + std::norm(attack.beta_prime)) / 4.0;
}

double auth_pass_closed_form(const AttackParams& attack) {
    return (1.0 + std::norm(attack.alpha) + std::norm(attack.alpha_prime)) / 4.0;
}

double auth_detection_c_bits(const AttackParams& attack, unsigned c) {
    return 1.0 - std::pow(auth_pass_closed_form(attack), static_cast<double>(c));
}

double kd_error_exact(const AttackParams& attack, EncodingOp alice_op, EncodingOp bob_op, MeasurementOrder order) {
    require_valid(attack);
    auto s = apply_single(make_ghz(), gate_of(alice_op), "A");
    s = apply_single(std::move(s), gate_of(bob_op), "B");
    s = apply_attack(std::move(s), attack, AttackPlacement::KdOnB, ProtocolPhase::Kd);
    const auto& plan = kd_plan(order);
    const auto dist = exact_distribution(s, plan).reordered(kd_plan(MeasurementOrder::BellFirst));
    const auto correct = bob_op == EncodingOp::I ? Inference::BobI : Inference::BobH;
    double error = 0.0;
    for (const auto& [key, p] : dist.entries()) {
        if (infer_bob_bit(alice_op, static_cast<BellOutcome>(key[0]), static_cast<XOutcome>(key[1])) != correct) {
            error += p;
        }
    }
    return error;
}

double kd_error_average(const AttackParams& attack) {
    double sum = 0.0;
    for (auto a : {EncodingOp::I, EncodingOp::H}) {
        for (auto b : {EncodingOp::I, EncodingOp::H}) {
            sum += kd_error_exact(attack, a, b);
        }
    }
    return sum / 4.0;
}

double kd_error_closed_form(const AttackParams& attack) {
    return 0.5 + (std::norm(attack.beta) + std::norm(attack.beta_prime)) / 8.0;
}

double kd_detection_c_bits(const AttackParams& attack, unsigned c) {
    return 1.0 - std::pow(1.0 - kd_error_average(attack), static_cast<double>(c));
}

std::string to_string(DetectionMode mode) { return mode == DetectionMode::Auth ? "auth" : "kd"; }

DetectionMode parse_detection_mode(std::string_view text) {
    if (text == "auth") return DetectionMode::Auth;
    if (text == "kd") return DetectionMode::Kd;
    throw ConfigError("unknown detection mode '" + std::string(text) + "'");
}

bool DetectionReport::within_standard_errors(double k) const {
    const double diff = std::abs(monte_carlo_estimate - exact_probability);
    if (standard_error == 0.0) {
        return diff <= 1e-12;
    }
    return diff <= k * standard_error;
}

DetectionReport monte_carlo_detection(const MonteCarloConfig& config) {
    if (config.trials < 100) {
        throw ConfigError("monte carlo detection needs at least 100 trials");
    }
    const AttackParams* attack = config.attack ? &*config.attack : nullptr;
    if (attack) {
        require_valid(*attack);
    }
    const bool auth = config.mode == DetectionMode::Auth;
    const std::string_view wire = auth ? attack_target(config.auth_placement) : "B";

    DetectionReport report;
    report.monte_carlo_trials = config.trials;
    report.orthonormal_probes = attack ? attack->has_orthonormal_probes() : true;
    if (!attack) {
        report.exact_probability = 0.0;
        report.closed_form_probability = 0.0;
    } else if (auth) {
        report.exact_probability = auth_detection_average(*attack, config.auth_placement);
        report.closed_form_probability = auth_detection_closed_form(*attack);
    } else {
        report.exact_probability = kd_error_average(*attack);
        report.closed_form_probability = kd_error_closed_form(*attack);
    }

    uint64_t errors = 0;
    for (uint64_t t = 0; t < config.trials; ++t) {
        Rng rng(derive_trial_seed(config.seed, t));
        if (auth) {
            const Bits key{static_cast<uint8_t>(rng.bit())};
            std::vector<Statevector> states{make_ghz()};
            states = encode_particles(std::move(states), key, wire);
            if (attack) {
                states[0] = apply_attack(std::move(states[0]), *attack, config.auth_placement, ProtocolPhase::Auth);
            }
            states = decode_particles(std::move(states), key, wire);
            const size_t position = 0;
            errors += auth_check(std::move(states), std::span(&position, 1), rng).errors;
        } else {
            const auto alice_op = op_from_bit(static_cast<uint8_t>(rng.bit()));
            const auto bob_op = op_from_bit(static_cast<uint8_t>(rng.bit()));
            const auto out = kd_round(make_ghz(), alice_op, bob_op, attack, MeasurementOrder::BellFirst, rng);
            const auto inferred = infer_bob_bit(alice_op, out.bell, out.x);
            const auto expected = bob_op == EncodingOp::I ? Inference::BobI : Inference::BobH;
            if (inferred != expected) {
                ++errors;
            }
        }
    }
    report.monte_carlo_errors = errors;
    const double p = static_cast<double>(errors) / static_cast<double>(config.trials);
    report.monte_carlo_estimate = p;
    report.standard_error = std::sqrt(p * (1.0 - p) / static_cast<double>(config.trials));
    return report;
}

SessionTally run_session_batch(const SessionConfig& config, Registry& registry, uint64_t sessions) {
    SessionTally tally;
    SessionConfig cfg = config;
    for (uint64_t i = 0; i < sessions; ++i) {
        cfg.seed = derive_trial_seed(config.seed, i);
        const auto r = run_session(cfg, registry);
        ++tally.sessions;
        switch (r.phase) {
            case SessionPhase::AbortedAuth:
                ++tally.aborted_auth;
                break;
            case SessionPhase::AbortedKd:
                ++tally.aborted_kd;
                break;
            case SessionPhase::Completed:
                ++tally.completed;
                break;
        }
    }
    return tally;
}

TrentIgnoranceReport trent_key_ignorance() {
    // joint[a][b][bell][x]
    double joint[2][2][4][2] = {};
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            const auto dist = table1_distribution(op_from_bit(a), op_from_bit(b));
            for (const auto& [key, p] : dist.entries()) {
                joint[a][b][key[0]][key[1]] += 0.25 * p;
            }
        }
    }
    TrentIgnoranceReport report;
    double p_bx[2][2] = {};  // [b][x]
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int bell = 0; bell < 4; ++bell)
                for (int x = 0; x < 2; ++x) p_bx[b][x] += joint[a][b][bell][x];
    double p_b[2] = {p_bx[0][0] + p_bx[0][1], p_bx[1][0] + p_bx[1][1]};
    double p_x[2] = {p_bx[0][0] + p_bx[1][0], p_bx[0][1] + p_bx[1][1]};
    double mi = 0.0;
    for (int b = 0; b < 2; ++b) {
        for (int x = 0; x < 2; ++x) {
            if (p_bx[b][x] > 0.0) {
                mi += p_bx[b][x] * std::log2(p_bx[b][x] / (p_b[b] * p_x[x]));
            }
            report.bob_bit_given_x[x][b] = p_x[x] > 0.0 ? p_bx[b][x] / p_x[x] : 0.0;
        }
    }
    report.mutual_information = std::max(0.0, mi);

    // H(B | A, bell, x) = -sum p(a,b,bell,x) log p(b | a,bell,x)
    double h = 0.0;
    for (int a = 0; a < 2; ++a) {
        for (int bell = 0; bell < 4; ++bell) {
            for (int x = 0; x < 2; ++x) {
                const double marg = joint[a][0][bell][x] + joint[a][1][bell][x];
                if (marg <= 0.0) continue;
                for (int b = 0; b < 2; ++b) {
                    h -= xlog2x(joint[a][b][bell][x] / marg) * marg;
                }
            }
        }
    }
    report.residual_entropy_with_alice_view = std::max(0.0, h);
    return report;
}

}  // namespace ghzqkd
