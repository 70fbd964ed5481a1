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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ghzqkd/adversary.hpp"
#include "ghzqkd/protocol.hpp"
#include "ghzqkd/statevector.hpp"

namespace ghzqkd {

/// Exact (Bell on A,B ; x on T) distribution of GHZ after Alice's and Bob's ops.
OutcomeDistribution table1_distribution(EncodingOp alice_op, EncodingOp bob_op);

/// Exact probability that Alice's and Bob's z outcomes differ on one authentication check
/// bit, when the attacked wire carries key bit `key_bit`. Built from the gate and isometry
/// definitions: encode -> attack in transit -> decode -> z on A and B.
double auth_detection_exact(const AttackParams& attack, int key_bit,
                            AttackPlacement placement = AttackPlacement::AuthOnA);

/// Mean of auth_detection_exact over key bits 0 and 1.
double auth_detection_average(const AttackParams& attack, AttackPlacement placement = AttackPlacement::AuthOnA);

/// (1 + |beta|^2 + |beta'|^2) / 4
double auth_detection_closed_form(const AttackParams& attack);

/// (1 + |alpha|^2 + |alpha'|^2) / 4, the per-check-bit probability Eve goes unnoticed.
double auth_pass_closed_form(const AttackParams& attack);

/// 1 - ((1 + |alpha|^2 + |alpha'|^2) / 4)^c
double auth_detection_c_bits(const AttackParams& attack, unsigned c);

/// Exact probability that Alice's inference of Bob's bit is wrong or Invalid when Eve's
/// probe acts on Bob's qubit in flight.
double kd_error_exact(const AttackParams& attack, EncodingOp alice_op, EncodingOp bob_op,
                      MeasurementOrder order = MeasurementOrder::BellFirst);

/// Uniform mean of kd_error_exact over the four op pairs.
double kd_error_average(const AttackParams& attack);

/// 1/2 + (|beta|^2 + |beta'|^2) / 8
double kd_error_closed_form(const AttackParams& attack);

/// 1 - (1 - p)^c with p = kd_error_average. The compound form is an extrapolation by
/// analogy with the authentication phase.
double kd_detection_c_bits(const AttackParams& attack, unsigned c);

enum class DetectionMode { Auth, Kd };

std::string to_string(DetectionMode mode);
DetectionMode parse_detection_mode(std::string_view text);

struct MonteCarloConfig {
    DetectionMode mode = DetectionMode::Auth;
    std::optional<AttackParams> attack;  // nullopt = honest channel
    AttackPlacement auth_placement = AttackPlacement::AuthOnA;
    uint64_t trials = 100000;
    uint64_t seed = 0;
};

struct DetectionReport {
    double exact_probability = 0.0;
    double closed_form_probability = 0.0;
    double monte_carlo_estimate = 0.0;
    uint64_t monte_carlo_trials = 0;
    uint64_t monte_carlo_errors = 0;
    double standard_error = 0.0;  // sqrt(p(1 - p) / trials) with p the estimate
    bool orthonormal_probes = true;
    bool balanced_key_bits = true;

    /// |estimate - exact| <= k * SE; when SE is 0 the estimate must equal exact.
    bool within_standard_errors(double k = 3.0) const;
};

/// Runs `trials` independent single-check-bit experiments, each with its own RNG stream
/// derived from (seed, trial index), through the protocol primitives. Auth mode: uniformly
/// random key bit on the attacked wire, encode -> attack -> decode -> z on A and B. Kd mode:
/// uniformly random ops for Alice and Bob, kd_round, inference. Throws ConfigError if
/// trials < 100.
DetectionReport monte_carlo_detection(const MonteCarloConfig& config);

/// Tally of full sessions with a fixed configuration.
struct SessionTally {
    uint64_t sessions = 0;
    uint64_t aborted_auth = 0;
    uint64_t aborted_kd = 0;
    uint64_t completed = 0;
};

/// Runs `sessions` sessions, session i seeded with derive_trial_seed(config.seed, i). Each
/// session draws fresh keystream from `registry`.
SessionTally run_session_batch(const SessionConfig& config, Registry& registry, uint64_t sessions);

struct TrentIgnoranceReport {
    /// P(Bob's bit = b | Trent's x outcome), indexed [x][b] with x = 0 for '+'.
    std::array<std::array<double, 2>, 2> bob_bit_given_x{};
    /// I(Bob's bit ; Trent's x outcome) in bits.
    double mutual_information = 0.0;
    /// H(Bob's bit | Alice's op, Bell outcome, x outcome) in bits; 0 means Alice's private
    /// data closes the gap completely.
    double residual_entropy_with_alice_view = 0.0;
};

/// Enumerates the four equally likely op pairs through table1_distribution. Positions of
/// check bits and discarded rounds are chosen independently of the ops, so Trent's public
/// view reduces to his own x outcome.
TrentIgnoranceReport trent_key_ignorance();

}  // namespace ghzqkd
