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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ghzqkd/adversary.hpp"
#include "ghzqkd/keystream.hpp"
#include "ghzqkd/rng.hpp"
#include "ghzqkd/statevector.hpp"
#include "json.hpp"

namespace ghzqkd {

/// Key/operation bit 0 selects I, bit 1 selects H.
enum class EncodingOp { I = 0, H = 1 };

enum class Inference { BobI, BobH, Invalid };

/// Which of the two simultaneous measurements of a key-distribution round is performed first.
/// The outcome statistics do not depend on it.
enum class MeasurementOrder { BellFirst, TrentFirst };

enum class SessionPhase { AbortedAuth, AbortedKd, Completed };

std::string to_string(EncodingOp op);
std::string to_string(Inference inf);
std::string to_string(SessionPhase phase);
std::string to_string(MeasurementOrder order);
MeasurementOrder parse_measurement_order(std::string_view text);

inline EncodingOp op_from_bit(uint8_t bit) { return bit ? EncodingOp::H : EncodingOp::I; }
inline Gate2x2 gate_of(EncodingOp op) { return op == EncodingOp::H ? Gate2x2::hadamard() : Gate2x2::identity(); }

struct AttackSpec {
    AttackParams params;
    AttackPlacement placement = AttackPlacement::None;
};

struct SessionConfig {
    size_t n = 256;
    double auth_check_fraction = 0.25;
    double kd_check_fraction = 0.25;
    double auth_error_threshold = 0.0;
    double kd_error_threshold = 0.0;
    std::optional<AttackSpec> attack;
    uint64_t seed = 0;
    std::optional<size_t> pa_output_length;
    MeasurementOrder measurement_order = MeasurementOrder::BellFirst;
    std::string alice = "alice";
    std::string bob = "bob";

    /// c = round(auth_check_fraction * n).
    size_t auth_check_count() const;
    /// round(kd_check_fraction * m) for the m triples left after authentication.
    size_t kd_check_count() const;

    /// Throws ConfigError. Requires n >= 4, fractions in (0, 1) leaving at least one
    /// key bit, thresholds in [0, 1], and valid attack parameters.
    void validate() const;
};

/// One public-channel message.
struct TranscriptEvent {
    int step;
    std::string sender;
    std::string type;
    nlohmann::ordered_json payload;
};

struct SessionResult {
    SessionPhase phase = SessionPhase::AbortedAuth;
    double auth_error_rate = 0.0;
    /// (check-bit errors + Invalid outcomes off the check positions) /
    /// (check bits + Invalid outcomes off the check positions)
    double kd_error_rate = 0.0;
    /// Errors among check bits only.
    double kd_check_error_rate = 0.0;
    size_t auth_check_count = 0;
    size_t kd_rounds = 0;
    size_t kd_check_count = 0;
    size_t kd_invalid_count = 0;
    bool eve_detected = false;
    Bits raw_key;        // Bob's operation bits that survived sifting
    Bits alice_raw_key;  // Alice's inferred bits at the same positions
    Bits final_key;
    Bits alice_final_key;
    std::vector<TranscriptEvent> transcript;
};

inline constexpr int kResultSchemaVersion = 1;

nlohmann::ordered_json transcript_to_json(std::span<const TranscriptEvent> transcript);
nlohmann::ordered_json session_result_to_json(const SessionResult& result);

/// Applies I (bit 0) or H (bit 1) to qubit `role` of every state. key_bits may be longer
/// than states; a shorter keystream throws ConfigError.
std::vector<Statevector> encode_particles(std::vector<Statevector> states, std::span<const uint8_t> key_bits,
                                          std::string_view role);
/// The inverse of encode_particles; I and H are self-inverse so the operation is the same.
std::vector<Statevector> decode_particles(std::vector<Statevector> states, std::span<const uint8_t> key_bits,
                                          std::string_view role);

struct AuthCheckResult {
    double error_rate = 0.0;
    size_t errors = 0;
    std::vector<ZOutcome> alice_outcomes;
    std::vector<ZOutcome> bob_outcomes;
    std::vector<Statevector> survivors;  // unchecked triples, original order
};

/// z-measures A and B of every checked triple; an error is a triple where they disagree.
AuthCheckResult auth_check(std::vector<Statevector> states, std::span<const size_t> check_positions, Rng& rng);

struct KdOutcome {
    BellOutcome bell;
    XOutcome x;
};

/// One key-distribution round on a decoded triple: Alice and Bob apply their ops, Bob's qubit
/// crosses the channel (where `kd_attack` acts if given), Alice Bell-measures (A, B) and
/// Trent x-measures T.
KdOutcome kd_round(Statevector state, EncodingOp alice_op, EncodingOp bob_op, const AttackParams* kd_attack,
                   MeasurementOrder order, Rng& rng);

/// Alice's lookup into the table of reversed-GHZ outcomes.
Inference infer_bob_bit(EncodingOp alice_op, BellOutcome bell, XOutcome x);

struct SiftResult {
    double kd_error_rate = 0.0;
    double check_error_rate = 0.0;
    size_t check_errors = 0;
    std::vector<size_t> invalid_positions;  // Invalid outcomes off the check positions
    Bits raw_key;
    Bits alice_raw_key;
};

SiftResult sift_and_check(std::span<const Inference> inferences, std::span<const uint8_t> bob_bits,
                          std::span<const size_t> check_positions);

/// Binary Toeplitz matrix T (rows x cols) stored by its rows + cols - 1 diagonals:
/// T[i][j] = diagonals[i - j + cols - 1].
class ToeplitzHash {
  public:
    ToeplitzHash(size_t rows, size_t cols, Bits diagonals);

    /// Diagonal bits drawn from Rng(seed).bit(), lowest index first.
    static ToeplitzHash from_seed(size_t rows, size_t cols, uint64_t seed);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    uint8_t at(size_t i, size_t j) const { return diagonals_[i + cols_ - 1 - j]; }

    /// T * input over GF(2).
    Bits apply(std::span<const uint8_t> input) const;

  private:
    size_t rows_;
    size_t cols_;
    Bits diagonals_;
};

/// Throws ConfigError if output_length is 0 or exceeds raw_key.size().
Bits privacy_amplify(std::span<const uint8_t> raw_key, size_t output_length, uint64_t pa_seed);

/// k distinct positions in [0, n), sorted ascending, drawn uniformly without replacement.
std::vector<size_t> choose_positions(size_t n, size_t k, Rng& rng);

/// Full authentication + key-distribution session. Draws keystreams from (and so advances
/// the counters in) `registry`.
SessionResult run_session(const SessionConfig& config, Registry& registry);

}  // namespace ghzqkd
