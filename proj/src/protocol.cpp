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

#include "ghzqkd/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ghzqkd/errors.hpp"

namespace ghzqkd {

namespace {

size_t round_count(double fraction, size_t n) { return static_cast<size_t>(std::llround(fraction * n)); }

std::string outcomes_string(std::span<const ZOutcome> outcomes) {
    std::string s;
    for (auto o : outcomes) {
        s += to_string(o);
    }
    return s;
}

std::vector<Statevector> apply_keyed(std::vector<Statevector> states, std::span<const uint8_t> key_bits,
                                     std::string_view role) {
    if (role != "A" && role != "B") {
        throw ConfigError("particles can only be keyed for role A or B");
    }
    if (key_bits.size() < states.size()) {
        throw ConfigError("keystream shorter than the number of particles");
    }
    for (size_t i = 0; i < states.size(); ++i) {
        if (key_bits[i]) {
            states[i] = apply_single(std::move(states[i]), Gate2x2::hadamard(), role);
        }
    }
    return states;
}

class Transcript {
  public:
    void post(std::string sender, std::string type, nlohmann::ordered_json payload) {
        events_.push_back({static_cast<int>(events_.size()) + 1, std::move(sender), std::move(type), std::move(payload)});
    }
    std::vector<TranscriptEvent> take() { return std::move(events_); }

  private:
    std::vector<TranscriptEvent> events_;
};

}  // namespace

std::string to_string(EncodingOp op) { return op == EncodingOp::I ? "I" : "H"; }

std::string to_string(Inference inf) {
    switch (inf) {
        case Inference::BobI:
            return "BobI";
        case Inference::BobH:
            return "BobH";
        case Inference::Invalid:
            return "Invalid";
    }
    return "?";
}

std::string to_string(SessionPhase phase) {
    switch (phase) {
        case SessionPhase::AbortedAuth:
            return "aborted_auth";
        case SessionPhase::AbortedKd:
            return "aborted_kd";
        case SessionPhase::Completed:
            return "completed";
    }
    return "?";
}

std::string to_string(MeasurementOrder order) {
    return order == MeasurementOrder::BellFirst ? "bell_first" : "trent_first";
}

MeasurementOrder parse_measurement_order(std::string_view text) {
    if (text == "bell_first") return MeasurementOrder::BellFirst;
    if (text == "trent_first") return MeasurementOrder::TrentFirst;
    throw ConfigError("unknown measurement_order '" + std::string(text) + "'");
}

size_t SessionConfig::auth_check_count() const { return round_count(auth_check_fraction, n); }

size_t SessionConfig::kd_check_count() const { return round_count(kd_check_fraction, n - auth_check_count()); }

void SessionConfig::validate() const {
    if (n < 4) {
        throw ConfigError("n must be at least 4");
    }
    auto in_open_unit = [](double f) { return f > 0.0 && f < 1.0; };
    if (!in_open_unit(auth_check_fraction) || !in_open_unit(kd_check_fraction)) {
        throw ConfigError("check fractions must lie in (0, 1)");
    }
    if (!(auth_error_threshold >= 0.0 && auth_error_threshold <= 1.0) ||
        !(kd_error_threshold >= 0.0 && kd_error_threshold <= 1.0)) {
        throw ConfigError("error thresholds must lie in [0, 1]");
    }
    const size_t c = auth_check_count();
    if (c < 1 || c >= n) {
        throw ConfigError("auth_check_fraction leaves no check bits or no key material");
    }
    const size_t m = n - c;
    const size_t k = kd_check_count();
    if (k < 1 || k >= m) {
        throw ConfigError("kd_check_fraction leaves no check bits or no key bits");
    }
    if (pa_output_length && *pa_output_length == 0) {
        throw ConfigError("pa_output_length must be at least 1");
    }
    if (alice == bob) {
        throw ConfigError("alice and bob must be distinct users");
    }
    if (attack) {
        if (auto report = validate_attack(attack->params); !report.ok()) {
            throw ConfigError("invalid attack: " + report.summary());
        }
    }
}

nlohmann::ordered_json transcript_to_json(std::span<const TranscriptEvent> transcript) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& e : transcript) {
        arr.push_back({{"step", e.step}, {"sender", e.sender}, {"message_type", e.type}, {"payload", e.payload}});
    }
    return arr;
}

nlohmann::ordered_json session_result_to_json(const SessionResult& r) {
    nlohmann::ordered_json j;
    j["schema_version"] = kResultSchemaVersion;
    j["phase_reached"] = to_string(r.phase);
    j["auth_error_rate"] = r.auth_error_rate;
    j["kd_error_rate"] = r.kd_error_rate;
    j["kd_check_error_rate"] = r.kd_check_error_rate;
    j["auth_check_count"] = r.auth_check_count;
    j["kd_rounds"] = r.kd_rounds;
    j["kd_check_count"] = r.kd_check_count;
    j["kd_invalid_count"] = r.kd_invalid_count;
    j["eve_detected"] = r.eve_detected;
    j["raw_key"] = bits_to_string(r.raw_key);
    j["alice_raw_key"] = bits_to_string(r.alice_raw_key);
    j["final_key"] = bits_to_string(r.final_key);
    j["alice_final_key"] = bits_to_string(r.alice_final_key);
    j["transcript"] = transcript_to_json(r.transcript);
    return j;
}

std::vector<Statevector> encode_particles(std::vector<Statevector> states, std::span<const uint8_t> key_bits,
                                          std::string_view role) {
    return apply_keyed(std::move(states), key_bits, role);
}

std::vector<Statevector> decode_particles(std::vector<Statevector> states, std::span<const uint8_t> key_bits,
                                          std::string_view role) {
    return apply_keyed(std::move(states), key_bits, role);
}

AuthCheckResult auth_check(std::vector<Statevector> states, std::span<const size_t> check_positions, Rng& rng) {
    if (check_positions.empty()) {
        throw ConfigError("auth_check needs at least one check position");
    }
    std::vector<bool> checked(states.size(), false);
    for (size_t p : check_positions) {
        if (p >= states.size() || checked[p]) {
            throw ConfigError("check position out of range or repeated");
        }
        checked[p] = true;
    }
    AuthCheckResult out;
    for (size_t p : check_positions) {
        auto a = measure_z(states[p], "A", rng);
        auto b = measure_z(a.state, "B", rng);
        out.alice_outcomes.push_back(a.outcome);
        out.bob_outcomes.push_back(b.outcome);
        if (a.outcome != b.outcome) {
            ++out.errors;
        }
    }
    out.error_rate = static_cast<double>(out.errors) / static_cast<double>(check_positions.size());
    for (size_t i = 0; i < states.size(); ++i) {
        if (!checked[i]) {
            out.survivors.push_back(std::move(states[i]));
        }
    }
    return out;
}

KdOutcome kd_round(Statevector state, EncodingOp alice_op, EncodingOp bob_op, const AttackParams* kd_attack,
                   MeasurementOrder order, Rng& rng) {
    state = apply_single(std::move(state), gate_of(alice_op), "A");
    state = apply_single(std::move(state), gate_of(bob_op), "B");
    if (kd_attack) {
        state = apply_attack(std::move(state), *kd_attack, AttackPlacement::KdOnB, ProtocolPhase::Kd);
    }
    if (order == MeasurementOrder::BellFirst) {
        auto bell = measure_bell(state, "A", "B", rng);
        auto x = measure_x(bell.state, "T", rng);
        return {bell.outcome, x.outcome};
    }
    auto x = measure_x(state, "T", rng);
    auto bell = measure_bell(x.state, "A", "B", rng);
    return {bell.outcome, x.outcome};
}

Inference infer_bob_bit(EncodingOp alice_op, BellOutcome bell, XOutcome x) {
    using B = BellOutcome;
    const bool plus = x == XOutcome::Plus;
    // Equal ops leave two outcomes, mixed ops leave four; the two sets never intersect.
    const bool same_op_support = plus ? (bell == B::PhiPlus) : (alice_op == EncodingOp::I ? bell == B::PhiMinus
                                                                                            : bell == B::PsiPlus);
    const bool mixed_op_support = plus ? (bell == B::PhiMinus || bell == B::PsiPlus)
                                       : (bell == B::PhiPlus || bell == B::PsiMinus);
    if (same_op_support) {
        return alice_op == EncodingOp::I ? Inference::BobI : Inference::BobH;
    }
    if (mixed_op_support) {
        return alice_op == EncodingOp::I ? Inference::BobH : Inference::BobI;
    }
    return Inference::Invalid;
}

SiftResult sift_and_check(std::span<const Inference> inferences, std::span<const uint8_t> bob_bits,
                          std::span<const size_t> check_positions) {
    if (inferences.size() != bob_bits.size()) {
        throw ConfigError("inference and bit sequences differ in length");
    }
    std::vector<bool> is_check(inferences.size(), false);
    for (size_t p : check_positions) {
        if (p >= inferences.size() || is_check[p]) {
            throw ConfigError("check position out of range or repeated");
        }
        is_check[p] = true;
    }
    auto inferred_bit = [](Inference inf) -> uint8_t { return inf == Inference::BobH ? 1 : 0; };
    SiftResult out;
    for (size_t i = 0; i < inferences.size(); ++i) {
        const bool invalid = inferences[i] == Inference::Invalid;
        if (is_check[i]) {
            if (invalid || inferred_bit(inferences[i]) != bob_bits[i]) {
                ++out.check_errors;
            }
        } else if (invalid) {
            out.invalid_positions.push_back(i);
        } else {
            out.raw_key.push_back(bob_bits[i]);
            out.alice_raw_key.push_back(inferred_bit(inferences[i]));
        }
    }
    const size_t observed = check_positions.size() + out.invalid_positions.size();
    const size_t errors = out.check_errors + out.invalid_positions.size();
    out.kd_error_rate = observed ? static_cast<double>(errors) / static_cast<double>(observed) : 0.0;
    out.check_error_rate = check_positions.empty()
                               ? 0.0
                               : static_cast<double>(out.check_errors) / static_cast<double>(check_positions.size());
    return out;
}

std::vector<size_t> choose_positions(size_t n, size_t k, Rng& rng) {
    if (k > n) {
        throw ConfigError("cannot choose more positions than available");
    }
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), size_t{0});
    // Partial Fisher-Yates: the first k slots end up a uniform k-subset.
    for (size_t i = 0; i < k; ++i) {
        const size_t j = i + static_cast<size_t>(rng.below(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

SessionResult run_session(const SessionConfig& config, Registry& registry) {
    config.validate();
    Rng alice_ops_rng(derive_seed(config.seed, "alice-ops"));
    Rng bob_ops_rng(derive_seed(config.seed, "bob-ops"));
    Rng check_rng(derive_seed(config.seed, "check-selection"));
    Rng measure_rng(derive_seed(config.seed, "measurement"));
    Rng pa_rng(derive_seed(config.seed, "pa-seed"));

    const AttackPlacement placement = config.attack ? config.attack->placement : AttackPlacement::None;
    Transcript log;
    SessionResult result;

    // Authentication.
    log.post(config.alice, "session_request", {{"to", {config.bob, "trent"}}, {"ghz_count", config.n}});
    const auto key_a = registry.keystream(config.alice, config.n);
    const auto key_b = registry.keystream(config.bob, config.n);

    std::vector<Statevector> states(config.n, make_ghz());
    states = encode_particles(std::move(states), key_a.bits, "A");
    states = encode_particles(std::move(states), key_b.bits, "B");
    log.post("trent", "particles_distributed", {{"ghz_count", config.n}});

    if (placement == AttackPlacement::AuthOnA || placement == AttackPlacement::AuthOnB) {
        for (auto& s : states) {
            s = apply_attack(std::move(s), config.attack->params, placement, ProtocolPhase::Auth);
        }
    }
    states = decode_particles(std::move(states), key_a.bits, "A");
    states = decode_particles(std::move(states), key_b.bits, "B");

    const auto auth_positions = choose_positions(config.n, config.auth_check_count(), check_rng);
    log.post(config.alice, "auth_check_positions", {{"positions", auth_positions}});
    auto auth = auth_check(std::move(states), auth_positions, measure_rng);
    log.post(config.alice, "auth_check_outcomes", {{"outcomes", outcomes_string(auth.alice_outcomes)}});
    log.post(config.bob, "auth_check_outcomes", {{"outcomes", outcomes_string(auth.bob_outcomes)}});

    result.auth_check_count = auth_positions.size();
    result.auth_error_rate = auth.error_rate;
    result.eve_detected = auth.errors > 0;
    const bool auth_ok = auth.error_rate <= config.auth_error_threshold;
    log.post(config.alice, "auth_verdict", {{"error_rate", auth.error_rate}, {"accepted", auth_ok}});
    if (!auth_ok) {
        result.phase = SessionPhase::AbortedAuth;
        result.transcript = log.take();
        return result;
    }

    // Key distribution.
    const size_t m = auth.survivors.size();
    Bits alice_bits(m);
    Bits bob_bits(m);
    for (size_t i = 0; i < m; ++i) {
        alice_bits[i] = static_cast<uint8_t>(alice_ops_rng.bit());
    }
    for (size_t i = 0; i < m; ++i) {
        bob_bits[i] = static_cast<uint8_t>(bob_ops_rng.bit());
    }
    const AttackParams* kd_attack = placement == AttackPlacement::KdOnB ? &config.attack->params : nullptr;
    std::vector<Inference> inferences;
    std::string x_outcomes;
    inferences.reserve(m);
    for (size_t i = 0; i < m; ++i) {
        const auto op_a = op_from_bit(alice_bits[i]);
        const auto out = kd_round(std::move(auth.survivors[i]), op_a, op_from_bit(bob_bits[i]), kd_attack,
                                  config.measurement_order, measure_rng);
        x_outcomes += to_string(out.x);
        inferences.push_back(infer_bob_bit(op_a, out.bell, out.x));
    }
    log.post(config.bob, "qubits_sent", {{"count", m}});
    log.post("trent", "x_outcomes", {{"outcomes", x_outcomes}});

    const auto kd_positions = choose_positions(m, config.kd_check_count(), check_rng);
    log.post(config.alice, "kd_check_positions", {{"positions", kd_positions}});
    Bits disclosed;
    for (size_t p : kd_positions) {
        disclosed.push_back(bob_bits[p]);
    }
    log.post(config.bob, "kd_check_bits", {{"bits", bits_to_string(disclosed)}});

    auto sift = sift_and_check(inferences, bob_bits, kd_positions);
    log.post(config.alice, "kd_invalid_positions", {{"positions", sift.invalid_positions}});

    result.kd_rounds = m;
    result.kd_check_count = kd_positions.size();
    result.kd_invalid_count = sift.invalid_positions.size();
    result.kd_error_rate = sift.kd_error_rate;
    result.kd_check_error_rate = sift.check_error_rate;
    result.eve_detected = result.eve_detected || sift.check_errors > 0 || !sift.invalid_positions.empty();

    const size_t out_len = config.pa_output_length.value_or(std::max<size_t>(1, sift.raw_key.size() / 2));
    bool kd_ok = sift.kd_error_rate <= config.kd_error_threshold;
    std::string reason = kd_ok ? "" : "error rate above threshold";
    if (kd_ok && (sift.raw_key.empty() || out_len > sift.raw_key.size())) {
        kd_ok = false;
        reason = "raw key shorter than the requested output length";
    }
    nlohmann::ordered_json verdict{{"error_rate", sift.kd_error_rate}, {"accepted", kd_ok}};
    if (!kd_ok) {
        verdict["reason"] = reason;
    }
    log.post(config.alice, "kd_verdict", verdict);
    if (!kd_ok) {
        result.phase = SessionPhase::AbortedKd;
        result.transcript = log.take();
        return result;
    }

    const uint64_t pa_seed = pa_rng.next_u64();
    log.post(config.alice, "privacy_amplification", {{"seed", pa_seed}, {"output_length", out_len}});
    result.raw_key = std::move(sift.raw_key);
    result.alice_raw_key = std::move(sift.alice_raw_key);
    result.final_key = privacy_amplify(result.raw_key, out_len, pa_seed);
    result.alice_final_key = privacy_amplify(result.alice_raw_key, out_len, pa_seed);
    result.phase = SessionPhase::Completed;
    result.transcript = log.take();
    return result;
}

}  // namespace ghzqkd
