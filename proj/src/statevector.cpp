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

#include "ghzqkd/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ghzqkd/errors.hpp"
#include "json.hpp"

namespace ghzqkd {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInputNormTol = 1e-10;

double squared_norm(std::span<const Complex> v) {
    double s = 0.0;
    for (const auto& a : v) {
        s += std::norm(a);
    }
    return s;
}

void require_normalized(const Statevector& s, const char* where) {
    const double n = s.norm();
    if (std::abs(n - 1.0) > kInputNormTol) {
        throw ValidationError(std::string(where) + ": norm drifted to " + std::to_string(n));
    }
}

// Projects `amps` (laid out like `state`) onto |v> on the listed qubit positions. v has
// 2^positions.size() entries, the first position being the most significant bit of v's
// index. The result is not renormalized.
std::vector<Complex> project(const Statevector& state, std::span<const Complex> amps,
                             std::span<const size_t> positions, std::span<const Complex> v) {
    std::vector<size_t> shifts;
    size_t mask = 0;
    for (size_t p : positions) {
        shifts.push_back(state.shift_of(p));
        mask |= size_t{1} << shifts.back();
    }
    const size_t k = positions.size();
    const size_t pd = state.probe_dim();
    const size_t nq = size_t{1} << state.num_qubits();
    std::vector<Complex> out(amps.size());

    auto compose = [&](size_t rest, size_t sub) {
        size_t idx = rest;
        for (size_t j = 0; j < k; ++j) {
            if ((sub >> (k - 1 - j)) & 1U) {
                idx |= size_t{1} << shifts[j];
            }
        }
        return idx;
    };

    for (size_t rest = 0; rest < nq; ++rest) {
        if (rest & mask) {
            continue;
        }
        for (size_t p = 0; p < pd; ++p) {
            Complex overlap{0.0, 0.0};
            for (size_t sub = 0; sub < v.size(); ++sub) {
                overlap += std::conj(v[sub]) * amps[compose(rest, sub) * pd + p];
            }
            for (size_t sub = 0; sub < v.size(); ++sub) {
                out[compose(rest, sub) * pd + p] = v[sub] * overlap;
            }
        }
    }
    return out;
}

std::vector<std::vector<Complex>> basis_vectors(Basis basis) {
    const double r = kInvSqrt2;
    switch (basis) {
        case Basis::Z:
            return {{1.0, 0.0}, {0.0, 1.0}};
        case Basis::X:
            return {{r, r}, {r, -r}};
        case Basis::Bell:
            // |Phi+>, |Phi->, |Psi+>, |Psi->; index = (bit q1 << 1) | bit q2
            return {{r, 0.0, 0.0, r}, {r, 0.0, 0.0, -r}, {0.0, r, r, 0.0}, {0.0, r, -r, 0.0}};
    }
    return {};
}

std::vector<size_t> step_positions(const Statevector& state, const MeasurementStep& step) {
    const size_t want = step.basis == Basis::Bell ? 2 : 1;
    if (step.targets.size() != want) {
        throw LabelError("measurement step needs " + std::to_string(want) + " target(s)");
    }
    std::vector<size_t> positions;
    for (const auto& t : step.targets) {
        positions.push_back(state.position(t));
    }
    if (positions.size() == 2 && positions[0] == positions[1]) {
        throw LabelError("Bell measurement needs two distinct qubits, got '" + step.targets[0] + "' twice");
    }
    return positions;
}

template <typename Outcome>
Measured<Outcome> sample(const Statevector& state, const MeasurementStep& step, Rng& rng) {
    const auto positions = step_positions(state, step);
    const auto vecs = basis_vectors(step.basis);
    std::vector<std::vector<Complex>> branches;
    std::vector<double> probs;
    for (const auto& v : vecs) {
        branches.push_back(project(state, state.amplitudes(), positions, v));
        probs.push_back(squared_norm(branches.back()));
    }
    const double u = rng.uniform();
    double acc = 0.0;
    size_t chosen = vecs.size() - 1;
    for (size_t i = 0; i < vecs.size(); ++i) {
        acc += probs[i];
        if (u < acc) {
            chosen = i;
            break;
        }
    }
    // Guard against landing on a zero-probability tail branch through rounding.
    while (probs[chosen] <= 0.0 && chosen > 0) {
        --chosen;
    }
    auto& amps = branches[chosen];
    const double scale = 1.0 / std::sqrt(probs[chosen]);
    for (auto& a : amps) {
        a *= scale;
    }
    return {static_cast<Outcome>(chosen), Statevector(state.labels(), state.probe_dim(), std::move(amps))};
}

void enumerate(const Statevector& state, std::span<const Complex> amps, std::span<const MeasurementStep> plan,
               size_t depth, OutcomeDistribution::Key& key, OutcomeDistribution& dist) {
    if (depth == plan.size()) {
        dist.add(key, squared_norm(amps));
        return;
    }
    const auto positions = step_positions(state, plan[depth]);
    const auto vecs = basis_vectors(plan[depth].basis);
    for (size_t i = 0; i < vecs.size(); ++i) {
        key.push_back(static_cast<int>(i));
        const auto branch = project(state, amps, positions, vecs[i]);
        enumerate(state, branch, plan, depth + 1, key, dist);
        key.pop_back();
    }
}

}  // namespace

Statevector::Statevector(std::vector<std::string> labels, size_t probe_dim, std::vector<Complex> amplitudes)
    : labels_(std::move(labels)), probe_dim_(probe_dim), amplitudes_(std::move(amplitudes)) {
    if (probe_dim_ == 0) {
        throw ValidationError("probe dimension must be at least 1");
    }
    std::set<std::string_view> seen;
    for (const auto& l : labels_) {
        if (!seen.insert(l).second) {
            throw LabelError("duplicate qubit label '" + l + "'");
        }
    }
    if (amplitudes_.size() != (size_t{1} << labels_.size()) * probe_dim_) {
        throw ValidationError("amplitude count " + std::to_string(amplitudes_.size()) +
                              " does not match 2^qubits * probe_dim");
    }
    for (const auto& a : amplitudes_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw ValidationError("non-finite amplitude");
        }
    }
    require_normalized(*this, "Statevector");
}

Statevector Statevector::basis(std::vector<std::string> labels, std::span<const int> bits) {
    if (bits.size() != labels.size()) {
        throw ValidationError("basis state needs one bit per label");
    }
    size_t idx = 0;
    for (int b : bits) {
        idx = (idx << 1) | static_cast<size_t>(b & 1);
    }
    std::vector<Complex> amps(size_t{1} << labels.size());
    amps[idx] = 1.0;
    return Statevector(std::move(labels), 1, std::move(amps));
}

size_t Statevector::position(std::string_view label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
        throw LabelError("unknown qubit label '" + std::string(label) + "'");
    }
    return static_cast<size_t>(it - labels_.begin());
}

size_t Statevector::shift_of(size_t position) const { return labels_.size() - 1 - position; }

double Statevector::norm() const { return std::sqrt(squared_norm(amplitudes_)); }

Gate2x2 Gate2x2::identity() { return {{Complex{1.0}, Complex{0.0}, Complex{0.0}, Complex{1.0}}}; }

Gate2x2 Gate2x2::hadamard() {
    const double r = kInvSqrt2;
    return {{Complex{r}, Complex{r}, Complex{r}, Complex{-r}}};
}

bool Gate2x2::is_unitary(double tol) const {
    // (U^dagger U)_{ij} = sum_k conj(U_ki) U_kj
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            Complex s = std::conj(m[i]) * m[j] + std::conj(m[2 + i]) * m[2 + j];
            if (std::abs(s - Complex(i == j ? 1.0 : 0.0)) > tol) {
                return false;
            }
        }
    }
    return true;
}

std::string to_string(ZOutcome o) { return o == ZOutcome::Zero ? "0" : "1"; }
std::string to_string(XOutcome o) { return o == XOutcome::Plus ? "+" : "-"; }
std::string to_string(BellOutcome o) {
    switch (o) {
        case BellOutcome::PhiPlus:
            return "Phi+";
        case BellOutcome::PhiMinus:
            return "Phi-";
        case BellOutcome::PsiPlus:
            return "Psi+";
        case BellOutcome::PsiMinus:
            return "Psi-";
    }
    return "?";
}

void OutcomeDistribution::add(Key key, double probability) {
    if (key.size() != steps_.size()) {
        throw ValidationError("outcome key length does not match the measurement plan");
    }
    if (probability < 0.0) {
        if (probability < -1e-12) {
            throw ValidationError("negative probability " + std::to_string(probability));
        }
        probability = 0.0;
    }
    if (probability > 1.0 + 1e-12) {
        throw ValidationError("probability above 1: " + std::to_string(probability));
    }
    entries_[std::move(key)] += probability;
}

double OutcomeDistribution::probability(const Key& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0.0 : it->second;
}

double OutcomeDistribution::total() const {
    double s = 0.0;
    for (const auto& [k, p] : entries_) {
        s += p;
    }
    return s;
}

std::vector<OutcomeDistribution::Key> OutcomeDistribution::support(double threshold) const {
    std::vector<Key> out;
    for (const auto& [k, p] : entries_) {
        if (p > threshold) {
            out.push_back(k);
        }
    }
    return out;
}

OutcomeDistribution OutcomeDistribution::reordered(std::span<const MeasurementStep> order) const {
    if (order.size() != steps_.size()) {
        throw ValidationError("reorder: step count mismatch");
    }
    std::vector<size_t> from;  // from[i] = index in steps_ of order[i]
    for (const auto& s : order) {
        auto it = std::find(steps_.begin(), steps_.end(), s);
        if (it == steps_.end()) {
            throw ValidationError("reorder: step not present in distribution");
        }
        from.push_back(static_cast<size_t>(it - steps_.begin()));
    }
    OutcomeDistribution out(std::vector<MeasurementStep>(order.begin(), order.end()));
    for (const auto& [k, p] : entries_) {
        Key nk(k.size());
        for (size_t i = 0; i < from.size(); ++i) {
            nk[i] = k[from[i]];
        }
        out.entries_[std::move(nk)] = p;
    }
    return out;
}

double OutcomeDistribution::max_difference(const OutcomeDistribution& other) const {
    const auto aligned = other.reordered(steps_);
    double worst = 0.0;
    for (const auto& [k, p] : entries_) {
        worst = std::max(worst, std::abs(p - aligned.probability(k)));
    }
    for (const auto& [k, p] : aligned.entries_) {
        worst = std::max(worst, std::abs(p - probability(k)));
    }
    return worst;
}

Statevector make_ghz() {
    std::vector<Complex> amps(8);
    amps[0b000] = kInvSqrt2;
    amps[0b111] = kInvSqrt2;
    return Statevector({"A", "T", "B"}, 1, std::move(amps));
}

Statevector apply_single(Statevector state, const Gate2x2& gate, std::string_view target) {
    const size_t shift = state.shift_of(state.position(target));
    if (!gate.is_unitary()) {
        throw ValidationError("gate is not unitary");
    }
    const size_t pd = state.probe_dim();
    const size_t nq = size_t{1} << state.num_qubits();
    auto amps = state.mutable_amplitudes();
    for (size_t q = 0; q < nq; ++q) {
        if ((q >> shift) & 1U) {
            continue;
        }
        const size_t q1 = q | (size_t{1} << shift);
        for (size_t p = 0; p < pd; ++p) {
            const Complex a0 = amps[q * pd + p];
            const Complex a1 = amps[q1 * pd + p];
            amps[q * pd + p] = gate.m[0] * a0 + gate.m[1] * a1;
            amps[q1 * pd + p] = gate.m[2] * a0 + gate.m[3] * a1;
        }
    }
    return state;
}

Statevector attach_probe(const Statevector& state, size_t probe_dim, std::span<const Complex> initial_probe) {
    if (state.has_probe()) {
        throw ValidationError("a probe is already attached");
    }
    if (initial_probe.size() != probe_dim || probe_dim == 0) {
        throw ValidationError("initial probe length does not match probe dimension");
    }
    if (std::abs(std::sqrt(squared_norm(initial_probe)) - 1.0) > kInputNormTol) {
        throw ValidationError("initial probe vector is not normalized");
    }
    std::vector<Complex> amps;
    amps.reserve(state.dimension() * probe_dim);
    for (const auto& a : state.amplitudes()) {
        for (const auto& e : initial_probe) {
            amps.push_back(a * e);
        }
    }
    return Statevector(state.labels(), probe_dim, std::move(amps));
}

Statevector apply_probe_isometry(const Statevector& state, const AttackParams& attack, std::string_view target) {
    const size_t shift = state.shift_of(state.position(target));
    if (!state.has_probe() && attack.probe_dim() > 1) {
        throw ValidationError("no probe attached");
    }
    if (state.probe_dim() != attack.probe_dim()) {
        throw ValidationError("probe dimension does not match the attack");
    }
    if (auto report = validate_attack(attack); !report.ok()) {
        throw ValidationError("invalid attack: " + report.summary());
    }
    const size_t pd = state.probe_dim();
    const size_t nq = size_t{1} << state.num_qubits();
    const auto& e = attack.initial_probe;
    auto in = state.amplitudes();
    std::vector<Complex> out(in.size());

    for (size_t q = 0; q < nq; ++q) {
        if ((q >> shift) & 1U) {
            continue;
        }
        const size_t q1 = q | (size_t{1} << shift);
        // Coefficients of |0>|e> and |1>|e> for this assignment of the other qubits.
        Complex c0{0.0}, c1{0.0};
        for (size_t p = 0; p < pd; ++p) {
            c0 += std::conj(e[p]) * in[q * pd + p];
            c1 += std::conj(e[p]) * in[q1 * pd + p];
        }
        for (size_t p = 0; p < pd; ++p) {
            if (std::abs(in[q * pd + p] - c0 * e[p]) > kInputNormTol ||
                std::abs(in[q1 * pd + p] - c1 * e[p]) > kInputNormTol) {
                throw ValidationError("probe is not in the attack's initial state");
            }
            out[q * pd + p] = c0 * attack.alpha * attack.e00[p] + c1 * attack.beta_prime * attack.e10[p];
            out[q1 * pd + p] = c0 * attack.beta * attack.e01[p] + c1 * attack.alpha_prime * attack.e11[p];
        }
    }
    return Statevector(state.labels(), pd, std::move(out));
}

Measured<ZOutcome> measure_z(const Statevector& state, std::string_view target, Rng& rng) {
    return sample<ZOutcome>(state, MeasurementStep::z(std::string(target)), rng);
}

Measured<XOutcome> measure_x(const Statevector& state, std::string_view target, Rng& rng) {
    return sample<XOutcome>(state, MeasurementStep::x(std::string(target)), rng);
}

Measured<BellOutcome> measure_bell(const Statevector& state, std::string_view q1, std::string_view q2, Rng& rng) {
    return sample<BellOutcome>(state, MeasurementStep::bell(std::string(q1), std::string(q2)), rng);
}

OutcomeDistribution exact_distribution(const Statevector& state, std::span<const MeasurementStep> plan) {
    std::set<size_t> used;
    for (const auto& step : plan) {
        for (size_t p : step_positions(state, step)) {
            if (!used.insert(p).second) {
                throw LabelError("measurement plan targets overlap on '" + state.labels()[p] + "'");
            }
        }
    }
    OutcomeDistribution dist(std::vector<MeasurementStep>(plan.begin(), plan.end()));
    OutcomeDistribution::Key key;
    enumerate(state, state.amplitudes(), plan, 0, key, dist);
    if (std::abs(dist.total() - 1.0) > 1e-10) {
        throw ValidationError("outcome probabilities sum to " + std::to_string(dist.total()));
    }
    return dist;
}

bool approx_equal(const Statevector& a, const Statevector& b, double tol) {
    if (a.labels() != b.labels() || a.probe_dim() != b.probe_dim()) {
        return false;
    }
    for (size_t i = 0; i < a.dimension(); ++i) {
        if (std::abs(a.amplitudes()[i] - b.amplitudes()[i]) > tol) {
            return false;
        }
    }
    return true;
}

bool equal_up_to_global_phase(const Statevector& a, const Statevector& b, double tol) {
    if (a.labels() != b.labels() || a.probe_dim() != b.probe_dim()) {
        return false;
    }
    auto aa = a.amplitudes();
    auto bb = b.amplitudes();
    size_t pivot = 0;
    for (size_t i = 1; i < aa.size(); ++i) {
        if (std::abs(aa[i]) > std::abs(aa[pivot])) {
            pivot = i;
        }
    }
    if (std::abs(aa[pivot]) == 0.0 || std::abs(bb[pivot]) == 0.0) {
        return approx_equal(a, b, tol);
    }
    const Complex phase = (bb[pivot] / aa[pivot]) / std::abs(bb[pivot] / aa[pivot]);
    for (size_t i = 0; i < aa.size(); ++i) {
        if (std::abs(aa[i] * phase - bb[i]) > tol) {
            return false;
        }
    }
    return true;
}

std::string dump_state_json(const Statevector& state) {
    nlohmann::json j;
    j["labels"] = state.labels();
    j["probe_dim"] = state.probe_dim();
    auto arr = nlohmann::json::array();
    for (const auto& a : state.amplitudes()) {
        arr.push_back({a.real(), a.imag()});
    }
    j["amplitudes"] = std::move(arr);
    return j.dump();
}

Statevector load_state_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        std::vector<Complex> amps;
        for (const auto& pair : j.at("amplitudes")) {
            amps.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
        }
        return Statevector(j.at("labels").get<std::vector<std::string>>(), j.at("probe_dim").get<size_t>(),
                           std::move(amps));
    } catch (const nlohmann::json::exception& ex) {
        throw ValidationError(std::string("malformed state dump: ") + ex.what());
    }
}

}  // namespace ghzqkd
