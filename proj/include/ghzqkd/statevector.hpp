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
#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ghzqkd/adversary.hpp"
#include "ghzqkd/rng.hpp"

namespace ghzqkd {

using Complex = std::complex<double>;

/// Dense amplitude vector over named qubits plus an optional probe qudit.
///
/// Index layout: the first label is the most significant qubit bit, and the probe index is
/// the fastest-varying coordinate, i.e. index = qubit_bits * probe_dim + probe_index.
/// For the protocol the qubit order is always (A, T, B).
class Statevector {
  public:
    Statevector(std::vector<std::string> labels, size_t probe_dim, std::vector<Complex> amplitudes);

    /// Computational basis state; bits[k] is the value of labels[k].
    static Statevector basis(std::vector<std::string> labels, std::span<const int> bits);

    const std::vector<std::string>& labels() const { return labels_; }
    size_t num_qubits() const { return labels_.size(); }
    size_t probe_dim() const { return probe_dim_; }
    size_t dimension() const { return amplitudes_.size(); }
    bool has_probe() const { return probe_dim_ > 1; }

    std::span<const Complex> amplitudes() const { return amplitudes_; }
    std::span<Complex> mutable_amplitudes() { return amplitudes_; }

    /// Amplitude of |qubit_bits>|probe_index>.
    Complex amplitude(size_t qubit_bits, size_t probe_index = 0) const {
        return amplitudes_[qubit_bits * probe_dim_ + probe_index];
    }

    /// Position of `label` in labels(); throws LabelError if absent.
    size_t position(std::string_view label) const;

    /// Bit shift of the qubit at `position` inside a full amplitude index.
    size_t shift_of(size_t position) const;

    double norm() const;

  private:
    std::vector<std::string> labels_;
    size_t probe_dim_;
    std::vector<Complex> amplitudes_;
};

struct Gate2x2 {
    std::array<Complex, 4> m;  // row-major

    static Gate2x2 identity();
    static Gate2x2 hadamard();

    bool is_unitary(double tol = 1e-10) const;
};

enum class ZOutcome { Zero = 0, One = 1 };
enum class XOutcome { Plus = 0, Minus = 1 };
enum class BellOutcome { PhiPlus = 0, PhiMinus = 1, PsiPlus = 2, PsiMinus = 3 };

std::string to_string(ZOutcome o);
std::string to_string(XOutcome o);
std::string to_string(BellOutcome o);

enum class Basis { Z, X, Bell };

struct MeasurementStep {
    Basis basis;
    std::vector<std::string> targets;  // one label for Z/X, two for Bell

    static MeasurementStep z(std::string target) { return {Basis::Z, {std::move(target)}}; }
    static MeasurementStep x(std::string target) { return {Basis::X, {std::move(target)}}; }
    static MeasurementStep bell(std::string q1, std::string q2) {
        return {Basis::Bell, {std::move(q1), std::move(q2)}};
    }

    size_t outcome_count() const { return basis == Basis::Bell ? 4 : 2; }
    bool operator==(const MeasurementStep&) const = default;
};

/// Exact joint distribution over the outcomes of a measurement plan. Keys hold one outcome
/// code per plan step, in plan order (the integer values of Z/X/BellOutcome).
class OutcomeDistribution {
  public:
    using Key = std::vector<int>;

    explicit OutcomeDistribution(std::vector<MeasurementStep> steps) : steps_(std::move(steps)) {}

    /// Records a probability. Values in (-1e-12, 0) are clamped to 0; anything more negative
    /// or above 1 + 1e-12 throws ValidationError.
    void add(Key key, double probability);

    const std::vector<MeasurementStep>& steps() const { return steps_; }
    const std::map<Key, double>& entries() const { return entries_; }

    /// 0 for keys never recorded.
    double probability(const Key& key) const;
    double total() const;

    /// Keys whose probability exceeds `threshold`.
    std::vector<Key> support(double threshold = 1e-12) const;

    /// Same distribution with steps permuted into `order` (must be a permutation of steps()).
    OutcomeDistribution reordered(std::span<const MeasurementStep> order) const;

    /// Largest absolute per-entry difference after aligning `other` to this step order.
    double max_difference(const OutcomeDistribution& other) const;

  private:
    std::vector<MeasurementStep> steps_;
    std::map<Key, double> entries_;
};

template <typename Outcome>
struct Measured {
    Outcome outcome;
    Statevector state;
};

Statevector make_ghz();

/// Applies `gate` to `target`. Throws LabelError / ValidationError (non-unitary gate).
Statevector apply_single(Statevector state, const Gate2x2& gate, std::string_view target);

/// Tensors a probe qudit in `initial_probe` onto a probe-free state.
Statevector attach_probe(const Statevector& state, size_t probe_dim, std::span<const Complex> initial_probe);

/// Applies the attack isometry to (target, probe). The probe must still factor out as the
/// attack's initial probe vector; otherwise ValidationError.
Statevector apply_probe_isometry(const Statevector& state, const AttackParams& attack, std::string_view target);

Measured<ZOutcome> measure_z(const Statevector& state, std::string_view target, Rng& rng);
Measured<XOutcome> measure_x(const Statevector& state, std::string_view target, Rng& rng);
Measured<BellOutcome> measure_bell(const Statevector& state, std::string_view q1, std::string_view q2, Rng& rng);

/// Full joint distribution of `plan` by projector algebra. Steps must touch disjoint qubits.
OutcomeDistribution exact_distribution(const Statevector& state, std::span<const MeasurementStep> plan);

bool approx_equal(const Statevector& a, const Statevector& b, double tol = 1e-12);
bool equal_up_to_global_phase(const Statevector& a, const Statevector& b, double tol = 1e-12);

/// {"labels": [...], "probe_dim": d, "amplitudes": [[re, im], ...]}
std::string dump_state_json(const Statevector& state);
Statevector load_state_json(std::string_view text);

}  // namespace ghzqkd
