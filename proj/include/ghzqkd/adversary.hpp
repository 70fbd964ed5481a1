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

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ghzqkd {

class Statevector;

using Complex = std::complex<double>;
using ProbeVector = std::vector<Complex>;

/// Eve's entangling probe. The isometry acts on (transmitted qubit) x (probe) as
///
///   |0>|e>  ->  alpha |0>|e00> + beta  |1>|e01>
///   |1>|e>  ->  beta' |0>|e10> + alpha'|1>|e11>
///
/// where |e> is `initial_probe`. All probe vectors share one dimension (at most 4).
struct AttackParams {
    Complex alpha{1.0, 0.0};
    Complex beta{0.0, 0.0};
    Complex alpha_prime{1.0, 0.0};
    Complex beta_prime{0.0, 0.0};
    ProbeVector e00;
    ProbeVector e01;
    ProbeVector e10;
    ProbeVector e11;
    ProbeVector initial_probe;

    size_t probe_dim() const { return initial_probe.size(); }

    /// True when e00, e01, e10, e11 are mutually orthonormal. The closed-form detection
    /// probabilities only hold in this case.
    bool has_orthonormal_probes(double tol = 1e-10) const;
};

enum class ProbeMode { Orthonormal, Shared, Custom };

enum class AttackPlacement { None, AuthOnA, AuthOnB, KdOnB };

enum class ProtocolPhase { Auth, Kd };

std::string to_string(ProbeMode mode);
std::string to_string(AttackPlacement placement);
ProbeMode parse_probe_mode(std::string_view text);
AttackPlacement parse_placement(std::string_view text);

struct AttackViolation {
    enum class Kind { ProbeShape, ProbeNorm, Normalization, NormalizationPrime, ColumnNorm, CrossConstraint };
    Kind kind;
    double residual;
    std::string message;
};

struct AttackReport {
    std::vector<AttackViolation> violations;

    bool ok() const { return violations.empty(); }
    std::string summary() const;
};

/// One-parameter family: alpha = alpha' = cos(theta), beta = sin(theta), beta' = -sin(theta).
/// The cross constraint holds for any probe overlap. Orthonormal mode uses the four standard
/// basis vectors of a 4-dimensional probe (|e> = e00); shared mode sets every e_ij = |e>.
AttackParams make_attack(double theta, ProbeMode mode = ProbeMode::Orthonormal);

/// Same amplitudes as make_attack but with caller-supplied probe vectors. Throws
/// ValidationError carrying the report if the result is not an isometry.
AttackParams make_attack(double theta, std::vector<ProbeVector> probes, ProbeVector initial_probe);

/// Checks both normalizations and that the two output columns of the isometry are
/// orthonormal. Every failing condition is reported with its residual.
AttackReport validate_attack(const AttackParams& params, double tol = 1e-10);

/// Attaches Eve's probe (in `initial_probe`) and applies the isometry to the qubit the
/// placement targets. Placement None returns the state unchanged.
/// Throws ConfigError when the placement does not belong to `phase`.
Statevector apply_attack(Statevector state, const AttackParams& params, AttackPlacement placement,
                         ProtocolPhase phase);

/// Target qubit label ("A" or "B") of an active placement.
std::string_view attack_target(AttackPlacement placement);

}  // namespace ghzqkd
