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

#include "ghzqkd/adversary.hpp"

#include <cmath>
#include <sstream>

#include "ghzqkd/errors.hpp"
#include "ghzqkd/statevector.hpp"

namespace ghzqkd {

namespace {

Complex inner(const ProbeVector& a, const ProbeVector& b) {
    Complex s{0.0};
    for (size_t i = 0; i < a.size(); ++i) {
        s += std::conj(a[i]) * b[i];
    }
    return s;
}

ProbeVector unit(size_t dim, size_t index) {
    ProbeVector v(dim);
    v[index] = 1.0;
    return v;
}

void set_amplitudes(AttackParams& p, double theta) {
    p.alpha = std::cos(theta);
    p.alpha_prime = std::cos(theta);
    p.beta = std::sin(theta);
    p.beta_prime = -std::sin(theta);
}

}  // namespace

bool AttackParams::has_orthonormal_probes(double tol) const {
    const ProbeVector* v[4] = {&e00, &e01, &e10, &e11};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (v[i]->size() != v[j]->size()) {
                return false;
            }
            if (std::abs(inner(*v[i], *v[j]) - Complex(i == j ? 1.0 : 0.0)) > tol) {
                return false;
            }
        }
    }
    return true;
}

std::string to_string(ProbeMode mode) {
    switch (mode) {
        case ProbeMode::Orthonormal:
            return "orthonormal";
        case ProbeMode::Shared:
            return "shared";
        case ProbeMode::Custom:
            return "custom";
    }
    return "?";
}

std::string to_string(AttackPlacement placement) {
    switch (placement) {
        case AttackPlacement::None:
            return "none";
        case AttackPlacement::AuthOnA:
            return "auth_on_A";
        case AttackPlacement::AuthOnB:
            return "auth_on_B";
        case AttackPlacement::KdOnB:
            return "kd_on_B";
    }
    return "?";
}

ProbeMode parse_probe_mode(std::string_view text) {
    if (text == "orthonormal") return ProbeMode::Orthonormal;
    if (text == "shared") return ProbeMode::Shared;
    if (text == "custom") return ProbeMode::Custom;
    throw ConfigError("unknown probe_mode '" + std::string(text) + "'");
}

AttackPlacement parse_placement(std::string_view text) {
    if (text == "none") return AttackPlacement::None;
    if (text == "auth_on_A") return AttackPlacement::AuthOnA;
    if (text == "auth_on_B") return AttackPlacement::AuthOnB;
    if (text == "kd_on_B") return AttackPlacement::KdOnB;
    throw ConfigError("unknown attack placement '" + std::string(text) + "'");
}

std::string AttackReport::summary() const {
    std::ostringstream out;
    for (size_t i = 0; i < violations.size(); ++i) {
        if (i) out << "; ";
        out << violations[i].message << " (residual " << violations[i].residual << ")";
    }
    return out.str();
}

AttackParams make_attack(double theta, ProbeMode mode) {
    AttackParams p;
    set_amplitudes(p, theta);
    p.initial_probe = unit(4, 0);
    switch (mode) {
        case ProbeMode::Orthonormal:
            p.e00 = unit(4, 0);
            p.e01 = unit(4, 1);
            p.e10 = unit(4, 2);
            p.e11 = unit(4, 3);
            break;
        case ProbeMode::Shared:
            p.e00 = p.e01 = p.e10 = p.e11 = p.initial_probe;
            break;
        case ProbeMode::Custom:
            throw ConfigError("custom probe mode needs explicit probe vectors");
    }
    return p;
}

AttackParams make_attack(double theta, std::vector<ProbeVector> probes, ProbeVector initial_probe) {
    if (probes.size() != 4) {
        throw ValidationError("custom attack needs exactly four probe vectors");
    }
    AttackParams p;
    set_amplitudes(p, theta);
    p.e00 = std::move(probes[0]);
    p.e01 = std::move(probes[1]);
    p.e10 = std::move(probes[2]);
    p.e11 = std::move(probes[3]);
    p.initial_probe = std::move(initial_probe);
    if (auto report = validate_attack(p); !report.ok()) {
        throw ValidationError("invalid attack: " + report.summary());
    }
    return p;
}

AttackReport validate_attack(const AttackParams& p, double tol) {
    using Kind = AttackViolation::Kind;
    AttackReport report;
    const size_t dim = p.initial_probe.size();
    if (dim == 0 || dim > 4 || p.e00.size() != dim || p.e01.size() != dim || p.e10.size() != dim ||
        p.e11.size() != dim) {
        report.violations.push_back({Kind::ProbeShape, 0.0, "probe vectors must share one dimension in [1, 4]"});
        return report;
    }
    const double init_res = std::abs(inner(p.initial_probe, p.initial_probe).real() - 1.0);
    if (init_res > tol) {
        report.violations.push_back({Kind::ProbeNorm, init_res, "initial probe is not normalized"});
    }
    const double n0 = std::norm(p.alpha) + std::norm(p.beta) - 1.0;
    if (std::abs(n0) > tol) {
        report.violations.push_back({Kind::Normalization, std::abs(n0), "|alpha|^2 + |beta|^2 != 1"});
    }
    const double n1 = std::norm(p.alpha_prime) + std::norm(p.beta_prime) - 1.0;
    if (std::abs(n1) > tol) {
        report.violations.push_back({Kind::NormalizationPrime, std::abs(n1), "|alpha'|^2 + |beta'|^2 != 1"});
    }
    // Output columns: col0 = alpha|0>e00 + beta|1>e01, col1 = beta'|0>e10 + alpha'|1>e11.
    const double c0 = std::norm(p.alpha) * inner(p.e00, p.e00).real() + std::norm(p.beta) * inner(p.e01, p.e01).real();
    const double c1 = std::norm(p.beta_prime) * inner(p.e10, p.e10).real() +
                      std::norm(p.alpha_prime) * inner(p.e11, p.e11).real();
    const double col_res = std::max(std::abs(c0 - 1.0), std::abs(c1 - 1.0));
    if (col_res > tol) {
        report.violations.push_back({Kind::ColumnNorm, col_res, "isometry output columns are not unit vectors"});
    }
    const Complex cross = std::conj(p.alpha) * p.beta_prime * inner(p.e00, p.e10) +
                          std::conj(p.beta) * p.alpha_prime * inner(p.e01, p.e11);
    if (std::abs(cross) > tol) {
        report.violations.push_back(
            {Kind::CrossConstraint, std::abs(cross), "isometry output columns are not orthogonal"});
    }
    return report;
}

std::string_view attack_target(AttackPlacement placement) {
    switch (placement) {
        case AttackPlacement::AuthOnA:
            return "A";
        case AttackPlacement::AuthOnB:
        case AttackPlacement::KdOnB:
            return "B";
        case AttackPlacement::None:
            break;
    }
    throw ConfigError("placement 'none' has no target");
}

Statevector apply_attack(Statevector state, const AttackParams& params, AttackPlacement placement,
                         ProtocolPhase phase) {
    if (placement == AttackPlacement::None) {
        return state;
    }
    const bool auth = placement == AttackPlacement::AuthOnA || placement == AttackPlacement::AuthOnB;
    if (auth != (phase == ProtocolPhase::Auth)) {
        throw ConfigError("attack placement " + to_string(placement) + " does not belong to this phase");
    }
    auto probed = attach_probe(state, params.probe_dim(), params.initial_probe);
    return apply_probe_isometry(probed, params, attack_target(placement));
}

}  // namespace ghzqkd
