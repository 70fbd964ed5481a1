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

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ghzqkd/cli.hpp"
#include "ghzqkd/errors.hpp"
#include "ghzqkd/oracle.hpp"
#include "ghzqkd/protocol.hpp"

namespace py = pybind11;
using namespace ghzqkd;

namespace {

py::dict distribution_to_dict(const OutcomeDistribution& dist) {
    py::dict out;
    for (const auto& key : dist.support()) {
        out[py::make_tuple(to_string(static_cast<BellOutcome>(key[0])), to_string(static_cast<XOutcome>(key[1])))] =
            dist.probability(key);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_ghzqkd, m) {
    m.doc() = "GHZ-based quantum authentication and key distribution simulator.";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<RegistryError>(m, "RegistryError", PyExc_RuntimeError);

    py::enum_<EncodingOp>(m, "EncodingOp").value("I", EncodingOp::I).value("H", EncodingOp::H);
    py::enum_<BellOutcome>(m, "BellOutcome")
        .value("PhiPlus", BellOutcome::PhiPlus)
        .value("PhiMinus", BellOutcome::PhiMinus)
        .value("PsiPlus", BellOutcome::PsiPlus)
        .value("PsiMinus", BellOutcome::PsiMinus);
    py::enum_<XOutcome>(m, "XOutcome").value("Plus", XOutcome::Plus).value("Minus", XOutcome::Minus);
    py::enum_<Inference>(m, "Inference")
        .value("BobI", Inference::BobI)
        .value("BobH", Inference::BobH)
        .value("Invalid", Inference::Invalid);
    py::enum_<ProbeMode>(m, "ProbeMode")
        .value("Orthonormal", ProbeMode::Orthonormal)
        .value("Shared", ProbeMode::Shared);
    py::enum_<AttackPlacement>(m, "AttackPlacement")
        .value("AuthOnA", AttackPlacement::AuthOnA)
        .value("AuthOnB", AttackPlacement::AuthOnB)
        .value("KdOnB", AttackPlacement::KdOnB);

    py::class_<AttackParams>(m, "AttackParams")
        .def_readonly("alpha", &AttackParams::alpha)
        .def_readonly("beta", &AttackParams::beta)
        .def_readonly("alpha_prime", &AttackParams::alpha_prime)
        .def_readonly("beta_prime", &AttackParams::beta_prime)
        .def_readonly("e00", &AttackParams::e00)
        .def_readonly("e01", &AttackParams::e01)
        .def_readonly("e10", &AttackParams::e10)
        .def_readonly("e11", &AttackParams::e11)
        .def_readonly("initial_probe", &AttackParams::initial_probe)
        .def("has_orthonormal_probes", &AttackParams::has_orthonormal_probes, py::arg("tol") = 1e-10);

    m.def("make_attack", py::overload_cast<double, ProbeMode>(&make_attack), py::arg("theta"),
          py::arg("probe_mode") = ProbeMode::Orthonormal);
    m.def(
        "validate_attack",
        [](const AttackParams& p) {
            std::vector<std::string> messages;
            for (const auto& v : validate_attack(p).violations) {
                messages.push_back(v.message);
            }
            return messages;
        },
        "Violated isometry conditions; empty when the attack is valid.");

    m.def("table1_distribution",
          [](EncodingOp a, EncodingOp b) { return distribution_to_dict(table1_distribution(a, b)); });
    m.def("infer_bob_bit", &infer_bob_bit);

    m.def("auth_detection_exact", &auth_detection_exact, py::arg("attack"), py::arg("key_bit"),
          py::arg("placement") = AttackPlacement::AuthOnA);
    m.def("auth_detection_average", &auth_detection_average, py::arg("attack"),
          py::arg("placement") = AttackPlacement::AuthOnA);
    m.def("auth_detection_closed_form", &auth_detection_closed_form);
    m.def("auth_detection_c_bits", &auth_detection_c_bits);
    m.def("kd_error_exact", [](const AttackParams& p, EncodingOp a, EncodingOp b) { return kd_error_exact(p, a, b); });
    m.def("kd_error_average", &kd_error_average);
    m.def("kd_error_closed_form", &kd_error_closed_form);

    m.def(
        "monte_carlo_detection",
        [](const std::string& mode, std::optional<AttackParams> attack, uint64_t trials, uint64_t seed) {
            MonteCarloConfig cfg;
            cfg.mode = parse_detection_mode(mode);
            cfg.attack = std::move(attack);
            cfg.trials = trials;
            cfg.seed = seed;
            const auto r = monte_carlo_detection(cfg);
            py::dict d;
            d["exact_probability"] = r.exact_probability;
            d["closed_form_probability"] = r.closed_form_probability;
            d["monte_carlo_estimate"] = r.monte_carlo_estimate;
            d["monte_carlo_trials"] = r.monte_carlo_trials;
            d["standard_error"] = r.standard_error;
            d["orthonormal_probes"] = r.orthonormal_probes;
            d["balanced_key_bits"] = r.balanced_key_bits;
            return d;
        },
        py::arg("mode"), py::arg("attack") = py::none(), py::arg("trials") = 100000, py::arg("seed") = 0);

    m.def("trent_key_ignorance", [] {
        const auto r = trent_key_ignorance();
        py::dict d;
        d["bob_bit_given_x"] = r.bob_bit_given_x;
        d["mutual_information"] = r.mutual_information;
        d["residual_entropy_with_alice_view"] = r.residual_entropy_with_alice_view;
        return d;
    });

    m.def(
        "privacy_amplify",
        [](const std::string& raw_key, size_t output_length, uint64_t seed) {
            return bits_to_string(privacy_amplify(bits_from_string(raw_key), output_length, seed));
        },
        "Toeplitz hash of a '0'/'1' string.");

    py::class_<Registry>(m, "Registry")
        .def(py::init<>())
        .def(
            "register_identity",
            [](Registry& r, const std::string& user, const std::string& secret_hex, const std::string& hash_id) {
                r.register_identity(user, from_hex(secret_hex), hash_id);
            },
            py::arg("user"), py::arg("secret_hex"), py::arg("hash_id") = std::string(kDefaultHash))
        .def("counter", [](const Registry& r, const std::string& user) { return r.identity(user).counter; })
        .def("keystream",
             [](Registry& r, const std::string& user, size_t nbits) { return bits_to_string(r.keystream(user, nbits).bits); })
        .def("to_json", &Registry::to_json)
        .def_static("from_json", [](const std::string& text) { return Registry::from_json(text); });

    m.def(
        "run_session_json",
        [](const std::string& config_json, Registry& registry) {
            const auto rc = cli::parse_run_config(config_json);
            return session_result_to_json(run_session(rc.session, registry)).dump();
        },
        py::arg("config_json"), py::arg("registry"),
        "Runs one session from a run-configuration JSON document; returns the SessionResult JSON.");

    m.def("sweep_csv", [](const std::string& mode, ProbeMode probe_mode, const std::vector<double>& thetas,
                          uint64_t trials, uint64_t seed) {
        return cli::sweep_csv(parse_detection_mode(mode), probe_mode, AttackPlacement::AuthOnA, thetas, trials, seed);
    });

    m.def("table1_json", [] { return cli::table1_json().dump(); });
}
