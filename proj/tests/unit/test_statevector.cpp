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

#include <cmath>

#include "dense_reference.hpp"
#include "doctest.h"
#include "ghzqkd/errors.hpp"
#include "ghzqkd/statevector.hpp"
#include "test_support.hpp"

using namespace ghzqkd;
using ghzqkd::testing::random_state;
using ghzqkd::testing::within_3_sigma;

namespace {

const double r2 = 1.0 / std::sqrt(2.0);

Statevector one_qubit(Complex a0, Complex a1) { return Statevector({"q0"}, 1, {a0, a1}); }

std::vector<MeasurementStep> bell_then_x() { return {MeasurementStep::bell("A", "B"), MeasurementStep::x("T")}; }

}  // namespace

TEST_CASE("make_ghz prepares (|000> + |111>)/sqrt2 over A, T, B") {
    const auto g = make_ghz();
    CHECK(g.labels() == std::vector<std::string>{"A", "T", "B"});
    CHECK(g.probe_dim() == 1);
    for (size_t i = 0; i < 8; ++i) {
        const double expected = (i == 0b000 || i == 0b111) ? r2 : 0.0;
        CHECK(std::abs(g.amplitude(i) - Complex(expected)) < 1e-15);
    }
    CHECK(std::abs(g.norm() - 1.0) < 1e-15);

    const std::vector<MeasurementStep> plan{MeasurementStep::z("A"), MeasurementStep::z("T"), MeasurementStep::z("B")};
    const auto dist = exact_distribution(g, plan);
    CHECK(dist.probability({0, 0, 0}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(dist.probability({1, 1, 1}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(dist.support().size() == 2);
}

TEST_CASE("apply_single") {
    SUBCASE("Hadamard maps |0> to |+>") {
        const auto plus = apply_single(one_qubit(1.0, 0.0), Gate2x2::hadamard(), "q0");
        CHECK(approx_equal(plus, one_qubit(r2, r2)));
    }
    SUBCASE("identity leaves GHZ unchanged") {
        CHECK(approx_equal(apply_single(make_ghz(), Gate2x2::identity(), "A"), make_ghz(), 0.0));
    }
    SUBCASE("H twice restores a random state") {
        Rng rng(7);
        for (int trial = 0; trial < 20; ++trial) {
            const auto s = random_state({"A", "T", "B"}, 4, rng);
            for (const char* t : {"A", "T", "B"}) {
                auto twice = apply_single(apply_single(s, Gate2x2::hadamard(), t), Gate2x2::hadamard(), t);
                CHECK(approx_equal(twice, s, 1e-12));
            }
        }
    }
    SUBCASE("unknown label") { CHECK_THROWS_AS(apply_single(make_ghz(), Gate2x2::hadamard(), "E"), LabelError); }
    SUBCASE("non-unitary gate") {
        Gate2x2 bad{{Complex{1.0}, Complex{1.0}, Complex{0.0}, Complex{1.0}}};
        CHECK_THROWS_AS(apply_single(make_ghz(), bad, "A"), ValidationError);
    }
}

TEST_CASE("built-in gates are unitary") {
    for (const auto& g : {Gate2x2::identity(), Gate2x2::hadamard()}) {
        double worst = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const Complex s = std::conj(g.m[i]) * g.m[j] + std::conj(g.m[2 + i]) * g.m[2 + j];
                worst = std::max(worst, std::abs(s - Complex(i == j ? 1.0 : 0.0)));
            }
        CHECK(worst < 1e-10);
        CHECK(g.is_unitary());
    }
}

TEST_CASE("Statevector construction rejects malformed input") {
    CHECK_THROWS_AS(Statevector({"A"}, 1, {1.0, 0.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(Statevector({"A"}, 1, {1.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(Statevector({"A", "A"}, 1, {1.0, 0.0, 0.0, 0.0}), LabelError);
    CHECK_THROWS_AS(Statevector({"A"}, 1, {Complex(std::nan(""), 0.0), 0.0}), ValidationError);
}

TEST_CASE("attach_probe") {
    const std::vector<Complex> e0{1.0, 0.0, 0.0, 0.0};
    const auto s = attach_probe(make_ghz(), 4, e0);
    // 2^3 qubit amplitudes times a 4-dimensional probe.
    CHECK(s.dimension() == 32);
    CHECK(s.probe_dim() == 4);
    CHECK(std::abs(s.norm() - 1.0) < 1e-12);
    CHECK(std::abs(s.amplitude(0b000, 0) - Complex(r2)) < 1e-15);
    CHECK(std::abs(s.amplitude(0b111, 0) - Complex(r2)) < 1e-15);

    const std::vector<Complex> scalar{1.0};
    CHECK(approx_equal(attach_probe(make_ghz(), 1, scalar), make_ghz(), 0.0));

    const std::vector<Complex> unnormalized{1.0, 1.0, 0.0, 0.0};
    CHECK_THROWS_AS(attach_probe(make_ghz(), 4, unnormalized), ValidationError);
    CHECK_THROWS_AS(attach_probe(s, 4, e0), ValidationError);
    CHECK_THROWS_AS(attach_probe(make_ghz(), 3, e0), ValidationError);
}

TEST_CASE("apply_probe_isometry") {
    SUBCASE("identity attack on |0> leaves the state unchanged") {
        const auto attack = make_attack(0.0, ProbeMode::Shared);
        const auto s = attach_probe(Statevector::basis({"A"}, std::vector<int>{0}), 4, attack.initial_probe);
        CHECK(approx_equal(apply_probe_isometry(s, attack, "A"), s, 1e-15));
    }
    SUBCASE("theta = 0 with orthonormal probes gives (|000>|e00> + |111>|e11>)/sqrt2") {
        const auto attack = make_attack(0.0, ProbeMode::Orthonormal);
        const auto s = apply_probe_isometry(attach_probe(make_ghz(), 4, attack.initial_probe), attack, "A");
        for (size_t q = 0; q < 8; ++q)
            for (size_t e = 0; e < 4; ++e) {
                double expected = 0.0;
                if (q == 0b000 && e == 0) expected = r2;  // e00 = basis 0
                if (q == 0b111 && e == 3) expected = r2;  // e11 = basis 3
                CHECK(std::abs(s.amplitude(q, e) - Complex(expected)) < 1e-12);
            }
    }
    SUBCASE("generic theta: four terms with weights alpha^2, beta^2, beta'^2, alpha'^2 over 2") {
        for (double theta : {0.3, 0.9, 1.2}) {
            const auto p = make_attack(theta, ProbeMode::Orthonormal);
            const auto s = apply_probe_isometry(attach_probe(make_ghz(), 4, p.initial_probe), p, "A");
            const std::vector<MeasurementStep> plan{MeasurementStep::z("A"), MeasurementStep::z("T"),
                                                    MeasurementStep::z("B")};
            const auto dist = exact_distribution(s, plan);
            CHECK(dist.probability({0, 0, 0}) == doctest::Approx(std::norm(p.alpha) / 2).epsilon(1e-12));
            CHECK(dist.probability({1, 0, 0}) == doctest::Approx(std::norm(p.beta) / 2).epsilon(1e-12));
            CHECK(dist.probability({0, 1, 1}) == doctest::Approx(std::norm(p.beta_prime) / 2).epsilon(1e-12));
            CHECK(dist.probability({1, 1, 1}) == doctest::Approx(std::norm(p.alpha_prime) / 2).epsilon(1e-12));

            // Full amplitude comparison against the dense matrix route.
            const dense::Vec ref = dense::attack_on_wire(p, 0) * dense::ghz(4, p.initial_probe);
            for (size_t i = 0; i < s.dimension(); ++i) {
                CHECK(std::abs(s.amplitudes()[i] - ref(static_cast<Eigen::Index>(i))) < 1e-12);
            }
        }
    }
    SUBCASE("errors") {
        const auto p = make_attack(0.4, ProbeMode::Orthonormal);
        CHECK_THROWS_AS(apply_probe_isometry(make_ghz(), p, "A"), ValidationError);
        // probe no longer in the initial state after a first application
        const auto once = apply_probe_isometry(attach_probe(make_ghz(), 4, p.initial_probe), p, "A");
        CHECK_THROWS_AS(apply_probe_isometry(once, p, "B"), ValidationError);
        auto bad = p;
        bad.beta = 0.5;
        CHECK_THROWS_AS(apply_probe_isometry(attach_probe(make_ghz(), 4, p.initial_probe), bad, "A"), ValidationError);
    }
}

TEST_CASE("measure_z") {
    Rng rng(11);
    SUBCASE("eigenstate") {
        for (int i = 0; i < 50; ++i) {
            auto m = measure_z(one_qubit(0.0, 1.0), "q0", rng);
            CHECK(m.outcome == ZOutcome::One);
            CHECK(approx_equal(m.state, one_qubit(0.0, 1.0)));
        }
    }
    SUBCASE("GHZ outcomes are correlated and balanced") {
        size_t zeros = 0;
        const size_t trials = 10000;
        for (size_t i = 0; i < trials; ++i) {
            auto a = measure_z(make_ghz(), "A", rng);
            auto t = measure_z(a.state, "T", rng);
            auto b = measure_z(t.state, "B", rng);
            CHECK(t.outcome == a.outcome);
            CHECK(b.outcome == a.outcome);
            zeros += a.outcome == ZOutcome::Zero;
        }
        CHECK(within_3_sigma(zeros, trials, 0.5));
    }
    SUBCASE("|+> gives Zero half the time") {
        size_t zeros = 0;
        const size_t trials = 20000;
        for (size_t i = 0; i < trials; ++i) zeros += measure_z(one_qubit(r2, r2), "q0", rng).outcome == ZOutcome::Zero;
        CHECK(within_3_sigma(zeros, trials, 0.5));
    }
}

TEST_CASE("measure_x") {
    Rng rng(12);
    for (int i = 0; i < 50; ++i) {
        auto m = measure_x(one_qubit(r2, r2), "q0", rng);
        CHECK(m.outcome == XOutcome::Plus);
    }
    size_t plus = 0;
    const size_t trials = 20000;
    for (size_t i = 0; i < trials; ++i) plus += measure_x(one_qubit(1.0, 0.0), "q0", rng).outcome == XOutcome::Plus;
    CHECK(within_3_sigma(plus, trials, 0.5));

    SUBCASE("GHZ measured on T leaves (|00> +- |11>)/sqrt2 on A, B") {
        const std::vector<MeasurementStep> plan{MeasurementStep::x("T")};
        const auto dist = exact_distribution(make_ghz(), plan);
        CHECK(dist.probability({0}) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(dist.probability({1}) == doctest::Approx(0.5).epsilon(1e-12));
        for (int i = 0; i < 40; ++i) {
            auto m = measure_x(make_ghz(), "T", rng);
            const double sign = m.outcome == XOutcome::Plus ? 1.0 : -1.0;
            // T is left in |+> or |->; A,B carry (|00> + sign|11>)/sqrt2.
            for (int t = 0; t < 2; ++t) {
                const double tx = (t == 0 ? 1.0 : sign) * r2;
                CHECK(std::abs(m.state.amplitude(0b000 | (t << 1)) - Complex(r2 * tx)) < 1e-12);
                CHECK(std::abs(m.state.amplitude(0b101 | (t << 1)) - Complex(sign * r2 * tx)) < 1e-12);
            }
        }
    }
}

TEST_CASE("measure_bell") {
    Rng rng(13);
    const Statevector phi_plus({"A", "B"}, 1, {r2, 0.0, 0.0, r2});
    for (int i = 0; i < 50; ++i) {
        auto m = measure_bell(phi_plus, "A", "B", rng);
        CHECK(m.outcome == BellOutcome::PhiPlus);
        CHECK(approx_equal(m.state, phi_plus, 1e-12));
    }
    const auto ket01 = Statevector::basis({"A", "B"}, std::vector<int>{0, 1});
    const std::vector<MeasurementStep> plan{MeasurementStep::bell("A", "B")};
    const auto dist = exact_distribution(ket01, plan);
    CHECK(dist.probability({2}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(dist.probability({3}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(dist.probability({0}) == 0.0);
    CHECK_THROWS_AS(measure_bell(ket01, "A", "A", rng), LabelError);

    SUBCASE("GHZ after (I, I): only (Phi+, +) and (Phi-, -)") {
        for (int i = 0; i < 200; ++i) {
            auto b = measure_bell(make_ghz(), "A", "B", rng);
            auto x = measure_x(b.state, "T", rng);
            const bool ok = (b.outcome == BellOutcome::PhiPlus && x.outcome == XOutcome::Plus) ||
                            (b.outcome == BellOutcome::PhiMinus && x.outcome == XOutcome::Minus);
            CHECK(ok);
        }
    }
}

TEST_CASE("exact_distribution reproduces the reversed-GHZ outcome table") {
    const auto plan = bell_then_x();
    auto prepared = [](bool ha, bool hb) {
        auto s = make_ghz();
        if (ha) s = apply_single(s, Gate2x2::hadamard(), "A");
        if (hb) s = apply_single(s, Gate2x2::hadamard(), "B");
        return s;
    };
    const auto ii = exact_distribution(prepared(false, false), plan);
    CHECK(ii.probability({0, 0}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ii.probability({1, 1}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ii.support().size() == 2);

    const auto hh = exact_distribution(prepared(true, true), plan);
    CHECK(hh.probability({0, 0}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(hh.probability({2, 1}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(hh.support().size() == 2);

    const auto ih = exact_distribution(prepared(false, true), plan);
    for (OutcomeDistribution::Key k : {OutcomeDistribution::Key{0, 1}, {1, 0}, {2, 0}, {3, 1}}) {
        CHECK(ih.probability(k) == doctest::Approx(0.25).epsilon(1e-12));
    }
    CHECK(ih.support().size() == 4);

    const std::vector<MeasurementStep> overlapping{MeasurementStep::bell("A", "B"), MeasurementStep::z("B")};
    CHECK_THROWS_AS(exact_distribution(make_ghz(), overlapping), LabelError);
}

TEST_CASE("OutcomeDistribution clamps rounding noise only") {
    OutcomeDistribution d({MeasurementStep::z("A")});
    d.add({0}, -5e-13);
    CHECK(d.probability({0}) == 0.0);
    CHECK_THROWS_AS(d.add({1}, -1e-9), ValidationError);
    CHECK_THROWS_AS(d.add({1, 0}, 0.5), ValidationError);
}

TEST_CASE("property: norm preservation under gates, isometries and collapse") {
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        auto s = random_state({"A", "T", "B"}, 1, rng);
        for (int k = 0; k < 6; ++k) {
            const char* labels[] = {"A", "T", "B"};
            s = apply_single(std::move(s), rng.bit() ? Gate2x2::hadamard() : Gate2x2::identity(), labels[rng.below(3)]);
            CHECK(std::abs(s.norm() - 1.0) < 1e-12);
        }
        const auto p = make_attack(rng.uniform() * testing::kPi, rng.bit() ? ProbeMode::Orthonormal : ProbeMode::Shared);
        s = apply_attack(std::move(s), p, rng.bit() ? AttackPlacement::AuthOnA : AttackPlacement::AuthOnB,
                         ProtocolPhase::Auth);
        CHECK(std::abs(s.norm() - 1.0) < 1e-12);
        auto m = measure_bell(s, "A", "B", rng);
        CHECK(std::abs(m.state.norm() - 1.0) < 1e-12);
        auto x = measure_x(m.state, "T", rng);
        CHECK(std::abs(x.state.norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("property: exact distributions do not depend on measurement order") {
    Rng rng(1234);
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = random_state({"A", "T", "B"}, trial % 2 ? 4 : 1, rng);
        const std::vector<MeasurementStep> fwd{MeasurementStep::bell("A", "B"), MeasurementStep::x("T")};
        const std::vector<MeasurementStep> rev{MeasurementStep::x("T"), MeasurementStep::bell("A", "B")};
        CHECK(exact_distribution(s, fwd).max_difference(exact_distribution(s, rev)) < 1e-10);

        const std::vector<MeasurementStep> zs{MeasurementStep::z("A"), MeasurementStep::x("T"), MeasurementStep::z("B")};
        const std::vector<MeasurementStep> sz{MeasurementStep::z("B"), MeasurementStep::z("A"), MeasurementStep::x("T")};
        CHECK(exact_distribution(s, zs).max_difference(exact_distribution(s, sz)) < 1e-10);
    }
}

TEST_CASE("property: sampled outcomes converge to the exact distribution in either order") {
    Rng gen(77);
    const auto s = random_state({"A", "T", "B"}, 1, gen);
    const std::vector<MeasurementStep> plan{MeasurementStep::bell("A", "B"), MeasurementStep::x("T")};
    const auto exact = exact_distribution(s, plan);

    const size_t trials = 100000;
    std::map<OutcomeDistribution::Key, size_t> bell_first, trent_first;
    Rng rng(78);
    for (size_t i = 0; i < trials; ++i) {
        auto b = measure_bell(s, "A", "B", rng);
        auto x = measure_x(b.state, "T", rng);
        ++bell_first[{static_cast<int>(b.outcome), static_cast<int>(x.outcome)}];
    }
    for (size_t i = 0; i < trials; ++i) {
        auto x = measure_x(s, "T", rng);
        auto b = measure_bell(x.state, "A", "B", rng);
        ++trent_first[{static_cast<int>(b.outcome), static_cast<int>(x.outcome)}];
    }
    for (const auto& [key, p] : exact.entries()) {
        CHECK(within_3_sigma(bell_first[key], trials, p));
        CHECK(within_3_sigma(trent_first[key], trials, p));
    }
}

TEST_CASE("JSON dump round trip and global-phase comparison") {
    Rng rng(5);
    const auto s = random_state({"A", "T", "B"}, 4, rng);
    const auto back = load_state_json(dump_state_json(s));
    CHECK(approx_equal(s, back, 0.0));
    CHECK_THROWS_AS(load_state_json("{\"labels\": [\"A\"]}"), ValidationError);

    auto rotated = s;
    for (auto& a : rotated.mutable_amplitudes()) a *= std::polar(1.0, 0.7);
    CHECK(equal_up_to_global_phase(s, rotated));
    CHECK_FALSE(approx_equal(s, rotated));
    auto perturbed = rotated;
    perturbed.mutable_amplitudes()[3] *= -1.0;
    CHECK_FALSE(equal_up_to_global_phase(s, perturbed));
}
