// Copyright 2026 The qets Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "qets/ansatz/ansatz.hpp"
#include "qets/core/error.hpp"
#include "qets/core/random.hpp"
#include "qets/mps/mps.hpp"
#include "qets/qsim/statevector.hpp"

using namespace qets;
using namespace qets::mps;
using qsim::Circuit;
using qsim::Gate;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double pi = std::numbers::pi;

Circuit bell() {
    Circuit c(2);
    c.add(Gate::ry(0, pi / 2));
    c.add(Gate::cnot(0, 1));
    return c;
}

Circuit random_ansatz(std::size_t q, std::size_t m, std::size_t r, std::uint64_t seed) {
    ansatz::AnsatzConfig cfg;
    cfg.Q = q;
    cfg.M = m;
    cfg.R = r;
    Rng rng(seed);
    std::vector<double> features(q);
    std::vector<double> params(cfg.trainable_param_count());
    for (auto &f : features) {
        f = uniform(rng, -pi, pi);
    }
    for (auto &p : params) {
        p = uniform(rng, -pi, pi);
    }
    return ansatz::build_circuit(cfg, features, params);
}

} // namespace

TEST_CASE("mps_from_zero examples", "[mps]") {
    const auto one = mps_from_zero(1, 4);
    REQUIRE(one.sites().size() == 1);
    CHECK(one.sites()[0].at(0, 0, 0) == Complex(1.0));
    CHECK(one.sites()[0].at(0, 1, 0) == Complex(0.0));

    const auto three = mps_from_zero(3, 4);
    const auto sv = three.to_statevector();
    CHECK(sv.amplitude("000") == Complex(1.0));
    CHECK(sv.norm_squared() == 1.0);

    for (std::size_t q : {1, 2, 5, 9}) {
        const auto s = mps_from_zero(q, 2);
        CHECK(s.norm_squared() == 1.0);
        CHECK(s.max_bond_dimension() == 1);
    }
    CHECK_THROWS_AS(mps_from_zero(0, 2), ValidationError);
    CHECK_THROWS_AS(mps_from_zero(3, 0), ValidationError);
}

TEST_CASE("local rotations keep a product state", "[mps]") {
    auto s = mps_from_zero(4, 8);
    s = apply_gate_mps(s, Gate::ry(2, 0.9));
    s = apply_gate_mps(s, Gate::ry(0, -0.4));
    CHECK(s.max_bond_dimension() == 1);
    CHECK_THAT(s.expectation_z(2), WithinAbs(std::cos(0.9), 1e-12));
}

TEST_CASE("Bell pair needs bond dimension 2", "[mps]") {
    const auto s = simulate_mps(bell(), 2);
    CHECK(s.bond_dimension(0) == 2);
    CHECK_THAT(mps_fidelity(s, qsim::run_statevector(bell())), WithinAbs(1.0, 1e-12));
}

TEST_CASE("chi_max = 1 keeps half of the Bell pair", "[mps]") {
    const auto s = simulate_mps(bell(), 1);
    CHECK(s.bond_dimension(0) == 1);
    CHECK_THAT(s.norm_squared(), WithinAbs(1.0, 1e-12));
    CHECK_THAT(mps_fidelity(s, qsim::run_statevector(bell())), WithinAbs(0.5, 1e-10));
}

TEST_CASE("mps_fidelity examples", "[mps]") {
    Circuit c(3);
    c.add(Gate::ry(1, 0.3));
    const auto s = simulate_mps(c, 2);
    CHECK_THAT(mps_fidelity(s, qsim::run_statevector(c)), WithinAbs(1.0, 1e-14));

    Circuit flip(3);
    flip.add(Gate::ry(0, pi));
    CHECK_THAT(mps_fidelity(simulate_mps(flip, 2), qsim::run_statevector(Circuit(3))),
               WithinAbs(0.0, 1e-14));

    CHECK_THROWS_AS(mps_fidelity(s, qsim::StateVector::zero(2)), ValidationError);
}

TEST_CASE("random depth-2 ansatz at Q=8 is exact with chi = 16", "[mps]") {
    const auto c = random_ansatz(8, 1, 2, 31);
    const auto s = simulate_mps(c, 16);
    CHECK(mps_fidelity(s, qsim::run_statevector(c)) >= 1.0 - 1e-8);
}

TEST_CASE("untruncated MPS matches the statevector for Q <= 12", "[mps][invariant]") {
    for (std::size_t q = 4; q <= 12; q += 2) {
        for (std::uint64_t seed = 0; seed < 2; ++seed) {
            const auto c = random_ansatz(q, 2, 4, 100 * q + seed);
            const auto s = simulate_mps(c, std::size_t{1} << (q / 2));
            CHECK(mps_fidelity(s, qsim::run_statevector(c)) >= 1.0 - 1e-8);
            CHECK(s.max_bond_dimension() <= (std::size_t{1} << (q / 2)));
        }
    }
}

TEST_CASE("norm stays 1 after every two-qubit gate under truncation", "[mps][invariant]") {
    const auto c = random_ansatz(10, 2, 4, 5);
    auto s = mps_from_zero(10, 4);
    for (const auto &g : c.gates()) {
        s.apply(g);
        if (g.is_two_qubit()) {
            REQUIRE(std::abs(s.norm_squared() - 1.0) < 1e-8);
            REQUIRE(s.max_bond_dimension() <= 4);
        }
    }
    CHECK(s.discarded_weight() > 0.0);
}

TEST_CASE("fidelity is non-decreasing in chi_max", "[mps][invariant]") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto c = random_ansatz(10, 2, 4, 70 + seed);
        const auto ref = qsim::run_statevector(c);
        double previous = 0.0;
        for (std::size_t chi : {1, 2, 4, 8, 16, 32}) {
            const double f = mps_fidelity(simulate_mps(c, chi), ref);
            CHECK(f >= previous - 1e-9);
            previous = f;
        }
        CHECK(previous >= 1.0 - 1e-8);
    }
}

TEST_CASE("stride-2 CNOTs are routed with counted swaps", "[mps]") {
    Circuit c(4);
    c.add(Gate::ry(0, pi / 2));
    c.add(Gate::cnot(0, 2));
    c.add(Gate::cnot(3, 1));
    const auto s = simulate_mps(c, 4);
    CHECK(s.logical_gate_count() == 3);
    CHECK(s.swap_count() > 0);
    CHECK_THAT(mps_fidelity(s, qsim::run_statevector(c)), WithinAbs(1.0, 1e-12));
}

TEST_CASE("expectation_z agrees with the dense backend", "[mps]") {
    const auto c = random_ansatz(6, 2, 2, 8);
    const auto s = simulate_mps(c, 8);
    const auto ref = qsim::run_statevector(c);
    for (std::size_t q = 0; q < 6; ++q) {
        CHECK_THAT(s.expectation_z(q), WithinAbs(qsim::expectation_z(ref, q), 1e-10));
    }
}

TEST_CASE("to_statevector honours the capacity bound", "[mps]") {
    const auto s = mps_from_zero(30, 2);
    CHECK_THROWS_AS(s.to_statevector(), CapacityError);
}

TEST_CASE("mps_cost examples", "[mps][cost]") {
    const auto base = mps_cost(10, 4, 100);
    CHECK(base.estimated_flops == 8.0 * 100 * 64);
    CHECK(base.scaling_class == "Q·chi^3");
    CHECK(mps_cost(10, 8, 100).estimated_flops / base.estimated_flops == 8.0);
    CHECK(mps_cost(10, 1, 37).estimated_flops == 8.0 * 37);
    CHECK(mps_cost(10, 1, 74).estimated_flops == 2.0 * mps_cost(10, 1, 37).estimated_flops);
    CHECK_THROWS_AS(mps_cost(0, 1, 1), ValidationError);
    CHECK_THROWS_AS(mps_cost(4, 0, 1), ValidationError);
    CHECK_THROWS_AS(mps_cost(4, 1, 0), ValidationError);
}

TEST_CASE("log-depth bond dimension gives quartic total cost", "[mps][cost]") {
    // chi = 2^D with D = log2 Q and a gate count linear in Q.
    for (std::size_t q : {4, 8, 16, 32}) {
        const auto small = mps_cost(q, q, 17 * q);
        const auto big = mps_cost(2 * q, 2 * q, 17 * 2 * q);
        CHECK(big.estimated_flops / small.estimated_flops == 16.0);
    }
}

TEST_CASE("mps_cost of an evolved state counts swaps", "[mps][cost]") {
    Circuit c(4);
    c.add(Gate::cnot(0, 2));
    const auto s = simulate_mps(c, 4);
    const auto report = mps_cost(s);
    CHECK(report.gate_count == s.logical_gate_count() + s.swap_count());
    CHECK(report.estimated_flops > 0.0);
}
