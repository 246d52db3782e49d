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
#include "qets/qsim/noise.hpp"

#include <vector>

#include <fmt/format.h>

#include "qets/core/error.hpp"
#include "qets/core/random.hpp"

namespace qets::qsim {

void NoiseParams::validate() const {
    auto check = [](double p, const char *name) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ValidationError(fmt::format("noise.{} = {} is outside [0, 1]", name, p));
        }
    };
    check(p1, "p1");
    check(p2, "p2");
    check(p_ro, "p_ro");
}

namespace {

struct PauliEvent {
    std::size_t gate;
    // One-qubit gates: 1..3 on the target. Two-qubit gates: 1..15 encodes
    // (control Pauli) * 4 + (target Pauli), identity pair excluded.
    int pauli;
};

void apply_event(StateVector &state, const Gate &gate, int pauli) {
    if (!gate.is_two_qubit()) {
        apply_pauli_inplace(state, gate.target(), pauli);
        return;
    }
    apply_pauli_inplace(state, gate.control(), pauli / 4);
    apply_pauli_inplace(state, gate.target(), pauli % 4);
}

} // namespace

Histogram run_noisy(const Circuit &circuit, const NoiseParams &noise, std::uint64_t shots,
                    std::uint64_t seed, std::size_t max_qubits) {
    noise.validate();
    if (shots == 0) {
        throw ValidationError("shots must be at least 1");
    }
    const auto ideal = run_statevector(circuit, max_qubits);
    const auto ideal_probs = ideal.probabilities();
    const OutcomeSampler ideal_sampler(ideal_probs);
    const std::size_t nq = circuit.qubit_count();
    const auto gates = circuit.gates();

    Rng rng(seed);
    std::vector<PauliEvent> events;
    std::vector<std::uint64_t> tally(ideal.dimension(), 0);
    for (std::uint64_t s = 0; s < shots; ++s) {
        events.clear();
        for (std::size_t g = 0; g < gates.size(); ++g) {
            const bool two = gates[g].is_two_qubit();
            if (bernoulli(rng, two ? noise.p2 : noise.p1)) {
                const int pauli = two ? 1 + static_cast<int>(uniform_index(rng, 15))
                                      : 1 + static_cast<int>(uniform_index(rng, 3));
                events.push_back({g, pauli});
            }
        }

        std::uint64_t outcome = 0;
        if (events.empty()) {
            outcome = ideal_sampler.draw(uniform01(rng));
        } else {
            auto state = StateVector::zero(nq);
            auto next = events.begin();
            for (std::size_t g = 0; g < gates.size(); ++g) {
                apply_gate_inplace(state, gates[g]);
                for (; next != events.end() && next->gate == g; ++next) {
                    apply_event(state, gates[g], next->pauli);
                }
            }
            const auto probs = state.probabilities();
            outcome = OutcomeSampler(probs).draw(uniform01(rng));
        }

        if (noise.p_ro > 0.0) {
            for (std::size_t q = 0; q < nq; ++q) {
                if (bernoulli(rng, noise.p_ro)) {
                    outcome ^= std::uint64_t{1} << (nq - 1 - q);
                }
            }
        }
        ++tally[outcome];
    }

    Histogram hist(nq);
    for (std::uint64_t i = 0; i < tally.size(); ++i) {
        if (tally[i] != 0) {
            hist.add(basis_string(i, nq), tally[i]);
        }
    }
    return hist;
}

} // namespace qets::qsim
