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
#include "qets/qsim/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "qets/core/error.hpp"
#include "qets/core/random.hpp"

namespace qets::qsim {

StateVector StateVector::zero(std::size_t qubit_count) {
    if (qubit_count == 0 || qubit_count > 62) {
        throw ValidationError(fmt::format("unsupported qubit count {}", qubit_count));
    }
    std::vector<Complex> amps(std::size_t{1} << qubit_count, Complex{0.0, 0.0});
    amps[0] = 1.0;
    return {qubit_count, std::move(amps)};
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
    const auto n = amplitudes.size();
    if (n < 2 || (n & (n - 1)) != 0) {
        throw ValidationError("amplitude count must be a power of two >= 2");
    }
    std::size_t q = 0;
    while ((std::size_t{1} << q) < n) {
        ++q;
    }
    return {q, std::move(amplitudes)};
}

Complex StateVector::amplitude(const std::string &bitstring) const {
    if (bitstring.size() != qubit_count_) {
        throw ValidationError("bitstring length does not match qubit count");
    }
    return amplitudes_[basis_index(bitstring)];
}

double StateVector::norm_squared() const noexcept {
    double sum = 0.0;
    for (const auto &a : amplitudes_) {
        sum += std::norm(a);
    }
    return sum;
}

std::vector<double> StateVector::probabilities() const {
    std::vector<double> p(amplitudes_.size());
    std::transform(amplitudes_.begin(), amplitudes_.end(), p.begin(),
                   [](const Complex &a) { return std::norm(a); });
    return p;
}

namespace {

void check_qubit(const StateVector &state, std::size_t qubit) {
    if (qubit >= state.qubit_count()) {
        throw ValidationError(fmt::format("qubit {} out of range for {} qubits", qubit,
                                          state.qubit_count()));
    }
}

} // namespace

void apply_gate_inplace(StateVector &state, const Gate &gate) {
    check_qubit(state, gate.max_index());
    auto amps = state.amplitudes();
    const std::uint64_t dim = amps.size();
    const std::uint64_t tm = state.mask(gate.target());
    if (gate.kind() == GateKind::rot_y) {
        const double c = std::cos(gate.angle() / 2.0);
        const double s = std::sin(gate.angle() / 2.0);
        for (std::uint64_t i = 0; i < dim; ++i) {
            if (i & tm) {
                continue;
            }
            const Complex a0 = amps[i];
            const Complex a1 = amps[i | tm];
            amps[i] = c * a0 - s * a1;
            amps[i | tm] = s * a0 + c * a1;
        }
        return;
    }
    const std::uint64_t cm = state.mask(gate.control());
    for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & cm) && !(i & tm)) {
            std::swap(amps[i], amps[i | tm]);
        }
    }
}

void apply_pauli_inplace(StateVector &state, std::size_t qubit, int pauli) {
    check_qubit(state, qubit);
    auto amps = state.amplitudes();
    const std::uint64_t m = state.mask(qubit);
    const std::uint64_t dim = amps.size();
    const Complex i_unit{0.0, 1.0};
    switch (pauli) {
    case 0:
        return;
    case 1:
        for (std::uint64_t i = 0; i < dim; ++i) {
            if (!(i & m)) {
                std::swap(amps[i], amps[i | m]);
            }
        }
        return;
    case 2:
        for (std::uint64_t i = 0; i < dim; ++i) {
            if (!(i & m)) {
                const Complex a0 = amps[i];
                amps[i] = -i_unit * amps[i | m];
                amps[i | m] = i_unit * a0;
            }
        }
        return;
    case 3:
        for (std::uint64_t i = 0; i < dim; ++i) {
            if (i & m) {
                amps[i] = -amps[i];
            }
        }
        return;
    default:
        throw ValidationError(fmt::format("invalid Pauli index {}", pauli));
    }
}

StateVector run_statevector(const Circuit &circuit, std::size_t max_qubits) {
    if (circuit.qubit_count() > max_qubits) {
        throw CapacityError(fmt::format(
            "{} qubits exceeds the statevector limit of {}", circuit.qubit_count(),
            max_qubits));
    }
    auto state = StateVector::zero(circuit.qubit_count());
    for (const auto &g : circuit.gates()) {
        apply_gate_inplace(state, g);
    }
    return state;
}

double expectation_z(const StateVector &state, std::size_t qubit) {
    check_qubit(state, qubit);
    const auto amps = state.amplitudes();
    const std::uint64_t m = state.mask(qubit);
    double z = 0.0;
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        z += (i & m) ? -std::norm(amps[i]) : std::norm(amps[i]);
    }
    return std::clamp(z, -1.0, 1.0);
}

double fidelity(const StateVector &a, const StateVector &b) {
    if (a.dimension() != b.dimension()) {
        throw ValidationError("fidelity of states with different dimensions");
    }
    Complex overlap{0.0, 0.0};
    const auto x = a.amplitudes();
    const auto y = b.amplitudes();
    for (std::size_t i = 0; i < x.size(); ++i) {
        overlap += std::conj(x[i]) * y[i];
    }
    return std::norm(overlap);
}

OutcomeSampler::OutcomeSampler(std::span<const double> probabilities)
    : cumulative_(probabilities.size()) {
    double acc = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        acc += probabilities[i];
        cumulative_[i] = acc;
    }
    if (!(acc > 0.0)) {
        throw DataQualityError("cannot sample from an all-zero distribution");
    }
}

std::uint64_t OutcomeSampler::draw(double u) const {
    const double target = u * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    if (it == cumulative_.end()) {
        --it;
    }
    // upper_bound never lands on a zero-probability outcome.
    return static_cast<std::uint64_t>(it - cumulative_.begin());
}

Histogram sample(const StateVector &state, std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) {
        throw ValidationError("shots must be at least 1");
    }
    const auto probs = state.probabilities();
    const OutcomeSampler sampler(probs);
    Rng rng(seed);
    std::vector<std::uint64_t> tally(probs.size(), 0);
    for (std::uint64_t s = 0; s < shots; ++s) {
        ++tally[sampler.draw(uniform01(rng))];
    }
    Histogram hist(state.qubit_count());
    for (std::uint64_t i = 0; i < tally.size(); ++i) {
        if (tally[i] != 0) {
            hist.add(basis_string(i, state.qubit_count()), tally[i]);
        }
    }
    return hist;
}

} // namespace qets::qsim
