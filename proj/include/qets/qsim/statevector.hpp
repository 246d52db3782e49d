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
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qets/qsim/circuit.hpp"
#include "qets/qsim/histogram.hpp"

namespace qets::qsim {

using Complex = std::complex<double>;

/// Default largest register the dense backend will allocate.
inline constexpr std::size_t default_max_qubits = 26;

/// Dense 2^Q amplitude vector. Qubit q is bit (Q - 1 - q) of the basis index,
/// so the binary spelling of an index is its bitstring key.
class StateVector {
  public:
    /// |0...0>.
    static StateVector zero(std::size_t qubit_count);
    /// Takes ownership of explicit amplitudes; size must be a power of two.
    static StateVector from_amplitudes(std::vector<Complex> amplitudes);

    [[nodiscard]] std::size_t qubit_count() const noexcept { return qubit_count_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return amplitudes_.size(); }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept {
        return amplitudes_;
    }
    [[nodiscard]] std::span<Complex> amplitudes() noexcept { return amplitudes_; }
    [[nodiscard]] Complex amplitude(const std::string &bitstring) const;
    [[nodiscard]] double norm_squared() const noexcept;
    [[nodiscard]] std::vector<double> probabilities() const;

    /// Mask of qubit q inside a basis index.
    [[nodiscard]] std::uint64_t mask(std::size_t qubit) const noexcept {
        return std::uint64_t{1} << (qubit_count_ - 1 - qubit);
    }

  private:
    StateVector(std::size_t qubit_count, std::vector<Complex> amplitudes)
        : qubit_count_(qubit_count), amplitudes_(std::move(amplitudes)) {}

    std::size_t qubit_count_;
    std::vector<Complex> amplitudes_;
};

/// In-place gate application.
void apply_gate_inplace(StateVector &state, const Gate &gate);

[[nodiscard]] inline StateVector apply_gate(StateVector state, const Gate &gate) {
    apply_gate_inplace(state, gate);
    return state;
}

/// Pauli X (1), Y (2) or Z (3) on one qubit; 0 is identity.
void apply_pauli_inplace(StateVector &state, std::size_t qubit, int pauli);

/// Runs all gates from |0...0>. Throws CapacityError above `max_qubits`.
[[nodiscard]] StateVector run_statevector(const Circuit &circuit,
                                          std::size_t max_qubits = default_max_qubits);

/// <Z> of one qubit, in [-1, 1].
[[nodiscard]] double expectation_z(const StateVector &state, std::size_t qubit);

/// |<a|b>|^2.
[[nodiscard]] double fidelity(const StateVector &a, const StateVector &b);

/// Inverse-CDF sampler over a fixed probability vector. One uniform draw per
/// shot, which the noisy backend relies on to reproduce `sample` exactly.
class OutcomeSampler {
  public:
    explicit OutcomeSampler(std::span<const double> probabilities);
    [[nodiscard]] std::uint64_t draw(double u) const;

  private:
    std::vector<double> cumulative_;
};

/// `shots` i.i.d. computational-basis measurements, deterministic in `seed`.
[[nodiscard]] Histogram sample(const StateVector &state, std::uint64_t shots,
                               std::uint64_t seed);

} // namespace qets::qsim
