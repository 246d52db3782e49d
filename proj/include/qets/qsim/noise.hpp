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

#include <cstdint>

#include "qets/qsim/circuit.hpp"
#include "qets/qsim/histogram.hpp"
#include "qets/qsim/statevector.hpp"

namespace qets::qsim {

/// Depolarizing probabilities per gate and readout flip probability per bit.
/// Defaults are trapped-ion-class placeholders, not measured values.
struct NoiseParams {
    double p1 = 2e-4;
    double p2 = 5e-3;
    double p_ro = 5e-3;

    /// Throws ValidationError unless every probability is in [0, 1].
    void validate() const;
    [[nodiscard]] bool is_noiseless() const noexcept {
        return p1 == 0.0 && p2 == 0.0 && p_ro == 0.0;
    }
    [[nodiscard]] static NoiseParams none() { return {0.0, 0.0, 0.0}; }
};

/// Monte Carlo trajectory simulation. After each one-qubit (two-qubit) gate a
/// uniformly random non-identity Pauli is inserted with probability p1 (p2);
/// each measured bit is flipped with probability p_ro. With all-zero noise
/// the result is identical to `sample(run_statevector(circuit), shots, seed)`.
[[nodiscard]] Histogram run_noisy(const Circuit &circuit, const NoiseParams &noise,
                                  std::uint64_t shots, std::uint64_t seed,
                                  std::size_t max_qubits = default_max_qubits);

} // namespace qets::qsim
