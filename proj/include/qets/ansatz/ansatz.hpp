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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qets/qsim/circuit.hpp"

namespace qets::ansatz {

/// Hyperparameters of the data re-uploading ansatz. Field names follow the
/// usual symbols: Q qubits, E encoders, R re-uploads per main block, M main
/// blocks, N final trainable layers, B batch size, S shots.
struct AnsatzConfig {
    std::size_t Q = 10;
    std::size_t E = 1;
    std::size_t R = 4;
    std::size_t M = 2;
    std::size_t N = 1;
    std::size_t B = 16;
    std::uint64_t S = 600;

    /// Throws ValidationError naming the offending field.
    void validate() const;

    /// Re-upload units, each one full layer of encoding rotations.
    [[nodiscard]] std::size_t upload_units() const noexcept { return M * R; }
    /// CNOT ladders: every upload unit except the last has one.
    [[nodiscard]] std::size_t ladder_count() const noexcept { return M * R - 1; }
    /// Trainable rotation layers: one per upload unit plus the N final layers.
    [[nodiscard]] std::size_t trainable_layers() const noexcept { return M * R + N; }
    [[nodiscard]] std::size_t trainable_param_count() const noexcept {
        return trainable_layers() * Q;
    }
};

using ParamVector = std::vector<double>;

/// What each gate of a built circuit is for.
struct GateRole {
    enum class Kind { encoding, trainable, entangling };
    Kind kind;
    /// Feature index for encoding gates, parameter index for trainable gates.
    std::size_t index;
};

struct BuiltCircuit {
    qsim::Circuit circuit;
    std::vector<GateRole> roles;
};

/// Builds the circuit. Per upload unit: RotY(feature[q]) on every qubit, then
/// (except in the very last unit) a cyclic stride-2 CNOT ladder
/// CNot(i, (i + 2) mod Q) over one parity class, then one trainable RotY per
/// qubit. Ladder parity alternates even/odd starting from even. N final
/// rotation-only layers close the circuit.
///
/// `features` shorter than Q are zero-padded; longer ones are rejected.
/// Parameters are layer-major: params[layer * Q + qubit].
[[nodiscard]] BuiltCircuit build_circuit_with_roles(const AnsatzConfig &config,
                                                    std::span<const double> features,
                                                    std::span<const double> params);

[[nodiscard]] qsim::Circuit build_circuit(const AnsatzConfig &config,
                                          std::span<const double> features,
                                          std::span<const double> params);

struct GateCounts {
    std::size_t single_qubit = 0;
    std::size_t two_qubit = 0;
};

/// Closed-form counts: two-qubit (M*R - 1) * Q / 2, single-qubit
/// M*R*Q encodings + (M*R + N) * Q trainable rotations.
[[nodiscard]] GateCounts count_gates(const AnsatzConfig &config);

/// Structural layer count (encoding, ladder and rotation layers). Independent
/// of Q.
[[nodiscard]] std::size_t layer_count(const AnsatzConfig &config);

/// Total shot budget per qubit count. Tabulated for Q in {10, 12, 14, 16, 18};
/// other Q interpolate geometrically between neighbours (or extrapolate with
/// the outermost ratio), rounded to a multiple of 25. Q < 10 is rejected
/// unless `allow_below_table`.
[[nodiscard]] std::uint64_t shots_for(std::size_t qubit_count, bool allow_below_table = false);

/// Splits `total` shots over `variants`: floor(total / V) each, one extra for
/// the first (total mod V).
[[nodiscard]] std::vector<std::uint64_t> split_shots(std::uint64_t total, std::size_t variants);

} // namespace qets::ansatz
