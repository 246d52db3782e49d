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
#include <iosfwd>
#include <span>
#include <vector>

namespace qets::qsim {

enum class GateKind { rot_y, cnot };

/// One gate of the ansatz gate set: a Y rotation or a CNOT.
class Gate {
  public:
    /// RotY(theta) = [[cos(theta/2), -sin(theta/2)], [sin(theta/2), cos(theta/2)]].
    static Gate ry(std::size_t target, double theta);
    static Gate cnot(std::size_t control, std::size_t target);

    [[nodiscard]] GateKind kind() const noexcept { return kind_; }
    [[nodiscard]] bool is_two_qubit() const noexcept {
        return kind_ == GateKind::cnot;
    }
    [[nodiscard]] std::size_t target() const noexcept { return target_; }
    /// Only meaningful for CNOT.
    [[nodiscard]] std::size_t control() const noexcept { return control_; }
    /// Only meaningful for RotY.
    [[nodiscard]] double angle() const noexcept { return angle_; }
    [[nodiscard]] std::size_t max_index() const noexcept;

    friend bool operator==(const Gate &, const Gate &) = default;

  private:
    Gate(GateKind kind, std::size_t control, std::size_t target, double angle)
        : kind_(kind), control_(control), target_(target), angle_(angle) {}

    GateKind kind_;
    std::size_t control_;
    std::size_t target_;
    double angle_;
};

/// Ordered gate list over a fixed number of qubits.
class Circuit {
  public:
    explicit Circuit(std::size_t qubit_count);

    /// Appends a gate, rejecting indices outside the register.
    void add(const Gate &gate);

    [[nodiscard]] std::size_t qubit_count() const noexcept { return qubit_count_; }
    [[nodiscard]] std::span<const Gate> gates() const noexcept { return gates_; }
    [[nodiscard]] std::size_t size() const noexcept { return gates_.size(); }
    [[nodiscard]] std::size_t single_qubit_count() const noexcept;
    [[nodiscard]] std::size_t two_qubit_count() const noexcept;

    /// Adds `delta` to the angle of the RotY at position `gate_index`.
    void shift_angle(std::size_t gate_index, double delta);

    /// Same circuit with logical qubit q moved to physical qubit perm[q].
    [[nodiscard]] Circuit relabeled(std::span<const std::size_t> perm) const;

    friend bool operator==(const Circuit &, const Circuit &) = default;

  private:
    std::size_t qubit_count_;
    std::vector<Gate> gates_;
};

/// Text format: header `qubits <Q>`, then one gate per line, `ry <q> <theta>`
/// or `cnot <c> <t>`. Blank lines and lines starting with '#' are ignored.
void write_circuit(std::ostream &out, const Circuit &circuit);
[[nodiscard]] Circuit read_circuit(std::istream &in);

} // namespace qets::qsim
