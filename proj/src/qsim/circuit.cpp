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
#include "qets/qsim/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "qets/core/error.hpp"

namespace qets::qsim {

Gate Gate::ry(std::size_t target, double theta) {
    if (!std::isfinite(theta)) {
        throw ValidationError("RotY angle must be finite");
    }
    return Gate(GateKind::rot_y, target, target, theta);
}

Gate Gate::cnot(std::size_t control, std::size_t target) {
    if (control == target) {
        throw ValidationError(
            fmt::format("CNOT control and target coincide (qubit {})", control));
    }
    return Gate(GateKind::cnot, control, target, 0.0);
}

std::size_t Gate::max_index() const noexcept {
    return std::max(control_, target_);
}

Circuit::Circuit(std::size_t qubit_count) : qubit_count_(qubit_count) {
    if (qubit_count == 0) {
        throw ValidationError("circuit needs at least one qubit");
    }
}

void Circuit::add(const Gate &gate) {
    if (gate.max_index() >= qubit_count_) {
        throw ValidationError(fmt::format("gate index {} out of range for {} qubits",
                                          gate.max_index(), qubit_count_));
    }
    gates_.push_back(gate);
}

std::size_t Circuit::single_qubit_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(
        gates_.begin(), gates_.end(), [](const Gate &g) { return !g.is_two_qubit(); }));
}

std::size_t Circuit::two_qubit_count() const noexcept {
    return gates_.size() - single_qubit_count();
}

void Circuit::shift_angle(std::size_t gate_index, double delta) {
    if (gate_index >= gates_.size() || gates_[gate_index].is_two_qubit()) {
        throw ValidationError(fmt::format("gate {} is not a rotation", gate_index));
    }
    auto &g = gates_[gate_index];
    g = Gate::ry(g.target(), g.angle() + delta);
}

Circuit Circuit::relabeled(std::span<const std::size_t> perm) const {
    if (perm.size() != qubit_count_) {
        throw ValidationError("permutation length does not match qubit count");
    }
    std::vector<bool> seen(qubit_count_, false);
    for (auto p : perm) {
        if (p >= qubit_count_ || seen[p]) {
            throw ValidationError("qubit relabeling is not a bijection");
        }
        seen[p] = true;
    }
    Circuit out(qubit_count_);
    out.gates_.reserve(gates_.size());
    for (const auto &g : gates_) {
        if (g.is_two_qubit()) {
            out.gates_.push_back(Gate::cnot(perm[g.control()], perm[g.target()]));
        } else {
            out.gates_.push_back(Gate::ry(perm[g.target()], g.angle()));
        }
    }
    return out;
}

void write_circuit(std::ostream &out, const Circuit &circuit) {
    out << "qubits " << circuit.qubit_count() << '\n';
    for (const auto &g : circuit.gates()) {
        if (g.is_two_qubit()) {
            out << "cnot " << g.control() << ' ' << g.target() << '\n';
        } else {
            out << fmt::format("ry {} {:.17g}\n", g.target(), g.angle());
        }
    }
}

namespace {

bool skip_line(const std::string &line) {
    auto pos = line.find_first_not_of(" \t\r");
    return pos == std::string::npos || line[pos] == '#';
}

} // namespace

Circuit read_circuit(std::istream &in) {
    std::string line;
    std::size_t line_no = 0;
    std::optional<Circuit> circuit;
    while (std::getline(in, line)) {
        ++line_no;
        if (skip_line(line)) {
            continue;
        }
        std::istringstream fields(line);
        std::string op;
        fields >> op;
        auto fail = [&](const char *why) {
            return ValidationError(fmt::format("circuit line {}: {}", line_no, why));
        };
        if (!circuit) {
            std::size_t q = 0;
            if (op != "qubits" || !(fields >> q)) {
                throw fail("expected header 'qubits <Q>'");
            }
            circuit.emplace(q);
            continue;
        }
        if (op == "ry") {
            std::size_t q = 0;
            double theta = 0.0;
            if (!(fields >> q >> theta)) {
                throw fail("expected 'ry <q> <theta>'");
            }
            circuit->add(Gate::ry(q, theta));
        } else if (op == "cnot") {
            std::size_t c = 0;
            std::size_t t = 0;
            if (!(fields >> c >> t)) {
                throw fail("expected 'cnot <c> <t>'");
            }
            circuit->add(Gate::cnot(c, t));
        } else {
            throw fail("unknown gate");
        }
    }
    if (!circuit) {
        throw ValidationError("circuit file has no 'qubits' header");
    }
    return *std::move(circuit);
}

} // namespace qets::qsim
