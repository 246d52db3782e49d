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
#include "qets/ansatz/ansatz.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "qets/core/error.hpp"

namespace qets::ansatz {

void AnsatzConfig::validate() const {
    if (Q < 4 || Q % 2 != 0) {
        throw ValidationError(fmt::format("ansatz.Q = {}: must be even and >= 4", Q));
    }
    if (E != 1) {
        throw ValidationError(fmt::format("ansatz.E = {}: only a single encoder is supported", E));
    }
    if (R == 0) {
        throw ValidationError("ansatz.R must be >= 1");
    }
    if (M == 0) {
        throw ValidationError("ansatz.M must be >= 1");
    }
    if (N == 0) {
        throw ValidationError("ansatz.N must be >= 1");
    }
    if (B == 0) {
        throw ValidationError("ansatz.B must be >= 1");
    }
    if (S == 0) {
        throw ValidationError("ansatz.S must be >= 1");
    }
}

BuiltCircuit build_circuit_with_roles(const AnsatzConfig &config,
                                      std::span<const double> features,
                                      std::span<const double> params) {
    config.validate();
    const std::size_t q_count = config.Q;
    if (features.size() > q_count) {
        throw ValidationError(fmt::format("feature vector has {} entries for {} qubits",
                                          features.size(), q_count));
    }
    if (params.size() != config.trainable_param_count()) {
        throw ValidationError(fmt::format("expected {} trainable parameters, got {}",
                                          config.trainable_param_count(), params.size()));
    }

    BuiltCircuit out{qsim::Circuit(q_count), {}};
    auto emit = [&](const qsim::Gate &g, GateRole role) {
        out.circuit.add(g);
        out.roles.push_back(role);
    };

    const std::size_t units = config.upload_units();
    std::size_t ladders = 0;
    for (std::size_t u = 0; u < units; ++u) {
        for (std::size_t q = 0; q < q_count; ++q) {
            const double x = q < features.size() ? features[q] : 0.0;
            emit(qsim::Gate::ry(q, x), {GateRole::Kind::encoding, q});
        }
        if (u + 1 < units) {
            const std::size_t parity = ladders % 2;
            for (std::size_t i = parity; i < q_count; i += 2) {
                emit(qsim::Gate::cnot(i, (i + 2) % q_count), {GateRole::Kind::entangling, 0});
            }
            ++ladders;
        }
        for (std::size_t q = 0; q < q_count; ++q) {
            const std::size_t k = u * q_count + q;
            emit(qsim::Gate::ry(q, params[k]), {GateRole::Kind::trainable, k});
        }
    }
    for (std::size_t n = 0; n < config.N; ++n) {
        for (std::size_t q = 0; q < q_count; ++q) {
            const std::size_t k = (units + n) * q_count + q;
            emit(qsim::Gate::ry(q, params[k]), {GateRole::Kind::trainable, k});
        }
    }
    return out;
}

qsim::Circuit build_circuit(const AnsatzConfig &config, std::span<const double> features,
                            std::span<const double> params) {
    return build_circuit_with_roles(config, features, params).circuit;
}

GateCounts count_gates(const AnsatzConfig &config) {
    config.validate();
    return {config.upload_units() * config.Q + config.trainable_layers() * config.Q,
            config.ladder_count() * config.Q / 2};
}

std::size_t layer_count(const AnsatzConfig &config) {
    config.validate();
    return 2 * config.upload_units() + config.ladder_count() + config.N;
}

namespace {

constexpr std::array<std::pair<std::size_t, double>, 5> shot_table{{
    {10, 500.0},
    {12, 1000.0},
    {14, 2000.0},
    {16, 5000.0},
    {18, 20000.0},
}};

double log_interpolate(const std::pair<std::size_t, double> &lo,
                       const std::pair<std::size_t, double> &hi, double q) {
    const double t = (q - static_cast<double>(lo.first)) /
                     static_cast<double>(hi.first - lo.first);
    return lo.second * std::pow(hi.second / lo.second, t);
}

} // namespace

std::uint64_t shots_for(std::size_t qubit_count, bool allow_below_table) {
    for (const auto &[q, s] : shot_table) {
        if (q == qubit_count) {
            return static_cast<std::uint64_t>(s);
        }
    }
    const auto q = static_cast<double>(qubit_count);
    double raw = 0.0;
    if (qubit_count < shot_table.front().first) {
        if (!allow_below_table) {
            throw ValidationError(fmt::format(
                "no shot schedule below {} qubits (got {}); pass an explicit override",
                shot_table.front().first, qubit_count));
        }
        raw = log_interpolate(shot_table[0], shot_table[1], q);
    } else if (qubit_count > shot_table.back().first) {
        raw = log_interpolate(shot_table[shot_table.size() - 2], shot_table.back(), q);
    } else {
        for (std::size_t i = 0; i + 1 < shot_table.size(); ++i) {
            if (qubit_count < shot_table[i + 1].first) {
                raw = log_interpolate(shot_table[i], shot_table[i + 1], q);
                break;
            }
        }
    }
    if (!(raw < 1e15)) {
        throw CapacityError(fmt::format("shot schedule overflows at {} qubits", qubit_count));
    }
    const double rounded = std::max(25.0, 25.0 * std::round(raw / 25.0));
    return static_cast<std::uint64_t>(rounded);
}

std::vector<std::uint64_t> split_shots(std::uint64_t total, std::size_t variants) {
    if (variants == 0) {
        throw ValidationError("variant count must be >= 1");
    }
    const std::uint64_t base = total / variants;
    const std::uint64_t extra = total % variants;
    std::vector<std::uint64_t> out(variants, base);
    for (std::uint64_t v = 0; v < extra; ++v) {
        ++out[v];
    }
    return out;
}

} // namespace qets::ansatz
