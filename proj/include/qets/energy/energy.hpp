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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qets/ansatz/ansatz.hpp"

namespace qets::energy {

/// Coefficients of the analytic QPU and GPU energy models. Powers in kW,
/// times in seconds, F_gpu in FLOP/s.
struct EnergyModelParams {
    double P_qpu = 5.0;
    double T_sq = 1.1e-4;
    double T_tq = 9e-4;
    std::uint64_t S = 600;
    double O_S = 1.5e-3;
    double O_C = 10.0;
    double P_gpu = 0.072;
    double F_gpu = 3.03e13;

    /// Every coefficient must be finite and positive; S may be zero.
    void validate() const;
};

/// QPU energy in kJ:
///   ((SQ * T_sq + TQ * T_tq + O_S) * S + m * O_C) * P_qpu
/// where m is the number of circuit variants submitted (each pays the
/// circuit overhead once).
[[nodiscard]] double e_qpu(const EnergyModelParams &params, std::uint64_t single_qubit_gates,
                           std::uint64_t two_qubit_gates, std::uint64_t variant_multiplier = 1);

/// A positive number that may exceed the double range. Below the overflow
/// threshold `exponent` is 0 and `mantissa` holds the value itself;
/// above it the value is mantissa * 10^exponent with mantissa in [1, 10).
struct Magnitude {
    double mantissa = 0.0;
    std::int64_t exponent = 0;

    [[nodiscard]] bool in_log_space() const noexcept { return exponent != 0; }
    /// Natural log of the value (-inf for zero).
    [[nodiscard]] double log() const;
    /// The value as a double; +inf when it does not fit.
    [[nodiscard]] double value() const;
    /// "%.17g" below the threshold, "<m>e<exp>" above it.
    [[nodiscard]] std::string str() const;
};

/// Qubit count above which `e_gpu` switches to log-space evaluation.
inline constexpr std::size_t gpu_log_space_threshold = 960;

/// GPU statevector energy in kJ: 2^Q * (4 SQ + 8 TQ) / F_gpu * P_gpu.
[[nodiscard]] Magnitude e_gpu(const EnergyModelParams &params, std::size_t qubit_count,
                              std::uint64_t single_qubit_gates, std::uint64_t two_qubit_gates);

struct Point {
    double q;
    double energy;
};

enum class FitKind { linear, exponential };

[[nodiscard]] std::string to_string(FitKind kind);

/// Least-squares fit. Linear: energy = a * Q + b. Exponential:
/// ln(energy) = a * Q + b, i.e. energy = e^b * base()^Q.
///
/// `r_squared` is taken in the space the regression runs in (log space for
/// the exponential fit); `r_squared_linear_space` always compares raw
/// energies. Both are NaN with fewer than three points. A perfectly constant
/// response that is fitted exactly reports R^2 = 1.
struct ScalingFit {
    FitKind kind = FitKind::linear;
    double a = 0.0;
    double b = 0.0;
    double r_squared = 0.0;
    double r_squared_linear_space = 0.0;
    double q_min = 0.0;
    double q_max = 0.0;
    std::size_t n = 0;

    [[nodiscard]] double evaluate(double q) const;
    /// Growth factor per unit Q of an exponential fit.
    [[nodiscard]] double base() const;
    /// Prefactor: b for linear fits, e^b for exponential ones.
    [[nodiscard]] double amplitude() const;
};

[[nodiscard]] ScalingFit fit_linear(std::span<const Point> points);

/// Points with q < `q_min` are dropped before fitting.
[[nodiscard]] ScalingFit fit_exponential(std::span<const Point> points,
                                         std::optional<double> q_min = std::nullopt);

inline constexpr double crossover_ceiling = 200.0;

/// Smallest Q in (0, ceiling] at which the exponential curve rises through
/// the linear one (from below to at-or-above). Regions where the exponential
/// starts above the line and stays above do not count; with no upward
/// crossing the result is empty.
[[nodiscard]] std::optional<double> crossover(const ScalingFit &linear,
                                              const ScalingFit &exponential,
                                              double ceiling = crossover_ceiling);

struct ScalingRow {
    std::size_t q = 0;
    std::uint64_t single_qubit = 0;
    std::uint64_t two_qubit = 0;
    double e_qpu_kj = 0.0;
    Magnitude e_gpu_kj;
    /// Log-depth proxy ceil(log2 Q) and the matching bond dimension 2^D.
    std::size_t depth = 0;
    std::size_t chi = 0;
    double mps_flops = 0.0;
};

/// One row per Q in `qubits`, using the ansatz gate counts for each Q (all
/// other ansatz settings taken from `config`).
[[nodiscard]] std::vector<ScalingRow> scaling_table(std::span<const std::size_t> qubits,
                                                    const ansatz::AnsatzConfig &config,
                                                    const EnergyModelParams &params,
                                                    std::uint64_t variant_multiplier = 1);

/// Second differences of the E_qpu column over consecutive rows (kJ). E_qpu
/// is affine in the gate counts, so each difference is evaluated from the
/// integer second differences of SQ and TQ rather than from the rounded
/// energies; an affine gate-count rule gives exact zeros. Rows must be evenly
/// spaced in Q.
[[nodiscard]] std::vector<double> e_qpu_second_differences(std::span<const ScalingRow> rows,
                                                           const EnergyModelParams &params);

struct ParameterRow {
    std::string symbol;
    std::string description;
    std::string value;
};

/// The model coefficients as printable rows, in the conventional order.
[[nodiscard]] std::vector<ParameterRow> parameter_table(const EnergyModelParams &params);

} // namespace qets::energy
