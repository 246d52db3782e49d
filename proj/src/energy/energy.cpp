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
#include "qets/energy/energy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "qets/core/error.hpp"
#include "qets/mps/mps.hpp"

namespace qets::energy {

namespace {

void require_positive(double v, const char *name) {
    if (!std::isfinite(v) || v <= 0.0) {
        throw ValidationError(fmt::format("{} must be finite and positive, got {}", name, v));
    }
}

double r_squared(std::span<const double> y, std::span<const double> fitted) {
    if (y.size() < 3) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    double mean = 0.0;
    for (double v : y) {
        mean += v;
    }
    mean /= static_cast<double>(y.size());
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        ss_res += (y[i] - fitted[i]) * (y[i] - fitted[i]);
        ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    if (ss_tot == 0.0) {
        return ss_res == 0.0 ? 1.0 : 0.0;
    }
    return 1.0 - ss_res / ss_tot;
}

struct LineFit {
    double slope;
    double intercept;
};

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) {
        throw ValidationError("cannot fit: all points share the same Q");
    }
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

void check_points(std::span<const Point> points) {
    if (points.size() < 2) {
        throw ValidationError(fmt::format("fit needs at least 2 points, got {}", points.size()));
    }
    for (const auto &p : points) {
        if (!std::isfinite(p.q) || !std::isfinite(p.energy)) {
            throw ValidationError("fit points must be finite");
        }
    }
}

} // namespace

void EnergyModelParams::validate() const {
    require_positive(P_qpu, "P_qpu");
    require_positive(T_sq, "T_sq");
    require_positive(T_tq, "T_tq");
    require_positive(O_S, "O_S");
    require_positive(O_C, "O_C");
    require_positive(P_gpu, "P_gpu");
    require_positive(F_gpu, "F_gpu");
}

double e_qpu(const EnergyModelParams &params, std::uint64_t single_qubit_gates,
             std::uint64_t two_qubit_gates, std::uint64_t variant_multiplier) {
    params.validate();
    const double per_shot = static_cast<double>(single_qubit_gates) * params.T_sq +
                            static_cast<double>(two_qubit_gates) * params.T_tq + params.O_S;
    const double seconds = per_shot * static_cast<double>(params.S) +
                           static_cast<double>(variant_multiplier) * params.O_C;
    return seconds * params.P_qpu;
}

double Magnitude::log() const {
    if (mantissa == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    return std::log(mantissa) + static_cast<double>(exponent) * std::numbers::ln10;
}

double Magnitude::value() const {
    if (exponent == 0) {
        return mantissa;
    }
    if (exponent > std::numeric_limits<double>::max_exponent10) {
        return std::numeric_limits<double>::infinity();
    }
    return mantissa * std::pow(10.0, static_cast<double>(exponent));
}

std::string Magnitude::str() const {
    if (exponent == 0) {
        return fmt::format("{:.17g}", mantissa);
    }
    return fmt::format("{:.15f}e{}", mantissa, exponent);
}

Magnitude e_gpu(const EnergyModelParams &params, std::size_t qubit_count,
                std::uint64_t single_qubit_gates, std::uint64_t two_qubit_gates) {
    params.validate();
    const double ops = static_cast<double>(single_qubit_gates) * 4.0 +
                       static_cast<double>(two_qubit_gates) * 8.0;
    if (ops == 0.0) {
        return {};
    }
    if (qubit_count <= gpu_log_space_threshold) {
        return {std::ldexp(ops, static_cast<int>(qubit_count)) / params.F_gpu * params.P_gpu, 0};
    }
    const double log10_value = static_cast<double>(qubit_count) * std::log10(2.0) +
                               std::log10(ops) - std::log10(params.F_gpu) +
                               std::log10(params.P_gpu);
    const double whole = std::floor(log10_value);
    return {std::pow(10.0, log10_value - whole), static_cast<std::int64_t>(whole)};
}

std::string to_string(FitKind kind) {
    return kind == FitKind::linear ? "linear" : "exponential";
}

double ScalingFit::evaluate(double q) const {
    const double lin = a * q + b;
    return kind == FitKind::linear ? lin : std::exp(lin);
}

double ScalingFit::base() const {
    return kind == FitKind::exponential ? std::exp(a) : std::numeric_limits<double>::quiet_NaN();
}

double ScalingFit::amplitude() const {
    return kind == FitKind::exponential ? std::exp(b) : b;
}

ScalingFit fit_linear(std::span<const Point> points) {
    check_points(points);
    std::vector<double> x;
    std::vector<double> y;
    for (const auto &p : points) {
        x.push_back(p.q);
        y.push_back(p.energy);
    }
    const auto line = least_squares(x, y);
    ScalingFit fit;
    fit.kind = FitKind::linear;
    fit.a = line.slope;
    fit.b = line.intercept;
    std::vector<double> fitted;
    for (double q : x) {
        fitted.push_back(fit.evaluate(q));
    }
    fit.r_squared = r_squared(y, fitted);
    fit.r_squared_linear_space = fit.r_squared;
    fit.q_min = *std::min_element(x.begin(), x.end());
    fit.q_max = *std::max_element(x.begin(), x.end());
    fit.n = x.size();
    return fit;
}

ScalingFit fit_exponential(std::span<const Point> points, std::optional<double> q_min) {
    std::vector<Point> kept;
    for (const auto &p : points) {
        if (!q_min || p.q >= *q_min) {
            kept.push_back(p);
        }
    }
    check_points(kept);
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> log_y;
    for (const auto &p : kept) {
        if (p.energy <= 0.0) {
            throw ValidationError(
                fmt::format("exponential fit needs positive energies, got {} at Q={}", p.energy,
                            p.q));
        }
        x.push_back(p.q);
        y.push_back(p.energy);
        log_y.push_back(std::log(p.energy));
    }
    const auto line = least_squares(x, log_y);
    ScalingFit fit;
    fit.kind = FitKind::exponential;
    fit.a = line.slope;
    fit.b = line.intercept;
    std::vector<double> fitted_log;
    std::vector<double> fitted;
    for (double q : x) {
        fitted_log.push_back(fit.a * q + fit.b);
        fitted.push_back(fit.evaluate(q));
    }
    fit.r_squared = r_squared(log_y, fitted_log);
    fit.r_squared_linear_space = r_squared(y, fitted);
    fit.q_min = *std::min_element(x.begin(), x.end());
    fit.q_max = *std::max_element(x.begin(), x.end());
    fit.n = x.size();
    return fit;
}

std::optional<double> crossover(const ScalingFit &linear, const ScalingFit &exponential,
                                double ceiling) {
    if (linear.kind != FitKind::linear || exponential.kind != FitKind::exponential) {
        throw ValidationError("crossover expects a linear and an exponential fit");
    }
    if (!std::isfinite(ceiling) || ceiling <= 0.0) {
        throw ValidationError("crossover ceiling must be positive");
    }
    const auto gap = [&](double q) { return exponential.evaluate(q) - linear.evaluate(q); };
    constexpr double step = 1e-3;
    const auto steps = static_cast<std::size_t>(std::ceil(ceiling / step));
    double prev = 0.0;
    double g_prev = gap(prev);
    for (std::size_t i = 1; i <= steps; ++i) {
        const double next = std::min(ceiling, static_cast<double>(i) * step);
        const double g_next = gap(next);
        if (g_prev < 0.0 && g_next >= 0.0) {
            double lo = prev;
            double hi = next;
            while (hi - lo > 1e-13 * std::max(1.0, hi)) {
                const double mid = 0.5 * (lo + hi);
                (gap(mid) < 0.0 ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
        prev = next;
        g_prev = g_next;
    }
    return std::nullopt;
}

std::vector<ScalingRow> scaling_table(std::span<const std::size_t> qubits,
                                      const ansatz::AnsatzConfig &config,
                                      const EnergyModelParams &params,
                                      std::uint64_t variant_multiplier) {
    params.validate();
    std::vector<ScalingRow> rows;
    for (std::size_t q : qubits) {
        auto c = config;
        c.Q = q;
        c.validate();
        const auto counts = ansatz::count_gates(c);
        ScalingRow row;
        row.q = q;
        row.single_qubit = counts.single_qubit;
        row.two_qubit = counts.two_qubit;
        row.e_qpu_kj = e_qpu(params, counts.single_qubit, counts.two_qubit, variant_multiplier);
        row.e_gpu_kj = e_gpu(params, q, counts.single_qubit, counts.two_qubit);
        row.depth = static_cast<std::size_t>(std::bit_width(q - 1));
        row.chi = std::size_t{1} << row.depth;
        row.mps_flops =
            mps::mps_cost(q, row.chi, counts.single_qubit + counts.two_qubit).estimated_flops;
        rows.push_back(row);
    }
    return rows;
}

std::vector<double> e_qpu_second_differences(std::span<const ScalingRow> rows,
                                             const EnergyModelParams &params) {
    params.validate();
    std::vector<double> out;
    for (std::size_t i = 2; i < rows.size(); ++i) {
        if (rows[i].q - rows[i - 1].q != rows[i - 1].q - rows[i - 2].q) {
            throw ValidationError("second differences need evenly spaced qubit counts");
        }
        const auto d2 = [&](auto field) {
            return static_cast<std::int64_t>(rows[i].*field) -
                   2 * static_cast<std::int64_t>(rows[i - 1].*field) +
                   static_cast<std::int64_t>(rows[i - 2].*field);
        };
        const double per_shot = static_cast<double>(d2(&ScalingRow::single_qubit)) * params.T_sq +
                                static_cast<double>(d2(&ScalingRow::two_qubit)) * params.T_tq;
        out.push_back(per_shot * static_cast<double>(params.S) * params.P_qpu);
    }
    return out;
}

std::vector<ParameterRow> parameter_table(const EnergyModelParams &p) {
    return {
        {"P_qpu", "QPU power draw", fmt::format("{:g} kW", p.P_qpu)},
        {"T_sq", "single-qubit gate time", fmt::format("{:g} s", p.T_sq)},
        {"T_tq", "two-qubit gate time", fmt::format("{:g} s", p.T_tq)},
        {"SQ_Q", "single-qubit gate count", "o(Q^2)"},
        {"TQ_Q", "two-qubit gate count", "o(Q^2)"},
        {"S", "shots", fmt::format("{}", p.S)},
        {"O_S", "overhead per shot", fmt::format("{:g} s", p.O_S)},
        {"O_C", "circuit overhead", fmt::format("{:g} s", p.O_C)},
        {"P_gpu", "GPU max power draw", fmt::format("{:g} kW", p.P_gpu)},
        {"F_gpu", "GPU FP32 throughput", fmt::format("{:g} FLOPS", p.F_gpu)},
    };
}

} // namespace qets::energy
