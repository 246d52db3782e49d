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
#include "qets/mitigation/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <fmt/format.h>

#include "qets/core/diagnostics.hpp"
#include "qets/core/error.hpp"

namespace qets::mitigation {

void FilterParams::validate(std::size_t variant_count) const {
    if (!std::isfinite(p) || p < 0.0) {
        throw ValidationError(fmt::format("filter p = {}: must be finite and >= 0", p));
    }
    if (t > variant_count) {
        throw ValidationError(
            fmt::format("filter t = {} exceeds the variant count {}", t, variant_count));
    }
}

FrequencyTable frequency_table(std::span<const qsim::Histogram> histograms) {
    if (histograms.empty()) {
        throw ValidationError("no variant histograms to aggregate");
    }
    const std::size_t q = histograms.front().qubit_count();
    std::uint64_t total = 0;
    for (const auto &h : histograms) {
        if (h.qubit_count() != q) {
            throw ValidationError("variant histograms disagree on the qubit count");
        }
        if (h.empty()) {
            throw DataQualityError("a variant histogram has no shots");
        }
        total += h.total_shots();
    }
    if (total < minimum_practicable_shots) {
        warn(fmt::format("{} shots across {} variants is below the practicable minimum of {}",
                         total, histograms.size(), minimum_practicable_shots));
    }

    FrequencyTable table;
    const std::size_t v_count = histograms.size();
    for (std::size_t v = 0; v < v_count; ++v) {
        const auto shots = static_cast<double>(histograms[v].total_shots());
        for (const auto &[key, n] : histograms[v].counts()) {
            auto [it, inserted] = table.try_emplace(key, v_count, 0.0);
            it->second[v] = static_cast<double>(n) / shots;
        }
    }
    return table;
}

qsim::Distribution dnl_filter(const FrequencyTable &table, std::size_t variant_count,
                              const FilterParams &params) {
    params.validate(variant_count);
    if (variant_count == 0 || table.empty()) {
        throw ValidationError("no variant frequencies to aggregate");
    }
    const auto v_total = static_cast<double>(variant_count);
    std::vector<double> weights(variant_count);
    for (std::size_t v = 0; v < variant_count; ++v) {
        weights[v] = std::pow(static_cast<double>(v + 1) / v_total, params.p);
    }

    qsim::Distribution scores;
    std::vector<double> sorted;
    double norm = 0.0;
    for (const auto &[key, freqs] : table) {
        if (freqs.size() != variant_count) {
            throw ValidationError(fmt::format("bitstring {} has {} frequencies, expected {}",
                                              key, freqs.size(), variant_count));
        }
        const auto support = static_cast<std::size_t>(
            std::count_if(freqs.begin(), freqs.end(), [](double f) { return f > 0.0; }));
        double score = 0.0;
        if (support >= params.t) {
            sorted.assign(freqs.begin(), freqs.end());
            std::sort(sorted.begin(), sorted.end(), std::greater<>());
            for (std::size_t v = 0; v < variant_count; ++v) {
                score += weights[v] * sorted[v];
            }
        }
        scores.emplace(key, score);
        norm += score;
    }
    if (!(norm > 0.0)) {
        throw DataQualityError(fmt::format(
            "filter (p = {}, t = {}) discards every bitstring", params.p, params.t));
    }
    for (auto &[key, s] : scores) {
        s /= norm;
    }
    return scores;
}

qsim::Distribution dnl_filter(std::span<const qsim::Histogram> histograms,
                              const FilterParams &params) {
    return dnl_filter(frequency_table(histograms), histograms.size(), params);
}

qsim::Distribution aggregate_mean(std::span<const qsim::Histogram> histograms) {
    const auto table = frequency_table(histograms);
    // Each column sums to one, so normalising by the grand total is dividing
    // by V. Sorting first makes the sum independent of variant order and
    // bit-identical to the filter at p = 0, t = 0.
    qsim::Distribution mean;
    std::vector<double> sorted;
    double norm = 0.0;
    for (const auto &[key, freqs] : table) {
        sorted.assign(freqs.begin(), freqs.end());
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        double sum = 0.0;
        for (double f : sorted) {
            sum += f;
        }
        mean.emplace(key, sum);
        norm += sum;
    }
    for (auto &[key, m] : mean) {
        m /= norm;
    }
    return mean;
}

} // namespace qets::mitigation
