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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qets/qsim/histogram.hpp"

namespace qets::mitigation {

/// Below this many shots in total across the variants the symmetrisation is
/// not considered reliable; aggregation still runs but warns.
inline constexpr std::uint64_t minimum_practicable_shots = 500;

/// Power-law exponent p and support threshold t of the non-linear filter.
struct FilterParams {
    double p = 0.0;
    std::size_t t = 0;

    /// p finite and >= 0, t <= variant count.
    void validate(std::size_t variant_count) const;
};

/// Per-bitstring frequency of each variant (counts normalised within the
/// variant). Absent bitstrings have frequency 0.
using FrequencyTable = std::map<std::string, std::vector<double>>;

[[nodiscard]] FrequencyTable frequency_table(std::span<const qsim::Histogram> histograms);

/// Per-bitstring mean of the per-variant frequencies.
[[nodiscard]] qsim::Distribution aggregate_mean(std::span<const qsim::Histogram> histograms);

/// Non-linear aggregation. For each bitstring the V frequencies are sorted in
/// descending order f(1) >= ... >= f(V); the score is
///     sum_v (v / V)^p * f(v)
/// unless fewer than t variants observe the bitstring, in which case it is 0.
/// Scores are normalised to a distribution. p = 0, t = 0 gives the mean.
///
/// Throws DataQualityError if every score is zero.
[[nodiscard]] qsim::Distribution dnl_filter(std::span<const qsim::Histogram> histograms,
                                            const FilterParams &params);

/// Same filter on a precomputed table with `variant_count` columns.
[[nodiscard]] qsim::Distribution dnl_filter(const FrequencyTable &table,
                                            std::size_t variant_count,
                                            const FilterParams &params);

} // namespace qets::mitigation
