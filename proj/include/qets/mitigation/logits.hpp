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
#include <span>
#include <string>
#include <vector>

#include "qets/mitigation/aggregation.hpp"
#include "qets/qsim/histogram.hpp"

namespace qets::mitigation {

/// One <Z> logit per test sample. Raw logits lie in [-1, 1]; after
/// `bias_correct` they may not.
struct LogitSet {
    std::vector<double> logits;
    std::vector<std::string> sample_ids;
};

/// Subtracts the mean logit of the set. The result has mean 0.
[[nodiscard]] LogitSet bias_correct(const LogitSet &set);

/// Class 0 if the logit is strictly positive, class 1 otherwise (0.0 -> 1).
[[nodiscard]] constexpr int classify(double corrected_logit) noexcept {
    return corrected_logit > 0.0 ? 0 : 1;
}

/// bias_correct then classify, element-wise.
[[nodiscard]] std::vector<int> classify_batch(const LogitSet &raw);

struct GridPoint {
    double p = 0.0;
    std::size_t t = 0;
    double accuracy = 0.0;
};

struct GridSearchResult {
    GridPoint best;
    /// Every evaluated point, p-major in ascending order.
    std::vector<GridPoint> grid;
};

/// Exhaustive search of filter parameters by batch accuracy. Each sample's
/// variant histograms are filtered, read out as <Z> of `target_qubit`, bias
/// corrected across the batch and classified. Ties go to the smaller p, then
/// the smaller t. A sample whose filter output is degenerate contributes
/// logit 0. Grid points with t above the smallest variant count are skipped.
[[nodiscard]] GridSearchResult
grid_search_filter(std::span<const std::vector<qsim::Histogram>> variant_histograms,
                   std::span<const double> candidate_ps,
                   std::span<const std::size_t> candidate_ts, std::span<const int> labels,
                   std::size_t target_qubit = 0);

/// Default candidate grid.
inline const std::vector<double> default_grid_p{0.0, 0.5, 1.0, 2.0, 4.0};
inline const std::vector<std::size_t> default_grid_t{0, 2, 5, 10};

} // namespace qets::mitigation
