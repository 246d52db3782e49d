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
#include "qets/mitigation/logits.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "qets/core/error.hpp"

namespace qets::mitigation {

LogitSet bias_correct(const LogitSet &set) {
    if (set.logits.empty()) {
        throw ValidationError("bias correction needs at least one logit");
    }
    double sum = 0.0;
    for (double z : set.logits) {
        sum += z;
    }
    const double mean = sum / static_cast<double>(set.logits.size());
    LogitSet out = set;
    for (double &z : out.logits) {
        z -= mean;
    }
    return out;
}

std::vector<int> classify_batch(const LogitSet &raw) {
    const auto corrected = bias_correct(raw);
    std::vector<int> classes(corrected.logits.size());
    std::transform(corrected.logits.begin(), corrected.logits.end(), classes.begin(),
                   [](double z) { return classify(z); });
    return classes;
}

GridSearchResult
grid_search_filter(std::span<const std::vector<qsim::Histogram>> variant_histograms,
                   std::span<const double> candidate_ps,
                   std::span<const std::size_t> candidate_ts, std::span<const int> labels,
                   std::size_t target_qubit) {
    if (candidate_ps.empty() || candidate_ts.empty()) {
        throw ValidationError("filter grid is empty");
    }
    if (variant_histograms.empty()) {
        throw ValidationError("grid search needs at least one sample");
    }
    if (labels.size() != variant_histograms.size()) {
        throw ValidationError(fmt::format("{} labels for {} samples", labels.size(),
                                          variant_histograms.size()));
    }

    std::vector<FrequencyTable> tables;
    tables.reserve(variant_histograms.size());
    std::size_t min_variants = SIZE_MAX;
    for (const auto &hs : variant_histograms) {
        tables.push_back(frequency_table(hs));
        min_variants = std::min(min_variants, hs.size());
    }

    std::vector<double> ps(candidate_ps.begin(), candidate_ps.end());
    std::vector<std::size_t> ts(candidate_ts.begin(), candidate_ts.end());
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

    GridSearchResult result;
    bool have_best = false;
    LogitSet logits;
    logits.logits.resize(tables.size());
    for (double p : ps) {
        for (std::size_t t : ts) {
            // Points with t above the variant count are not valid filters.
            if (t > min_variants) {
                continue;
            }
            const FilterParams params{p, t};
            for (std::size_t i = 0; i < tables.size(); ++i) {
                try {
                    const auto dist =
                        dnl_filter(tables[i], variant_histograms[i].size(), params);
                    logits.logits[i] = qsim::z_from_distribution(dist, target_qubit);
                } catch (const DataQualityError &) {
                    logits.logits[i] = 0.0;
                }
            }
            const auto classes = classify_batch(logits);
            std::size_t correct = 0;
            for (std::size_t i = 0; i < classes.size(); ++i) {
                correct += classes[i] == labels[i] ? 1 : 0;
            }
            const GridPoint point{p, t,
                                  static_cast<double>(correct) /
                                      static_cast<double>(classes.size())};
            result.grid.push_back(point);
            if (!have_best || point.accuracy > result.best.accuracy) {
                result.best = point;
                have_best = true;
            }
        }
    }
    if (!have_best) {
        throw ValidationError("no grid point is valid for the available variant count");
    }
    return result;
}

} // namespace qets::mitigation
