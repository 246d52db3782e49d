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
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "qets/mitigation/variants.hpp"
#include "qets/qsim/histogram.hpp"

namespace qets::mitigation {

/// Raw per-variant measurement results for a batch of samples, as written to
/// disk: `sample<id>_variant<k>.hist` files in physical qubit order plus a
/// `bundle.json` manifest holding the qubit assignments.
struct VariantBundle {
    std::size_t qubit_count = 0;
    std::vector<Permutation> permutations;
    std::vector<std::string> sample_ids;
    /// Optional ground-truth labels keyed by sample id.
    std::map<std::string, int> labels;
    /// histograms[sample][variant], physical order.
    std::vector<std::vector<qsim::Histogram>> histograms;
    std::string manifest_hash;
};

void write_bundle(const std::filesystem::path &dir, const VariantBundle &bundle);
[[nodiscard]] VariantBundle read_bundle(const std::filesystem::path &dir);

/// Histograms of one sample remapped to logical qubit order.
[[nodiscard]] std::vector<qsim::Histogram> remapped(const VariantBundle &bundle,
                                                    std::size_t sample);

[[nodiscard]] std::string histogram_file_name(const std::string &sample_id,
                                              std::size_t variant);

} // namespace qets::mitigation
