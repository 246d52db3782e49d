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
#include <span>
#include <vector>

#include "qets/qsim/circuit.hpp"
#include "qets/qsim/histogram.hpp"

namespace qets::mitigation {

/// perm[q] is the physical qubit that logical qubit q is assigned to.
using Permutation = std::vector<std::size_t>;

/// Logically equivalent copies of one circuit under different qubit
/// assignments. Entry 0 is always the identity assignment.
struct VariantSet {
    qsim::Circuit base;
    std::vector<Permutation> permutations;
    std::vector<qsim::Circuit> circuits;

    [[nodiscard]] std::size_t size() const noexcept { return permutations.size(); }
};

/// `variants` pairwise-distinct assignments: identity first, the rest drawn
/// uniformly without repetition from the seeded generator. Throws
/// ValidationError if `variants` exceeds Q!.
[[nodiscard]] VariantSet generate_variants(const qsim::Circuit &circuit, std::size_t variants,
                                           std::uint64_t seed);

[[nodiscard]] Permutation inverse(std::span<const std::size_t> perm);

/// Physical-order histogram back to logical order: the bit measured at
/// physical position perm[q] becomes logical bit q.
[[nodiscard]] qsim::Histogram remap_histogram(const qsim::Histogram &hist,
                                              std::span<const std::size_t> perm);

} // namespace qets::mitigation
