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

namespace qets::pipeline {

/// Affine map from embeddings to rotation angles: angles = W x + b, W stored
/// row-major with one row per qubit.
struct LinearEncoder {
    std::size_t outputs = 0;
    std::size_t inputs = 0;
    std::vector<double> weights;
    std::vector<double> bias;

    static LinearEncoder zeros(std::size_t outputs, std::size_t inputs);
    /// Weights and bias uniform in [-scale, scale].
    static LinearEncoder random(std::size_t outputs, std::size_t inputs, double scale,
                                std::uint64_t seed);

    void validate() const;
    [[nodiscard]] double weight(std::size_t row, std::size_t col) const {
        return weights[row * inputs + col];
    }
};

[[nodiscard]] std::vector<double> encode(const LinearEncoder &encoder,
                                         std::span<const double> embedding);

} // namespace qets::pipeline
