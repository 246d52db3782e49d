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
#include "qets/pipeline/encoder.hpp"

#include <cmath>

#include <fmt/format.h>

#include "qets/core/error.hpp"
#include "qets/core/random.hpp"

namespace qets::pipeline {

LinearEncoder LinearEncoder::zeros(std::size_t outputs, std::size_t inputs) {
    return {outputs, inputs, std::vector<double>(outputs * inputs, 0.0),
            std::vector<double>(outputs, 0.0)};
}

LinearEncoder LinearEncoder::random(std::size_t outputs, std::size_t inputs, double scale,
                                    std::uint64_t seed) {
    auto enc = zeros(outputs, inputs);
    Rng rng(seed);
    for (auto &w : enc.weights) {
        w = uniform(rng, -scale, scale);
    }
    for (auto &b : enc.bias) {
        b = uniform(rng, -scale, scale);
    }
    return enc;
}

void LinearEncoder::validate() const {
    if (weights.size() != outputs * inputs || bias.size() != outputs) {
        throw ValidationError(fmt::format("encoder shape mismatch: {} weights, {} biases for "
                                          "{}x{}",
                                          weights.size(), bias.size(), outputs, inputs));
    }
    for (double w : weights) {
        if (!std::isfinite(w)) {
            throw ValidationError("encoder weight is not finite");
        }
    }
    for (double b : bias) {
        if (!std::isfinite(b)) {
            throw ValidationError("encoder bias is not finite");
        }
    }
}

std::vector<double> encode(const LinearEncoder &encoder, std::span<const double> embedding) {
    if (embedding.size() != encoder.inputs) {
        throw ValidationError(fmt::format("embedding has dimension {}, encoder expects {}",
                                          embedding.size(), encoder.inputs));
    }
    std::vector<double> angles(encoder.bias);
    for (std::size_t r = 0; r < encoder.outputs; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < encoder.inputs; ++c) {
            acc += encoder.weights[r * encoder.inputs + c] * embedding[c];
        }
        angles[r] += acc;
    }
    return angles;
}

} // namespace qets::pipeline
