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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qets/pipeline/dataset.hpp"

namespace qets::pipeline {

struct Evaluation {
    double accuracy = 0.0;
    /// Binomial standard error sqrt(a (1 - a) / N).
    double standard_error = 0.0;
    std::size_t correct = 0;
    std::size_t total = 0;
    /// confusion[true_label][predicted_label]
    std::array<std::array<std::size_t, 2>, 2> confusion{};
};

[[nodiscard]] Evaluation evaluate(std::span<const int> predictions, std::span<const int> labels);

struct LogisticOptions {
    double l2 = 1e-3;
    double learning_rate = 0.1;
    std::size_t iterations = 2000;
    std::uint64_t seed = 0;
};

struct LogisticModel {
    std::vector<double> weights;
    double bias = 0.0;
    /// P(label 1 | x).
    [[nodiscard]] double probability(std::span<const double> x) const;
    [[nodiscard]] int predict(std::span<const double> x) const;
};

/// Full-batch gradient descent on the L2-regularised logistic loss over the
/// raw embeddings.
[[nodiscard]] LogisticModel fit_logistic(const EmbeddingDataset &train,
                                         const LogisticOptions &options);

/// Fits on `train`, returns accuracy on `test`.
[[nodiscard]] double logistic_baseline(const EmbeddingDataset &train,
                                       const EmbeddingDataset &test,
                                       const LogisticOptions &options);

/// Classical baselines reported alongside the quantum head on the SST2 split
/// (accuracy fractions). Not reproduced here; used only in report tables.
namespace reference {
inline constexpr double svc_accuracy = 0.8956;
inline constexpr double logistic_accuracy = 0.8906;
/// Break-even qubit count from measured fits. Depends on the hardware,
/// circuit and hyperparameters it was measured with.
inline constexpr double measured_break_even_qubits = 34.0;
} // namespace reference

} // namespace qets::pipeline
