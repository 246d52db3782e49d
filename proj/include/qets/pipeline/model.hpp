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
#include <string>
#include <vector>

#include "qets/ansatz/ansatz.hpp"
#include "qets/mitigation/aggregation.hpp"
#include "qets/pipeline/dataset.hpp"
#include "qets/pipeline/encoder.hpp"
#include "qets/qsim/histogram.hpp"
#include "qets/qsim/noise.hpp"

namespace qets::pipeline {

/// The measured qubit whose <Z> is the classification logit.
inline constexpr std::size_t target_qubit = 0;

enum class Backend { exact, noisy, mps };

[[nodiscard]] Backend parse_backend(const std::string &name);
[[nodiscard]] std::string to_string(Backend backend);

/// Encoder plus circuit parameters.
struct Model {
    ansatz::AnsatzConfig config;
    LinearEncoder encoder;
    ansatz::ParamVector params;

    /// Encoder in [-0.1, 0.1], circuit parameters in [-pi, pi].
    static Model random(const ansatz::AnsatzConfig &config, std::size_t embedding_dim,
                        std::uint64_t seed);
    void validate() const;
};

struct InferenceOptions {
    Backend backend = Backend::exact;
    qsim::NoiseParams noise;
    /// Total shots per logical circuit, split over the variants.
    std::uint64_t shots = 600;
    std::size_t variants = 25;
    /// Non-linear filter instead of plain averaging.
    bool use_filter = false;
    mitigation::FilterParams filter;
    std::size_t chi_max = 64;
    std::uint64_t seed = 0;
};

struct Prediction {
    double logit = 0.0;
    /// Class of the raw logit; batch bias correction happens downstream.
    int label = 0;
};

[[nodiscard]] qsim::Circuit model_circuit(const Model &model, std::span<const double> embedding);

/// Runs the debiasing variants of `circuit` under the noisy backend and
/// returns their histograms remapped to logical order.
[[nodiscard]] std::vector<qsim::Histogram> run_variants(const qsim::Circuit &circuit,
                                                        const InferenceOptions &options);

/// encode -> build circuit -> execute -> <Z> of the target qubit. The exact
/// and mps backends are deterministic; the noisy backend runs the variant
/// set, remaps, aggregates and reads <Z> off the aggregate.
[[nodiscard]] Prediction predict(const Model &model, std::span<const double> embedding,
                                 const InferenceOptions &options);

/// Logistic loss on the scaled logit: log(1 + exp(-2 y z)), y = +1 for
/// label 0 and -1 for label 1.
[[nodiscard]] double sample_loss(double logit, int label);
[[nodiscard]] double sample_loss_derivative(double logit, int label);

struct Gradient {
    std::vector<double> params;
    std::vector<double> encoder_weights;
    std::vector<double> encoder_bias;
};

/// d<Z>/d(everything) for one embedding by the parameter-shift rule. Each
/// encoding rotation is shifted separately and the contributions of one
/// feature are summed before the chain rule through the encoder.
[[nodiscard]] Gradient logit_gradient(const Model &model, std::span<const double> embedding);

/// Mean loss gradient over a batch (exact backend).
[[nodiscard]] Gradient loss_gradient(const Model &model, const EmbeddingDataset &data,
                                     std::span<const std::size_t> batch);

/// Exact-backend <Z> logit.
[[nodiscard]] double exact_logit(const Model &model, std::span<const double> embedding);

struct TrainOptions {
    std::size_t epochs = 200;
    double learning_rate = 0.05;
    /// 0 means the ansatz batch size B.
    std::size_t batch_size = 0;
    std::uint64_t seed = 0;
    /// Stop once train accuracy reaches this value (> 1 disables).
    double stop_accuracy = 2.0;
};

struct TrainResult {
    Model model;
    /// Mean train loss after each epoch; entry 0 is the initial loss.
    std::vector<double> loss_curve;
    std::vector<double> accuracy_curve;
    std::size_t epochs_run = 0;
};

/// Mini-batch gradient descent with fixed step on the exact backend. Throws
/// DataQualityError if the loss becomes NaN.
[[nodiscard]] TrainResult train(const ansatz::AnsatzConfig &config, const EmbeddingDataset &data,
                                const TrainOptions &options);

/// Same, starting from a given model.
[[nodiscard]] TrainResult train(Model initial, const EmbeddingDataset &data,
                                const TrainOptions &options);

/// Mean loss and raw-logit accuracy on a dataset (exact backend).
struct DatasetScore {
    double loss = 0.0;
    double accuracy = 0.0;
};
[[nodiscard]] DatasetScore score(const Model &model, const EmbeddingDataset &data);

} // namespace qets::pipeline
