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
#include "qets/pipeline/metrics.hpp"

#include <cmath>

#include <fmt/format.h>

#include "qets/core/error.hpp"
#include "qets/core/random.hpp"

namespace qets::pipeline {

Evaluation evaluate(std::span<const int> predictions, std::span<const int> labels) {
    if (predictions.size() != labels.size()) {
        throw ValidationError(fmt::format("{} predictions for {} labels", predictions.size(),
                                          labels.size()));
    }
    if (labels.empty()) {
        throw ValidationError("nothing to evaluate");
    }
    Evaluation e;
    e.total = labels.size();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int t = labels[i];
        const int p = predictions[i];
        if ((t != 0 && t != 1) || (p != 0 && p != 1)) {
            throw ValidationError("labels and predictions must be 0 or 1");
        }
        ++e.confusion[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
        e.correct += t == p ? 1 : 0;
    }
    const auto n = static_cast<double>(e.total);
    e.accuracy = static_cast<double>(e.correct) / n;
    e.standard_error = std::sqrt(e.accuracy * (1.0 - e.accuracy) / n);
    return e;
}

double LogisticModel::probability(std::span<const double> x) const {
    double z = bias;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        z += weights[k] * x[k];
    }
    return 1.0 / (1.0 + std::exp(-z));
}

int LogisticModel::predict(std::span<const double> x) const {
    return probability(x) > 0.5 ? 1 : 0;
}

LogisticModel fit_logistic(const EmbeddingDataset &train, const LogisticOptions &options) {
    if (train.empty()) {
        throw ValidationError("logistic regression needs training samples");
    }
    const std::size_t d = train.dimension();
    LogisticModel model{std::vector<double>(d), 0.0};
    Rng rng(options.seed);
    for (auto &w : model.weights) {
        w = uniform(rng, -0.01, 0.01);
    }
    const auto n = static_cast<double>(train.size());
    std::vector<double> grad(d);
    for (std::size_t it = 0; it < options.iterations; ++it) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double grad_b = 0.0;
        for (const auto &s : train.samples()) {
            const double err = model.probability(s.embedding) - static_cast<double>(s.label);
            for (std::size_t k = 0; k < d; ++k) {
                grad[k] += err * s.embedding[k];
            }
            grad_b += err;
        }
        for (std::size_t k = 0; k < d; ++k) {
            model.weights[k] -=
                options.learning_rate * (grad[k] / n + options.l2 * model.weights[k]);
        }
        model.bias -= options.learning_rate * grad_b / n;
    }
    return model;
}

double logistic_baseline(const EmbeddingDataset &train, const EmbeddingDataset &test,
                         const LogisticOptions &options) {
    if (test.empty()) {
        throw ValidationError("logistic baseline needs test samples");
    }
    const auto model = fit_logistic(train, options);
    std::size_t correct = 0;
    for (const auto &s : test.samples()) {
        correct += model.predict(s.embedding) == s.label ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(test.size());
}

} // namespace qets::pipeline
