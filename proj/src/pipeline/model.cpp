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
#include "qets/pipeline/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "qets/core/error.hpp"
#include "qets/core/random.hpp"
#include "qets/mitigation/logits.hpp"
#include "qets/mitigation/variants.hpp"
#include "qets/mps/mps.hpp"
#include "qets/qsim/statevector.hpp"

namespace qets::pipeline {

Backend parse_backend(const std::string &name) {
    if (name == "exact") {
        return Backend::exact;
    }
    if (name == "noisy") {
        return Backend::noisy;
    }
    if (name == "mps") {
        return Backend::mps;
    }
    throw ValidationError(fmt::format("unknown backend '{}' (exact | noisy | mps)", name));
}

std::string to_string(Backend backend) {
    switch (backend) {
    case Backend::exact:
        return "exact";
    case Backend::noisy:
        return "noisy";
    case Backend::mps:
        return "mps";
    }
    return "unknown";
}

Model Model::random(const ansatz::AnsatzConfig &config, std::size_t embedding_dim,
                    std::uint64_t seed) {
    config.validate();
    Model m{config, LinearEncoder::random(config.Q, embedding_dim, 0.1, derive_seed(seed, 0)),
            ansatz::ParamVector(config.trainable_param_count())};
    Rng rng(derive_seed(seed, 1));
    for (auto &p : m.params) {
        p = uniform(rng, -std::numbers::pi, std::numbers::pi);
    }
    return m;
}

void Model::validate() const {
    config.validate();
    encoder.validate();
    if (encoder.outputs != config.Q) {
        throw ValidationError(fmt::format("encoder produces {} angles for {} qubits",
                                          encoder.outputs, config.Q));
    }
    if (params.size() != config.trainable_param_count()) {
        throw ValidationError(fmt::format("model has {} parameters, ansatz needs {}",
                                          params.size(), config.trainable_param_count()));
    }
    for (double p : params) {
        if (!std::isfinite(p)) {
            throw ValidationError("model parameter is not finite");
        }
    }
}

qsim::Circuit model_circuit(const Model &model, std::span<const double> embedding) {
    const auto angles = encode(model.encoder, embedding);
    return ansatz::build_circuit(model.config, angles, model.params);
}

std::vector<qsim::Histogram> run_variants(const qsim::Circuit &circuit,
                                          const InferenceOptions &options) {
    if (options.shots < options.variants) {
        throw ValidationError(fmt::format("{} shots cannot cover {} variants", options.shots,
                                          options.variants));
    }
    const auto set = mitigation::generate_variants(circuit, options.variants,
                                                   derive_seed(options.seed, 0));
    const auto shots = ansatz::split_shots(options.shots, options.variants);
    std::vector<qsim::Histogram> out;
    out.reserve(set.size());
    for (std::size_t k = 0; k < set.size(); ++k) {
        const auto physical =
            qsim::run_noisy(set.circuits[k], options.noise, shots[k], derive_seed(options.seed, k + 1));
        out.push_back(mitigation::remap_histogram(physical, set.permutations[k]));
    }
    return out;
}

double exact_logit(const Model &model, std::span<const double> embedding) {
    return qsim::expectation_z(qsim::run_statevector(model_circuit(model, embedding)),
                               target_qubit);
}

Prediction predict(const Model &model, std::span<const double> embedding,
                   const InferenceOptions &options) {
    model.validate();
    double logit = 0.0;
    switch (options.backend) {
    case Backend::exact:
        logit = exact_logit(model, embedding);
        break;
    case Backend::mps:
        logit = mps::simulate_mps(model_circuit(model, embedding), options.chi_max)
                    .expectation_z(target_qubit);
        break;
    case Backend::noisy: {
        const auto hists = run_variants(model_circuit(model, embedding), options);
        const auto dist = options.use_filter ? mitigation::dnl_filter(hists, options.filter)
                                             : mitigation::aggregate_mean(hists);
        logit = qsim::z_from_distribution(dist, target_qubit);
        break;
    }
    }
    return {logit, mitigation::classify(logit)};
}

double sample_loss(double logit, int label) {
    const double y = label == 0 ? 1.0 : -1.0;
    const double m = -2.0 * y * logit;
    // log(1 + e^m), stable for both signs
    return m > 0.0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m));
}

double sample_loss_derivative(double logit, int label) {
    const double y = label == 0 ? 1.0 : -1.0;
    const double m = -2.0 * y * logit;
    const double sigma = 1.0 / (1.0 + std::exp(-m));
    return -2.0 * y * sigma;
}

Gradient logit_gradient(const Model &model, std::span<const double> embedding) {
    const auto angles = encode(model.encoder, embedding);
    const auto built = ansatz::build_circuit_with_roles(model.config, angles, model.params);
    const auto gates = built.circuit.gates();
    const std::size_t q_count = model.config.Q;

    Gradient grad{std::vector<double>(model.params.size(), 0.0),
                  std::vector<double>(model.encoder.weights.size(), 0.0),
                  std::vector<double>(model.encoder.bias.size(), 0.0)};
    std::vector<double> angle_grad(q_count, 0.0);

    constexpr double shift = std::numbers::pi / 2.0;
    auto prefix = qsim::StateVector::zero(q_count);
    for (std::size_t g = 0; g < gates.size(); ++g) {
        const auto &role = built.roles[g];
        if (role.kind != ansatz::GateRole::Kind::entangling) {
            double z[2];
            for (int side = 0; side < 2; ++side) {
                auto state = prefix;
                const double delta = side == 0 ? shift : -shift;
                qsim::apply_gate_inplace(
                    state, qsim::Gate::ry(gates[g].target(), gates[g].angle() + delta));
                for (std::size_t h = g + 1; h < gates.size(); ++h) {
                    qsim::apply_gate_inplace(state, gates[h]);
                }
                z[side] = qsim::expectation_z(state, target_qubit);
            }
            const double d = 0.5 * (z[0] - z[1]);
            if (role.kind == ansatz::GateRole::Kind::trainable) {
                grad.params[role.index] += d;
            } else {
                angle_grad[role.index] += d;
            }
        }
        qsim::apply_gate_inplace(prefix, gates[g]);
    }

    const std::size_t d_in = model.encoder.inputs;
    for (std::size_t q = 0; q < q_count; ++q) {
        grad.encoder_bias[q] = angle_grad[q];
        for (std::size_t c = 0; c < d_in; ++c) {
            grad.encoder_weights[q * d_in + c] = angle_grad[q] * embedding[c];
        }
    }
    return grad;
}

Gradient loss_gradient(const Model &model, const EmbeddingDataset &data,
                       std::span<const std::size_t> batch) {
    Gradient total{std::vector<double>(model.params.size(), 0.0),
                   std::vector<double>(model.encoder.weights.size(), 0.0),
                   std::vector<double>(model.encoder.bias.size(), 0.0)};
    if (batch.empty()) {
        return total;
    }
    auto axpy = [](std::vector<double> &acc, const std::vector<double> &x, double a) {
        for (std::size_t i = 0; i < acc.size(); ++i) {
            acc[i] += a * x[i];
        }
    };
    const double inv = 1.0 / static_cast<double>(batch.size());
    for (auto i : batch) {
        const auto &s = data[i];
        const double z = exact_logit(model, s.embedding);
        const double dl = sample_loss_derivative(z, s.label) * inv;
        const auto g = logit_gradient(model, s.embedding);
        axpy(total.params, g.params, dl);
        axpy(total.encoder_weights, g.encoder_weights, dl);
        axpy(total.encoder_bias, g.encoder_bias, dl);
    }
    return total;
}

DatasetScore score(const Model &model, const EmbeddingDataset &data) {
    if (data.empty()) {
        throw ValidationError("cannot score an empty dataset");
    }
    double loss = 0.0;
    std::size_t correct = 0;
    for (const auto &s : data.samples()) {
        const double z = exact_logit(model, s.embedding);
        loss += sample_loss(z, s.label);
        correct += mitigation::classify(z) == s.label ? 1 : 0;
    }
    const auto n = static_cast<double>(data.size());
    return {loss / n, static_cast<double>(correct) / n};
}

TrainResult train(const ansatz::AnsatzConfig &config, const EmbeddingDataset &data,
                  const TrainOptions &options) {
    return train(Model::random(config, data.dimension(), options.seed), data, options);
}

TrainResult train(Model initial, const EmbeddingDataset &data, const TrainOptions &options) {
    initial.validate();
    if (data.empty()) {
        throw ValidationError("training set is empty");
    }
    if (initial.encoder.inputs != data.dimension()) {
        throw ValidationError(fmt::format("encoder expects dimension {}, data has {}",
                                          initial.encoder.inputs, data.dimension()));
    }
    const std::size_t batch_size =
        options.batch_size != 0 ? options.batch_size : initial.config.B;

    TrainResult result{std::move(initial), {}, {}, 0};
    auto &model = result.model;
    auto record = [&] {
        const auto s = score(model, data);
        if (!std::isfinite(s.loss)) {
            throw DataQualityError(
                fmt::format("training diverged: loss is {} after epoch {}", s.loss,
                            result.epochs_run));
        }
        result.loss_curve.push_back(s.loss);
        result.accuracy_curve.push_back(s.accuracy);
        return s;
    };

    auto current = record();
    Rng rng(derive_seed(options.seed, 2));
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
        if (current.accuracy >= options.stop_accuracy) {
            break;
        }
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[uniform_index(rng, i)]);
        }
        for (std::size_t start = 0; start < order.size(); start += batch_size) {
            const std::size_t stop = std::min(order.size(), start + batch_size);
            const auto g = loss_gradient(
                model, data, std::span<const std::size_t>(order).subspan(start, stop - start));
            for (std::size_t k = 0; k < model.params.size(); ++k) {
                model.params[k] -= options.learning_rate * g.params[k];
            }
            for (std::size_t k = 0; k < model.encoder.weights.size(); ++k) {
                model.encoder.weights[k] -= options.learning_rate * g.encoder_weights[k];
            }
            for (std::size_t k = 0; k < model.encoder.bias.size(); ++k) {
                model.encoder.bias[k] -= options.learning_rate * g.encoder_bias[k];
            }
        }
        ++result.epochs_run;
        current = record();
    }
    return result;
}

} // namespace qets::pipeline
