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
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "qets/core/diagnostics.hpp"
#include "qets/core/error.hpp"
#include "qets/core/random.hpp"
#include "qets/pipeline/dataset.hpp"
#include "qets/pipeline/encoder.hpp"
#include "qets/pipeline/metrics.hpp"
#include "qets/pipeline/model.hpp"
#include "qets/pipeline/serialization.hpp"

using namespace qets;
using namespace qets::pipeline;
using Catch::Matchers::WithinAbs;

namespace {

ansatz::AnsatzConfig small_config(std::size_t q) {
    ansatz::AnsatzConfig c;
    c.Q = q;
    return c;
}

EmbeddingDataset labelled(std::size_t zeros, std::size_t ones, std::size_t dim = 3) {
    EmbeddingDataset d(dim);
    for (std::size_t i = 0; i < zeros + ones; ++i) {
        d.add({fmt::format("s{:05}", i), i < zeros ? 0 : 1,
               std::vector<double>(dim, static_cast<double>(i))});
    }
    return d;
}

std::set<std::string> ids(const EmbeddingDataset &d) {
    std::set<std::string> out;
    for (const auto &s : d.samples()) {
        out.insert(s.id);
    }
    return out;
}

double max_abs(const std::vector<double> &v) {
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

} // namespace

TEST_CASE("balanced split leaves 9101 test samples out of 9613", "[pipeline][split]") {
    const auto data = labelled(4807, 4806, 1);
    const auto split = split_dataset(data, {256, 1});
    CHECK(split.train.size() == 512);
    CHECK(split.test.size() == 9101);
    CHECK(split.train.count_label(0) == 256);
    CHECK(split.train.count_label(1) == 256);
}

TEST_CASE("split partition law", "[pipeline][split]") {
    const auto data = labelled(30, 25);
    const auto split = split_dataset(data, {10, 4});
    const auto train = ids(split.train);
    const auto test = ids(split.test);
    std::vector<std::string> both;
    std::set_intersection(train.begin(), train.end(), test.begin(), test.end(),
                          std::back_inserter(both));
    CHECK(both.empty());
    std::set<std::string> all = train;
    all.insert(test.begin(), test.end());
    CHECK(all == ids(data));
}

TEST_CASE("split with zero training samples puts everything in test", "[pipeline][split]") {
    const auto data = labelled(5, 5);
    const auto split = split_dataset(data, {0, 1});
    CHECK(split.train.empty());
    CHECK(split.test.size() == 10);
}

TEST_CASE("split is reproducible and input-order invariant", "[pipeline][split]") {
    const auto data = labelled(40, 40);
    EmbeddingDataset reversed(data.dimension());
    for (auto it = data.samples().rbegin(); it != data.samples().rend(); ++it) {
        reversed.add(*it);
    }
    const auto a = split_dataset(data, {12, 77});
    const auto b = split_dataset(reversed, {12, 77});
    CHECK(ids(a.train) == ids(b.train));
    CHECK(ids(split_dataset(data, {12, 78}).train) != ids(a.train));
}

TEST_CASE("split rejects insufficient populations", "[pipeline][split]") {
    CHECK_THROWS_AS(split_dataset(labelled(5, 3), {4, 1}), ValidationError);
}

TEST_CASE("dataset validation and file round trip", "[pipeline][dataset]") {
    EmbeddingDataset d(2);
    CHECK_THROWS_AS(d.add({"a", 2, {0.0, 0.0}}), ValidationError);
    CHECK_THROWS_AS(d.add({"a", 0, {0.0}}), ValidationError);
    CHECK_THROWS_AS(d.add({"a", 0, {0.0, std::nan("")}}), ValidationError);
    d.add({"a", 0, {0.125, -3.5}});
    d.add({"b", 1, {1e-300, 42.0}});
    std::stringstream ss;
    write_embeddings(ss, d);
    const auto back = read_embeddings(ss);
    REQUIRE(back.size() == 2);
    CHECK(back[1].embedding == d[1].embedding);
    CHECK(back[0].id == "a");
    std::istringstream bad("dim 2\nx,0,1.0\n");
    CHECK_THROWS_AS(read_embeddings(bad), ValidationError);
    std::istringstream no_header("x,0,1.0,2.0\n");
    CHECK_THROWS_AS(read_embeddings(no_header), ValidationError);
}

TEST_CASE("encoder examples", "[pipeline][encoder]") {
    const std::vector<double> x{0.3, -1.2};
    const auto zero = encode(LinearEncoder::zeros(4, 2), x);
    CHECK(zero == std::vector<double>(4, 0.0));

    auto identity = LinearEncoder::zeros(2, 2);
    identity.weights = {1.0, 0.0, 0.0, 1.0};
    CHECK(encode(identity, x) == x);

    LinearEncoder e{2, 2, {1.0, 2.0, -3.0, 0.5}, {0.25, -1.0}};
    const auto y = encode(e, std::vector<double>{2.0, 4.0});
    CHECK(y == std::vector<double>{10.25, -5.0});

    CHECK_THROWS_AS(encode(e, std::vector<double>{1.0}), ValidationError);
    LinearEncoder broken{2, 2, {1.0}, {0.0, 0.0}};
    CHECK_THROWS_AS(broken.validate(), ValidationError);
}

TEST_CASE("zero model predicts logit +1, class 0", "[pipeline][predict]") {
    Model m;
    m.config = small_config(4);
    m.encoder = LinearEncoder::zeros(4, 3);
    m.params.assign(m.config.trainable_param_count(), 0.0);
    const std::vector<double> x{0.4, -0.2, 1.0};
    const auto p = predict(m, x, {});
    CHECK_THAT(p.logit, WithinAbs(1.0, 1e-12));
    CHECK(p.label == 0);
}

TEST_CASE("exact and mps backends agree and stay in [-1, 1]", "[pipeline][predict]") {
    const auto m = Model::random(small_config(6), 5, 3);
    Rng rng(2);
    InferenceOptions mps_opts;
    mps_opts.backend = Backend::mps;
    mps_opts.chi_max = 8;
    for (int i = 0; i < 10; ++i) {
        std::vector<double> x(5);
        for (auto &v : x) {
            v = uniform(rng, -3.0, 3.0);
        }
        const auto exact = predict(m, x, {});
        CHECK(exact.logit >= -1.0);
        CHECK(exact.logit <= 1.0);
        CHECK_THAT(predict(m, x, mps_opts).logit, WithinAbs(exact.logit, 1e-9));
        CHECK(exact.logit == exact_logit(m, x));
    }
}

TEST_CASE("noisy backend at zero noise matches exact within shot noise", "[pipeline][predict]") {
    std::vector<std::string> warnings;
    ScopedWarningSink sink([&](const std::string &w) { warnings.push_back(w); });
    const auto m = Model::random(small_config(6), 4, 9);
    InferenceOptions opts;
    opts.backend = Backend::noisy;
    opts.noise = qsim::NoiseParams::none();
    opts.shots = 5000;
    opts.seed = 10;
    const std::vector<double> x{0.5, -0.5, 0.25, 1.0};
    const auto noisy = predict(m, x, opts);
    CHECK(std::abs(noisy.logit - exact_logit(m, x)) < 5.0 * std::sqrt(1.0 / 5000.0));
    CHECK(predict(m, x, opts).logit == noisy.logit);
    opts.use_filter = true;
    CHECK(predict(m, x, opts).logit == noisy.logit);
}

TEST_CASE("backend names", "[pipeline]") {
    CHECK(parse_backend("exact") == Backend::exact);
    CHECK(parse_backend("noisy") == Backend::noisy);
    CHECK(parse_backend("mps") == Backend::mps);
    CHECK(to_string(Backend::mps) == "mps");
    CHECK_THROWS_AS(parse_backend("gpu"), ValidationError);
}

TEST_CASE("parameter-shift gradient matches finite differences", "[pipeline][gradient]") {
    auto cfg = small_config(4);
    const auto m = Model::random(cfg, 3, 21);
    const std::vector<double> x{0.7, -0.4, 1.3};
    const auto g = logit_gradient(m, x);
    const double eps = 1e-5;

    std::vector<double> fd;
    std::vector<double> ps;
    for (std::size_t i = 0; i < m.params.size(); ++i) {
        auto up = m;
        auto down = m;
        up.params[i] += eps;
        down.params[i] -= eps;
        fd.push_back((exact_logit(up, x) - exact_logit(down, x)) / (2 * eps));
        ps.push_back(g.params[i]);
    }
    for (std::size_t i = 0; i < m.encoder.weights.size(); ++i) {
        auto up = m;
        auto down = m;
        up.encoder.weights[i] += eps;
        down.encoder.weights[i] -= eps;
        fd.push_back((exact_logit(up, x) - exact_logit(down, x)) / (2 * eps));
        ps.push_back(g.encoder_weights[i]);
    }
    for (std::size_t i = 0; i < m.encoder.bias.size(); ++i) {
        auto up = m;
        auto down = m;
        up.encoder.bias[i] += eps;
        down.encoder.bias[i] -= eps;
        fd.push_back((exact_logit(up, x) - exact_logit(down, x)) / (2 * eps));
        ps.push_back(g.encoder_bias[i]);
    }
    std::vector<double> diff(fd.size());
    for (std::size_t i = 0; i < fd.size(); ++i) {
        diff[i] = ps[i] - fd[i];
    }
    CHECK(max_abs(diff) / max_abs(fd) <= 1e-5);
}

TEST_CASE("loss and its derivative", "[pipeline][loss]") {
    CHECK_THAT(sample_loss(0.0, 0), WithinAbs(std::log(2.0), 1e-15));
    CHECK(sample_loss(1.0, 0) < sample_loss(-1.0, 0));
    CHECK(sample_loss(1.0, 1) > sample_loss(-1.0, 1));
    for (double z : {-0.8, -0.1, 0.3, 0.9}) {
        for (int y : {0, 1}) {
            const double fd = (sample_loss(z + 1e-6, y) - sample_loss(z - 1e-6, y)) / 2e-6;
            CHECK_THAT(sample_loss_derivative(z, y), WithinAbs(fd, 1e-8));
        }
    }
}

TEST_CASE("all-zero data at a symmetric start is a fixed point", "[pipeline][train]") {
    Model m;
    m.config = small_config(4);
    m.encoder = LinearEncoder::zeros(4, 2);
    m.params.assign(m.config.trainable_param_count(), 0.0);
    EmbeddingDataset data(2);
    for (int i = 0; i < 8; ++i) {
        data.add({fmt::format("z{}", i), i % 2, {0.0, 0.0}});
    }
    TrainOptions opts;
    opts.epochs = 1;
    const auto result = train(m, data, opts);
    CHECK(result.model.params == m.params);
    CHECK(result.model.encoder.weights == m.encoder.weights);
    CHECK(result.model.encoder.bias == m.encoder.bias);
}

TEST_CASE("Q=6 model learns a separable cluster task", "[pipeline][train]") {
    const auto data = synthetic_clusters(32, 4, 1.0, 0.2, 5);
    TrainOptions opts;
    opts.epochs = 200;
    opts.seed = 6;
    opts.stop_accuracy = 0.95;
    const auto result = train(small_config(6), data, opts);
    CHECK(result.accuracy_curve.back() >= 0.95);
    CHECK(score(result.model, data).accuracy >= 0.95);
    CHECK(result.epochs_run <= 200);
    REQUIRE(result.loss_curve.size() == result.epochs_run + 1);
    std::size_t rises = 0;
    for (std::size_t e = 1; e < result.loss_curve.size(); ++e) {
        rises += result.loss_curve[e] > result.loss_curve[e - 1] + 1e-3 ? 1 : 0;
    }
    CHECK(rises == 0);
    CHECK(result.loss_curve.back() < result.loss_curve.front());
}

TEST_CASE("training is deterministic in its seed", "[pipeline][train]") {
    const auto data = synthetic_clusters(8, 3, 1.0, 0.2, 1);
    TrainOptions opts;
    opts.epochs = 3;
    opts.seed = 12;
    const auto a = train(small_config(4), data, opts);
    const auto b = train(small_config(4), data, opts);
    CHECK(a.model.params == b.model.params);
    CHECK(a.loss_curve == b.loss_curve);
    CHECK_THROWS_AS(train(small_config(4), EmbeddingDataset(3), opts), ValidationError);
}

TEST_CASE("logistic baseline examples", "[pipeline][baseline]") {
    EmbeddingDataset two(1);
    two.add({"a", 0, {-1.0}});
    two.add({"b", 1, {1.0}});
    CHECK(logistic_baseline(two, two, {}) == 1.0);

    Rng rng(33);
    EmbeddingDataset noise_train(4);
    EmbeddingDataset noise_test(4);
    for (int i = 0; i < 2000; ++i) {
        std::vector<double> v(4);
        for (auto &x : v) {
            x = normal(rng);
        }
        const int label = uniform01(rng) < 0.5 ? 0 : 1;
        (i < 1000 ? noise_train : noise_test).add({fmt::format("n{}", i), label, v});
    }
    LogisticOptions opts;
    opts.iterations = 300;
    const double acc = logistic_baseline(noise_train, noise_test, opts);
    CHECK(std::abs(acc - 0.5) < 5.0 * std::sqrt(0.25 / 1000.0));

    const auto clusters = synthetic_clusters(50, 6, 1.0, 0.3, 2);
    CHECK(logistic_baseline(clusters, clusters, {}) >= 0.95);
    CHECK_THROWS_AS(logistic_baseline(EmbeddingDataset(1), two, {}), ValidationError);
}

TEST_CASE("reference constants", "[pipeline][baseline]") {
    STATIC_CHECK(reference::svc_accuracy == 0.8956);
    STATIC_CHECK(reference::logistic_accuracy == 0.8906);
    STATIC_CHECK(reference::measured_break_even_qubits == 34.0);
}

TEST_CASE("evaluate examples", "[pipeline][metrics]") {
    const std::vector<int> labels{0, 1, 1, 0};
    const auto all = evaluate(labels, labels);
    CHECK(all.accuracy == 1.0);
    CHECK(all.standard_error == 0.0);
    CHECK(all.confusion[0][0] == 2);
    CHECK(all.confusion[1][1] == 2);

    std::vector<int> truth(250, 0);
    std::vector<int> pred(250, 0);
    for (int i = 0; i < 25; ++i) {
        pred[static_cast<std::size_t>(i)] = 1;
    }
    const auto e = evaluate(pred, truth);
    CHECK(e.accuracy == 0.9);
    CHECK_THAT(e.standard_error, WithinAbs(0.018973665961, 1e-11));
    CHECK(e.confusion[0][1] == 25);

    std::reverse(pred.begin(), pred.end());
    CHECK(evaluate(pred, truth).accuracy == e.accuracy);

    CHECK_THROWS_AS(evaluate(std::vector<int>{0}, std::vector<int>{0, 1}), ValidationError);
    CHECK_THROWS_AS(evaluate(std::vector<int>{}, std::vector<int>{}), ValidationError);
    CHECK_THROWS_AS(evaluate(std::vector<int>{2}, std::vector<int>{0}), ValidationError);
}

TEST_CASE("model manifest round trip", "[pipeline][serialization]") {
    const auto m = Model::random(small_config(6), 5, 44);
    const auto j = model_to_json(m, {{"init", 44}});
    const auto back = model_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.params == m.params);
    CHECK(back.encoder.weights == m.encoder.weights);
    CHECK(back.encoder.bias == m.encoder.bias);
    CHECK(back.config.Q == 6);
    CHECK(j.at("seeds").at("init") == 44);

    auto broken = j;
    broken["params"].erase(0);
    CHECK_THROWS_AS(model_from_json(broken), ValidationError);
    CHECK_THROWS_AS(config_from_json({{"Q", 10}, {"X", 1}}), ValidationError);
    CHECK_THROWS_AS(config_from_json({{"Q", 11}}), ValidationError);
    CHECK(config_from_json({{"Q", 12}}).R == 4);
    CHECK(config_to_json(small_config(8)).at("Q") == 8);
}
