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
#include "qets/pipeline/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "qets/core/error.hpp"
#include "qets/core/random.hpp"

namespace qets::pipeline {

void EmbeddingDataset::add(Sample sample) {
    if (sample.label != 0 && sample.label != 1) {
        throw ValidationError(
            fmt::format("sample {}: label {} is not binary", sample.id, sample.label));
    }
    if (sample.embedding.size() != dimension_) {
        throw ValidationError(fmt::format("sample {}: dimension {} != {}", sample.id,
                                          sample.embedding.size(), dimension_));
    }
    for (double v : sample.embedding) {
        if (!std::isfinite(v)) {
            throw ValidationError(fmt::format("sample {}: non-finite coordinate", sample.id));
        }
    }
    samples_.push_back(std::move(sample));
}

std::size_t EmbeddingDataset::count_label(int label) const noexcept {
    return static_cast<std::size_t>(std::count_if(
        samples_.begin(), samples_.end(), [label](const Sample &s) { return s.label == label; }));
}

namespace {

double parse_double(std::string_view text, std::size_t line_no) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
        text.remove_prefix(1);
    }
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ValidationError(
            fmt::format("embeddings line {}: '{}' is not a number", line_no, text));
    }
    return value;
}

} // namespace

EmbeddingDataset read_embeddings(std::istream &in) {
    std::string line;
    std::size_t line_no = 0;
    std::optional<EmbeddingDataset> dataset;
    while (std::getline(in, line)) {
        ++line_no;
        auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') {
            continue;
        }
        if (!dataset) {
            std::istringstream header(line);
            std::string tag;
            std::size_t dim = 0;
            if (!(header >> tag >> dim) || tag != "dim" || dim == 0) {
                throw ValidationError(
                    fmt::format("embeddings line {}: expected header 'dim <d>'", line_no));
            }
            dataset.emplace(dim);
            continue;
        }
        std::vector<std::string_view> fields;
        std::string_view rest(line);
        while (true) {
            auto comma = rest.find(',');
            fields.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) {
                break;
            }
            rest.remove_prefix(comma + 1);
        }
        if (fields.size() != dataset->dimension() + 2) {
            throw ValidationError(fmt::format("embeddings line {}: {} fields, expected {}",
                                              line_no, fields.size(),
                                              dataset->dimension() + 2));
        }
        Sample sample;
        sample.id = std::string(fields[0]);
        const double label = parse_double(fields[1], line_no);
        sample.label = static_cast<int>(label);
        if (label != static_cast<double>(sample.label)) {
            throw ValidationError(fmt::format("embeddings line {}: label is not an integer",
                                              line_no));
        }
        for (std::size_t k = 2; k < fields.size(); ++k) {
            sample.embedding.push_back(parse_double(fields[k], line_no));
        }
        dataset->add(std::move(sample));
    }
    if (!dataset) {
        throw ValidationError("embeddings file has no 'dim' header");
    }
    return *std::move(dataset);
}

void write_embeddings(std::ostream &out, const EmbeddingDataset &dataset) {
    out << "dim " << dataset.dimension() << '\n';
    for (const auto &s : dataset.samples()) {
        out << s.id << ',' << s.label;
        for (double v : s.embedding) {
            out << fmt::format(",{:.17g}", v);
        }
        out << '\n';
    }
}

DatasetSplit split_dataset(const EmbeddingDataset &dataset, const SplitSpec &spec) {
    std::vector<std::size_t> by_label[2];
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        by_label[dataset[i].label].push_back(i);
    }
    auto by_id = [&](std::size_t a, std::size_t b) { return dataset[a].id < dataset[b].id; };

    Rng rng(spec.seed);
    std::vector<bool> in_train(dataset.size(), false);
    for (int label = 0; label < 2; ++label) {
        auto &idx = by_label[label];
        if (idx.size() < spec.per_label_train) {
            throw ValidationError(fmt::format("label {} has {} samples, {} requested for "
                                              "training",
                                              label, idx.size(), spec.per_label_train));
        }
        std::sort(idx.begin(), idx.end(), by_id);
        for (std::size_t i = idx.size(); i > 1; --i) {
            std::swap(idx[i - 1], idx[uniform_index(rng, i)]);
        }
        for (std::size_t k = 0; k < spec.per_label_train; ++k) {
            in_train[idx[k]] = true;
        }
    }

    std::vector<std::size_t> order(dataset.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(), by_id);
    DatasetSplit split{EmbeddingDataset(dataset.dimension()),
                       EmbeddingDataset(dataset.dimension())};
    for (auto i : order) {
        (in_train[i] ? split.train : split.test).add(dataset[i]);
    }
    return split;
}

EmbeddingDataset synthetic_clusters(std::size_t per_label, std::size_t dimension,
                                    double separation, double noise, std::uint64_t seed) {
    if (dimension == 0) {
        throw ValidationError("synthetic embeddings need a positive dimension");
    }
    Rng rng(seed);
    std::vector<double> direction(dimension);
    double norm = 0.0;
    for (auto &v : direction) {
        v = normal(rng);
        norm += v * v;
    }
    norm = std::sqrt(norm);
    for (auto &v : direction) {
        v /= norm;
    }

    EmbeddingDataset out(dimension);
    const int width = static_cast<int>(std::to_string(2 * per_label).size());
    for (std::size_t i = 0; i < 2 * per_label; ++i) {
        const int label = static_cast<int>(i % 2);
        const double side = label == 0 ? separation : -separation;
        Sample s;
        s.id = fmt::format("{:0{}}", i, width);
        s.label = label;
        s.embedding.resize(dimension);
        for (std::size_t k = 0; k < dimension; ++k) {
            s.embedding[k] = side * direction[k] + noise * normal(rng);
        }
        out.add(std::move(s));
    }
    return out;
}

} // namespace qets::pipeline
