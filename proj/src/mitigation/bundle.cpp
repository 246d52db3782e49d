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
#include "qets/mitigation/bundle.hpp"

#include <fstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "qets/core/error.hpp"

namespace qets::mitigation {

using nlohmann::json;

std::string histogram_file_name(const std::string &sample_id, std::size_t variant) {
    return fmt::format("sample{}_variant{}.hist", sample_id, variant);
}

void write_bundle(const std::filesystem::path &dir, const VariantBundle &bundle) {
    if (bundle.histograms.size() != bundle.sample_ids.size()) {
        throw ValidationError("bundle has mismatched sample ids and histograms");
    }
    std::filesystem::create_directories(dir);
    json manifest;
    manifest["qubits"] = bundle.qubit_count;
    manifest["variants"] = bundle.permutations.size();
    manifest["permutations"] = bundle.permutations;
    manifest["samples"] = bundle.sample_ids;
    if (!bundle.labels.empty()) {
        manifest["labels"] = bundle.labels;
    }
    if (!bundle.manifest_hash.empty()) {
        manifest["manifest_sha256"] = bundle.manifest_hash;
    }
    std::ofstream(dir / "bundle.json") << manifest.dump(2) << '\n';

    for (std::size_t s = 0; s < bundle.sample_ids.size(); ++s) {
        const auto &row = bundle.histograms[s];
        if (row.size() != bundle.permutations.size()) {
            throw ValidationError(fmt::format("sample {} has {} variant histograms, expected {}",
                                              bundle.sample_ids[s], row.size(),
                                              bundle.permutations.size()));
        }
        for (std::size_t v = 0; v < row.size(); ++v) {
            std::ofstream out(dir / histogram_file_name(bundle.sample_ids[s], v));
            if (!bundle.manifest_hash.empty()) {
                out << "# manifest_sha256 " << bundle.manifest_hash << '\n';
            }
            qsim::write_histogram(out, row[v]);
        }
    }
}

VariantBundle read_bundle(const std::filesystem::path &dir) {
    std::ifstream in(dir / "bundle.json");
    if (!in) {
        throw ValidationError(fmt::format("no bundle.json in {}", dir.string()));
    }
    VariantBundle bundle;
    try {
        const json manifest = json::parse(in);
        bundle.qubit_count = manifest.at("qubits").get<std::size_t>();
        bundle.permutations = manifest.at("permutations").get<std::vector<Permutation>>();
        bundle.sample_ids = manifest.at("samples").get<std::vector<std::string>>();
        if (manifest.contains("labels")) {
            bundle.labels = manifest.at("labels").get<std::map<std::string, int>>();
        }
        bundle.manifest_hash = manifest.value("manifest_sha256", std::string{});
    } catch (const json::exception &e) {
        throw ValidationError(fmt::format("bundle.json: {}", e.what()));
    }
    for (const auto &perm : bundle.permutations) {
        if (perm.size() != bundle.qubit_count) {
            throw ValidationError("bundle permutation length does not match qubit count");
        }
        (void)inverse(perm);
    }
    for (const auto &id : bundle.sample_ids) {
        std::vector<qsim::Histogram> row;
        for (std::size_t v = 0; v < bundle.permutations.size(); ++v) {
            const auto path = dir / histogram_file_name(id, v);
            std::ifstream hin(path);
            if (!hin) {
                throw ValidationError(fmt::format("missing histogram {}", path.string()));
            }
            auto hist = qsim::read_histogram(hin);
            if (hist.qubit_count() != bundle.qubit_count) {
                throw ValidationError(fmt::format("{} has the wrong bitstring width",
                                                  path.string()));
            }
            row.push_back(std::move(hist));
        }
        bundle.histograms.push_back(std::move(row));
    }
    return bundle;
}

std::vector<qsim::Histogram> remapped(const VariantBundle &bundle, std::size_t sample) {
    std::vector<qsim::Histogram> out;
    const auto &row = bundle.histograms.at(sample);
    out.reserve(row.size());
    for (std::size_t v = 0; v < row.size(); ++v) {
        out.push_back(remap_histogram(row[v], bundle.permutations[v]));
    }
    return out;
}

} // namespace qets::mitigation
