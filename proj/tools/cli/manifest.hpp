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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qets/ansatz/ansatz.hpp"
#include "qets/energy/energy.hpp"
#include "qets/mitigation/aggregation.hpp"
#include "qets/mitigation/logits.hpp"
#include "qets/pipeline/model.hpp"
#include "qets/powerlog/powerlog.hpp"
#include "qets/qsim/noise.hpp"

namespace qets::cli {

enum class Aggregation { mean, dnl, grid };

struct MitigationSpec {
    std::size_t variants = 25;
    Aggregation aggregation = Aggregation::mean;
    mitigation::FilterParams filter;
    std::vector<double> grid_p = mitigation::default_grid_p;
    std::vector<std::size_t> grid_t = mitigation::default_grid_t;
};

enum class ShotPolicy { fixed, table };

struct DataSpec {
    /// Embedding file; synthetic clusters are generated when absent.
    std::optional<std::filesystem::path> embeddings;
    std::size_t synthetic_per_label = 48;
    std::size_t synthetic_dimension = 8;
    double synthetic_separation = 1.0;
    double synthetic_noise = 0.3;
    std::size_t per_label_train = 32;
};

struct TrainSpec {
    std::size_t epochs = 50;
    double learning_rate = 0.05;
    std::size_t batch_size = 0;
    double stop_accuracy = 2.0;
};

struct EvalSpec {
    /// Test samples to evaluate, 0 for all.
    std::size_t limit = 0;
    bool logistic_baseline = true;
};

struct EnergySpec {
    std::vector<std::size_t> qubits{10, 12, 14, 16, 18, 20, 22, 24, 26, 28};
    energy::EnergyModelParams params;
    std::uint64_t variant_multiplier = 1;
    std::optional<double> fit_min_q;
    double ceiling = energy::crossover_ceiling;
};

struct PowerlogSpec {
    std::optional<std::filesystem::path> trace;
    std::optional<std::filesystem::path> jobs;
    powerlog::IntegrationOptions integration;
    /// Component whose windows go into the normalised series and the fit.
    std::string component = "total";
    double spacing = 3.0;
};

/// Parsed and validated experiment manifest. `raw` keeps the JSON after flag
/// overrides; its hash identifies every output file.
struct ExperimentManifest {
    nlohmann::json raw = nlohmann::json::object();
    std::filesystem::path base_dir = ".";

    ansatz::AnsatzConfig ansatz;
    pipeline::Backend backend = pipeline::Backend::exact;
    qsim::NoiseParams noise;
    MitigationSpec mitigation;
    ShotPolicy shot_policy = ShotPolicy::fixed;
    std::size_t chi_max = 64;
    std::optional<std::uint64_t> seed;
    DataSpec data;
    TrainSpec train;
    EvalSpec eval;
    /// Test samples turned into circuits by build and run.
    std::size_t run_limit = 4;
    std::optional<std::filesystem::path> model;
    std::optional<std::filesystem::path> bundle;
    EnergySpec energy;
    PowerlogSpec powerlog;
    std::filesystem::path output = "out";

    /// Total shots per logical circuit under the shot policy.
    [[nodiscard]] std::uint64_t total_shots() const;
    /// Throws ValidationError pointing at `seed` when no seed was given.
    [[nodiscard]] std::uint64_t require_seed() const;
    /// Hex SHA-256 of the canonical manifest without the output location.
    [[nodiscard]] std::string hash() const;
};

/// Validates every section. Relative paths resolve against `base_dir`.
[[nodiscard]] ExperimentManifest parse_manifest(const nlohmann::json &raw,
                                                const std::filesystem::path &base_dir = ".");

[[nodiscard]] nlohmann::json read_manifest_json(const std::filesystem::path &path);

/// Sets `dotted.key.path` to `value`, parsed as JSON when possible and kept
/// as a string otherwise.
void apply_override(nlohmann::json &raw, const std::string &key_path, const std::string &value);

[[nodiscard]] std::string sha256_hex(const std::string &data);

} // namespace qets::cli
