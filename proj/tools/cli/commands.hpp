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

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli/manifest.hpp"

namespace qets::cli {

/// Writes result files under one directory, stamping each with the manifest
/// hash: a `# manifest_sha256 <hex>` first line for text files and a
/// `manifest_sha256` member for JSON objects.
class OutputWriter {
  public:
    OutputWriter(std::filesystem::path dir, std::string manifest_hash);

    std::filesystem::path text(const std::filesystem::path &relative, const std::string &body);
    std::filesystem::path json(const std::filesystem::path &relative, nlohmann::json document);
    /// Records a file some other writer produced inside the directory.
    void adopt(const std::filesystem::path &file);

    [[nodiscard]] const std::filesystem::path &dir() const noexcept { return dir_; }
    [[nodiscard]] const std::string &manifest_hash() const noexcept { return hash_; }
    [[nodiscard]] const std::vector<std::filesystem::path> &written() const noexcept {
        return *written_;
    }
    /// Writer for a subdirectory sharing the hash and the file list.
    [[nodiscard]] OutputWriter sub(const std::filesystem::path &relative) const;

  private:
    std::filesystem::path prepare(const std::filesystem::path &relative);

    std::filesystem::path dir_;
    std::string hash_;
    std::shared_ptr<std::vector<std::filesystem::path>> written_;
};

struct CommandResult {
    std::vector<std::filesystem::path> files;
    /// The command's main report, also written to disk.
    nlohmann::json summary;
};

enum class Command { build, run, mitigate, train, eval, energy, powerlog, repro };

[[nodiscard]] Command parse_command(const std::string &name);
[[nodiscard]] std::string to_string(Command command);
/// Commands whose results depend on random draws.
[[nodiscard]] bool is_stochastic(Command command);

/// Logical and variant circuits for the first `run.limit` test samples, plus
/// gate counts and an MPS cost report.
CommandResult cmd_build(const ExperimentManifest &manifest);
/// Variant histogram bundle for the same samples.
CommandResult cmd_run(const ExperimentManifest &manifest);
/// Aggregated distributions and logits from a bundle (`bundle`, defaulting to
/// `<output>/bundle`).
CommandResult cmd_mitigate(const ExperimentManifest &manifest);
CommandResult cmd_train(const ExperimentManifest &manifest);
/// Accuracy report for the model at `model` on the test split.
CommandResult cmd_eval(const ExperimentManifest &manifest);
/// Scaling table, fits and crossover under the energy model.
CommandResult cmd_energy(const ExperimentManifest &manifest);
CommandResult cmd_powerlog(const ExperimentManifest &manifest);
/// Every stage above in sequence plus a list of checks, each in its own
/// subdirectory.
CommandResult cmd_repro(const ExperimentManifest &manifest);

CommandResult run_command(Command command, const ExperimentManifest &manifest);

} // namespace qets::cli
