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

// qets: command-line front end.
//
//   qets <command> [--manifest FILE] [--seed N] [--output DIR] [--set key.path=value]...
//
// Commands: build, run, mitigate, train, eval, energy, powerlog, repro.
// Exit codes: 0 success, 2 validation error, 3 data-quality error,
// 4 capacity error, 1 anything else.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cli/commands.hpp"
#include "cli/manifest.hpp"
#include "qets/core/error.hpp"
#include "qets/energy/energy.hpp"

namespace fs = std::filesystem;
using namespace qets;

namespace {

struct Flags {
    std::string command;
    std::optional<std::string> manifest;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output;
    std::optional<std::string> backend;
    std::optional<std::string> model;
    std::optional<std::string> bundle;
    std::optional<std::string> trace;
    std::optional<std::string> jobs;
    std::vector<std::string> overrides;
    bool quiet = false;
};

std::string absolute(const std::string &path) {
    return fs::absolute(path).lexically_normal().string();
}

cli::ExperimentManifest load(const Flags &flags) {
    nlohmann::json raw = nlohmann::json::object();
    fs::path base = fs::current_path();
    if (flags.manifest) {
        raw = cli::read_manifest_json(*flags.manifest);
        base = fs::absolute(*flags.manifest).parent_path();
    }
    for (const auto &o : flags.overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) {
            throw ValidationError(fmt::format("--set '{}': expected key.path=value", o));
        }
        cli::apply_override(raw, o.substr(0, eq), o.substr(eq + 1));
    }
    if (flags.seed) {
        raw["seed"] = *flags.seed;
    }
    if (flags.backend) {
        raw["backend"] = *flags.backend;
    }
    if (flags.output) {
        raw["output"] = absolute(*flags.output);
    }
    if (flags.model) {
        raw["model"] = absolute(*flags.model);
    }
    if (flags.bundle) {
        raw["bundle"] = absolute(*flags.bundle);
    }
    if (flags.trace) {
        raw["powerlog"]["trace"] = absolute(*flags.trace);
    }
    if (flags.jobs) {
        raw["powerlog"]["jobs"] = absolute(*flags.jobs);
    }
    return cli::parse_manifest(raw, base);
}

void print_parameter_table(const energy::EnergyModelParams &params) {
    std::cout << "Energy model parameters\n";
    for (const auto &row : energy::parameter_table(params)) {
        std::cout << fmt::format("  {:<6} {:<26} {}\n", row.symbol, row.description, row.value);
    }
    std::cout << "Note: the 34-qubit break-even reference comes from measurements on specific "
                 "hardware and is not a prediction of this model.\n";
}

int execute(const Flags &flags) {
    const auto command = cli::parse_command(flags.command);
    if (cli::is_stochastic(command) && !flags.seed) {
        throw ValidationError(fmt::format("{}: --seed is required", flags.command));
    }
    const auto manifest = load(flags);
    if (command == cli::Command::energy && !flags.quiet) {
        print_parameter_table(manifest.energy.params);
    }
    const auto result = cli::run_command(command, manifest);
    if (!flags.quiet) {
        std::cout << result.summary.dump(2) << '\n';
    }
    std::cerr << fmt::format("{}: wrote {} files under {} (manifest sha256 {})\n", flags.command,
                             result.files.size(), manifest.output.string(), manifest.hash());
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Desk-scale hybrid quantum classifier and energy-to-solution toolkit"};
    Flags flags;
    app.add_option("command", flags.command, "build|run|mitigate|train|eval|energy|powerlog|repro")
        ->required()
        ->check(CLI::IsMember(
            {"build", "run", "mitigate", "train", "eval", "energy", "powerlog", "repro"}));
    app.add_option("-m,--manifest", flags.manifest, "Experiment manifest (JSON)");
    app.add_option("--seed", flags.seed, "Master seed, required by stochastic commands");
    app.add_option("-o,--output", flags.output, "Output directory (default: out)");
    app.add_option("--backend", flags.backend, "exact | noisy | mps");
    app.add_option("--model", flags.model, "Trained model manifest");
    app.add_option("--bundle", flags.bundle, "Variant histogram bundle directory");
    app.add_option("--trace", flags.trace, "Power trace CSV");
    app.add_option("--jobs", flags.jobs, "Job list CSV");
    app.add_option("--set", flags.overrides, "Manifest override key.path=value (repeatable)");
    app.add_flag("-q,--quiet", flags.quiet, "Do not print the summary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 2;
    }

    try {
        return execute(flags);
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.category());
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
