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
#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "qets/core/diagnostics.hpp"
#include "qets/core/error.hpp"
#include "qets/core/random.hpp"
#include "qets/mitigation/bundle.hpp"
#include "qets/mitigation/logits.hpp"
#include "qets/mitigation/variants.hpp"
#include "qets/mps/mps.hpp"
#include "qets/pipeline/metrics.hpp"
#include "qets/pipeline/serialization.hpp"
#include "qets/qsim/statevector.hpp"

namespace qets::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Stream tags under the manifest seed. Changing one changes every result
// drawn from that stream.
namespace tag {
constexpr std::uint64_t data = 1;
constexpr std::uint64_t split = 2;
constexpr std::uint64_t model = 3;
constexpr std::uint64_t train = 4;
constexpr std::uint64_t variants = 5;
constexpr std::uint64_t shots = 6;
constexpr std::uint64_t eval = 7;
constexpr std::uint64_t logistic = 8;
constexpr std::uint64_t trace = 9;
} // namespace tag

std::string num(double x) {
    return std::isnan(x) ? std::string("nan") : fmt::format("{}", x);
}

json num_json(double x) {
    return std::isfinite(x) ? json(x) : json(nullptr);
}

/// Collects library warnings for the report and echoes them to stderr.
class WarningLog {
  public:
    WarningLog()
        : sink_([this](const std::string &message) {
              messages_.push_back(message);
              std::cerr << "warning: " << message << '\n';
          }) {}

    [[nodiscard]] const std::vector<std::string> &messages() const noexcept {
        return messages_;
    }

  private:
    std::vector<std::string> messages_;
    ScopedWarningSink sink_;
};

template <typename F> auto keyed(const std::string &key, F &&fn) {
    try {
        return fn();
    } catch (const ValidationError &e) {
        throw ValidationError(fmt::format("manifest key '{}': {}", key, e.what()));
    }
}

std::string aggregation_name(Aggregation a) {
    switch (a) {
    case Aggregation::mean:
        return "mean";
    case Aggregation::dnl:
        return "dnl";
    case Aggregation::grid:
        return "grid";
    }
    return "mean";
}

struct Prepared {
    pipeline::DatasetSplit split;
    pipeline::Model model;
};

pipeline::EmbeddingDataset load_data(const ExperimentManifest &m, std::uint64_t seed) {
    const auto &d = m.data;
    if (d.embeddings) {
        std::ifstream in(*d.embeddings);
        if (!in) {
            throw ValidationError(fmt::format("manifest key 'data.embeddings': cannot open {}",
                                              d.embeddings->string()));
        }
        return keyed("data.embeddings", [&] { return pipeline::read_embeddings(in); });
    }
    return pipeline::synthetic_clusters(d.synthetic_per_label, d.synthetic_dimension,
                                        d.synthetic_separation, d.synthetic_noise,
                                        derive_seed(seed, tag::data));
}

pipeline::Model load_model(const ExperimentManifest &m, std::size_t dimension) {
    std::ifstream in(*m.model);
    if (!in) {
        throw ValidationError(
            fmt::format("manifest key 'model': cannot open {}", m.model->string()));
    }
    const json j = keyed("model", [&] {
        try {
            return json::parse(in);
        } catch (const json::parse_error &e) {
            throw ValidationError(e.what());
        }
    });
    auto model = keyed("model", [&] { return pipeline::model_from_json(j); });
    const auto &c = model.config;
    if (c.Q != m.ansatz.Q || c.R != m.ansatz.R || c.M != m.ansatz.M || c.N != m.ansatz.N) {
        throw ValidationError(fmt::format(
            "manifest key 'ansatz': the model at {} was built for Q={} R={} M={} N={}",
            m.model->string(), c.Q, c.R, c.M, c.N));
    }
    if (model.encoder.inputs != dimension) {
        throw ValidationError(
            fmt::format("manifest key 'model': encoder takes {} inputs, embeddings have {}",
                        model.encoder.inputs, dimension));
    }
    return model;
}

Prepared prepare(const ExperimentManifest &m, std::uint64_t seed) {
    const auto data = load_data(m, seed);
    auto split = keyed("data.per_label_train", [&] {
        return pipeline::split_dataset(data,
                                       {m.data.per_label_train, derive_seed(seed, tag::split)});
    });
    if (split.test.empty()) {
        throw ValidationError("manifest key 'data.per_label_train': no samples left for testing");
    }
    auto model = m.model ? load_model(m, data.dimension())
                         : pipeline::Model::random(m.ansatz, data.dimension(),
                                                   derive_seed(seed, tag::model));
    return {std::move(split), std::move(model)};
}

std::vector<std::size_t> leading(std::size_t available, std::size_t limit) {
    std::vector<std::size_t> idx(limit == 0 ? available : std::min(available, limit));
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return idx;
}

std::string file_id(const std::string &sample_id) {
    return "sample" + sample_id;
}

// ----------------------------------------------------------------- build --

json stage_build(const ExperimentManifest &m, std::uint64_t seed, const Prepared &p,
                 OutputWriter &out) {
    const auto &test = p.split.test;
    const auto picked = leading(test.size(), m.run_limit);
    const auto counts = ansatz::count_gates(p.model.config);
    json samples = json::array();
    std::vector<mitigation::Permutation> permutations;
    for (const std::size_t i : picked) {
        const auto &s = test[i];
        const auto circuit = pipeline::model_circuit(p.model, s.embedding);
        std::ostringstream logical;
        qsim::write_circuit(logical, circuit);
        out.text(fs::path("circuits") / (file_id(s.id) + ".circuit"), logical.str());

        const auto variants = mitigation::generate_variants(circuit, m.mitigation.variants,
                                                            derive_seed(seed, tag::variants));
        for (std::size_t k = 0; k < variants.size(); ++k) {
            std::ostringstream body;
            qsim::write_circuit(body, variants.circuits[k]);
            out.text(fs::path("circuits") / fmt::format("{}_variant{}.circuit", file_id(s.id), k),
                     body.str());
        }
        permutations = variants.permutations;
        samples.push_back({{"id", s.id}, {"label", s.label}});
    }

    const auto cost = mps::mps_cost(p.model.config.Q, m.chi_max,
                                    counts.single_qubit + counts.two_qubit);
    json summary = {
        {"command", "build"},
        {"qubits", p.model.config.Q},
        {"gate_counts",
         {{"single_qubit", counts.single_qubit},
          {"two_qubit", counts.two_qubit},
          {"layers", ansatz::layer_count(p.model.config)}}},
        {"samples", samples},
        {"variants", m.mitigation.variants},
        {"permutations", permutations},
        {"mps_cost",
         {{"chi", cost.chi},
          {"gate_count", cost.gate_count},
          {"estimated_flops", cost.estimated_flops},
          {"scaling_class", cost.scaling_class}}},
    };
    out.json("build.json", summary);
    return summary;
}

// ------------------------------------------------------------------- run --

void require_shot_backend(const ExperimentManifest &m) {
    if (m.backend == pipeline::Backend::mps) {
        throw ValidationError(
            "manifest key 'backend': 'mps' yields amplitudes, not shots; use exact or noisy");
    }
}

json stage_run(const ExperimentManifest &m, std::uint64_t seed, const Prepared &p,
               OutputWriter &out) {
    require_shot_backend(m);
    const auto &test = p.split.test;
    const auto picked = leading(test.size(), m.run_limit);
    const std::uint64_t total = m.total_shots();
    const auto per_variant = ansatz::split_shots(total, m.mitigation.variants);
    const auto noise =
        m.backend == pipeline::Backend::noisy ? m.noise : qsim::NoiseParams::none();
    const std::uint64_t shot_stream = derive_seed(seed, tag::shots);

    mitigation::VariantBundle bundle;
    bundle.qubit_count = p.model.config.Q;
    bundle.manifest_hash = out.manifest_hash();
    for (const std::size_t i : picked) {
        const auto &s = test[i];
        const auto circuit = pipeline::model_circuit(p.model, s.embedding);
        const auto variants = mitigation::generate_variants(circuit, m.mitigation.variants,
                                                            derive_seed(seed, tag::variants));
        bundle.permutations = variants.permutations;
        std::vector<qsim::Histogram> hists;
        for (std::size_t k = 0; k < variants.size(); ++k) {
            const std::uint64_t stream = derive_seed(shot_stream, i * variants.size() + k);
            hists.push_back(qsim::run_noisy(variants.circuits[k], noise, per_variant[k], stream));
        }
        bundle.sample_ids.push_back(s.id);
        bundle.labels[s.id] = s.label;
        bundle.histograms.push_back(std::move(hists));
    }

    const fs::path dir = out.dir() / "bundle";
    mitigation::write_bundle(dir, bundle);
    out.adopt(dir / "bundle.json");
    for (const auto &id : bundle.sample_ids) {
        for (std::size_t k = 0; k < bundle.permutations.size(); ++k) {
            out.adopt(dir / mitigation::histogram_file_name(id, k));
        }
    }

    json summary = {
        {"command", "run"},
        {"backend", pipeline::to_string(m.backend)},
        {"samples", bundle.sample_ids},
        {"variants", m.mitigation.variants},
        {"shots_total", total},
        {"shots_per_variant", per_variant},
        {"noise", {{"p1", noise.p1}, {"p2", noise.p2}, {"p_ro", noise.p_ro}}},
    };
    out.json("run.json", summary);
    return summary;
}

// -------------------------------------------------------------- mitigate --

json stage_mitigate(const ExperimentManifest &m, const fs::path &bundle_dir, OutputWriter &out) {
    if (!fs::exists(bundle_dir / "bundle.json")) {
        throw ValidationError(fmt::format("manifest key 'bundle': no bundle.json in {}",
                                          bundle_dir.string()));
    }
    const auto bundle = keyed("bundle", [&] { return mitigation::read_bundle(bundle_dir); });
    const std::size_t variants = bundle.permutations.size();
    const auto &spec = m.mitigation;
    if (spec.aggregation == Aggregation::dnl) {
        keyed("mitigation.t", [&] { spec.filter.validate(variants); });
    }
    const bool labelled = std::all_of(bundle.sample_ids.begin(), bundle.sample_ids.end(),
                                      [&](const auto &id) { return bundle.labels.count(id); });
    if (spec.aggregation == Aggregation::grid && !labelled) {
        throw ValidationError(
            "manifest key 'mitigation.aggregation': grid search needs a label for every sample");
    }

    std::vector<std::vector<qsim::Histogram>> logical;
    for (std::size_t i = 0; i < bundle.sample_ids.size(); ++i) {
        logical.push_back(mitigation::remapped(bundle, i));
    }
    std::vector<int> labels;
    for (const auto &id : bundle.sample_ids) {
        labels.push_back(labelled ? bundle.labels.at(id) : 0);
    }

    mitigation::FilterParams filter = spec.filter;
    json grid = nullptr;
    if (spec.aggregation == Aggregation::grid) {
        const auto result = mitigation::grid_search_filter(logical, spec.grid_p, spec.grid_t,
                                                           labels, pipeline::target_qubit);
        filter.p = result.best.p;
        filter.t = result.best.t;
        grid = json::array();
        for (const auto &g : result.grid) {
            grid.push_back({{"p", g.p}, {"t", g.t}, {"accuracy", g.accuracy}});
        }
    }

    mitigation::LogitSet raw;
    for (std::size_t i = 0; i < logical.size(); ++i) {
        const auto dist = spec.aggregation == Aggregation::mean
                              ? mitigation::aggregate_mean(logical[i])
                              : mitigation::dnl_filter(logical[i], filter);
        std::uint64_t shots = 0;
        for (const auto &h : logical[i]) {
            shots += h.total_shots();
        }
        std::ostringstream body;
        qsim::write_distribution(body, dist, shots);
        out.text(fs::path("distributions") / (file_id(bundle.sample_ids[i]) + ".dist"),
                 body.str());
        raw.logits.push_back(qsim::z_from_distribution(dist, pipeline::target_qubit));
        raw.sample_ids.push_back(bundle.sample_ids[i]);
    }
    const auto corrected = mitigation::bias_correct(raw);

    std::string csv = "sample_id,label,raw_logit,corrected_logit,predicted\n";
    std::vector<int> predicted;
    for (std::size_t i = 0; i < raw.logits.size(); ++i) {
        predicted.push_back(mitigation::classify(corrected.logits[i]));
        csv += fmt::format("{},{},{},{},{}\n", raw.sample_ids[i],
                           labelled ? std::to_string(labels[i]) : std::string(),
                           num(raw.logits[i]), num(corrected.logits[i]), predicted.back());
    }
    out.text("logits.csv", csv);

    json summary = {
        {"command", "mitigate"},
        {"aggregation", aggregation_name(spec.aggregation)},
        {"p", filter.p},
        {"t", filter.t},
        {"variants", variants},
        {"samples", bundle.sample_ids.size()},
        {"bundle_manifest_sha256", bundle.manifest_hash},
        {"accuracy", nullptr},
    };
    if (labelled) {
        summary["accuracy"] = pipeline::evaluate(predicted, labels).accuracy;
    }
    if (!grid.is_null()) {
        summary["grid"] = grid;
    }
    out.json("mitigation.json", summary);
    return summary;
}

// ----------------------------------------------------------------- train --

json stage_train(const ExperimentManifest &m, std::uint64_t seed, Prepared &p,
                 OutputWriter &out) {
    pipeline::TrainOptions options;
    options.epochs = m.train.epochs;
    options.learning_rate = m.train.learning_rate;
    options.batch_size = m.train.batch_size;
    options.stop_accuracy = m.train.stop_accuracy;
    options.seed = derive_seed(seed, tag::train);
    auto result = pipeline::train(p.model, p.split.train, options);
    p.model = result.model;

    json model = pipeline::model_to_json(result.model, {{"seed", seed}});
    out.json("model.json", model);

    std::string csv = "epoch,loss,train_accuracy\n";
    for (std::size_t e = 0; e < result.loss_curve.size(); ++e) {
        csv += fmt::format("{},{},{}\n", e, num(result.loss_curve[e]),
                           num(result.accuracy_curve[e]));
    }
    out.text("training.csv", csv);

    json summary = {
        {"command", "train"},
        {"epochs_run", result.epochs_run},
        {"final_loss", num_json(result.loss_curve.back())},
        {"final_train_accuracy", num_json(result.accuracy_curve.back())},
        {"train_samples", p.split.train.size()},
        {"test_samples", p.split.test.size()},
        {"parameters", result.model.params.size()},
    };
    out.json("train.json", summary);
    return summary;
}

// ------------------------------------------------------------------ eval --

json stage_eval(const ExperimentManifest &m, std::uint64_t seed, const Prepared &p,
                OutputWriter &out) {
    if (m.mitigation.aggregation == Aggregation::grid) {
        throw ValidationError("manifest key 'mitigation.aggregation': eval supports mean or "
                              "dnl; grid search runs in mitigate");
    }
    const auto &test = p.split.test;
    const auto picked = leading(test.size(), m.eval.limit);

    pipeline::InferenceOptions options;
    options.backend = m.backend;
    options.noise = m.noise;
    options.shots = m.total_shots();
    options.variants = m.mitigation.variants;
    options.use_filter = m.mitigation.aggregation == Aggregation::dnl;
    options.filter = m.mitigation.filter;
    options.chi_max = m.chi_max;

    mitigation::LogitSet raw;
    std::vector<int> labels;
    for (const std::size_t i : picked) {
        options.seed = derive_seed(derive_seed(seed, tag::eval), i);
        const auto prediction = pipeline::predict(p.model, test[i].embedding, options);
        raw.logits.push_back(prediction.logit);
        raw.sample_ids.push_back(test[i].id);
        labels.push_back(test[i].label);
    }
    const auto corrected = mitigation::bias_correct(raw);
    std::vector<int> predicted;
    std::string csv = "sample_id,label,raw_logit,corrected_logit,predicted\n";
    for (std::size_t i = 0; i < raw.logits.size(); ++i) {
        predicted.push_back(mitigation::classify(corrected.logits[i]));
        csv += fmt::format("{},{},{},{},{}\n", raw.sample_ids[i], labels[i], num(raw.logits[i]),
                           num(corrected.logits[i]), predicted.back());
    }
    out.text("predictions.csv", csv);

    const auto score = pipeline::evaluate(predicted, labels);
    const double corrected_mean =
        std::accumulate(corrected.logits.begin(), corrected.logits.end(), 0.0) /
        static_cast<double>(corrected.logits.size());
    json summary = {
        {"command", "eval"},
        {"backend", pipeline::to_string(m.backend)},
        {"aggregation", aggregation_name(m.mitigation.aggregation)},
        {"accuracy", score.accuracy},
        {"standard_error", score.standard_error},
        {"correct", score.correct},
        {"total", score.total},
        {"confusion", score.confusion},
        {"corrected_logit_mean", corrected_mean},
        {"logistic_baseline_accuracy", nullptr},
        {"reference",
         {{"svc_accuracy", pipeline::reference::svc_accuracy},
          {"logistic_accuracy", pipeline::reference::logistic_accuracy},
          {"note", "hardware-run baselines on the full sentiment split; not computed here"}}},
    };
    if (m.eval.logistic_baseline) {
        pipeline::LogisticOptions lo;
        lo.seed = derive_seed(seed, tag::logistic);
        summary["logistic_baseline_accuracy"] =
            pipeline::logistic_baseline(p.split.train, p.split.test, lo);
    }
    out.json("eval.json", summary);
    return summary;
}

// ---------------------------------------------------------------- energy --

json fit_json(const energy::ScalingFit &fit) {
    json j = {
        {"kind", energy::to_string(fit.kind)},
        {"a", fit.a},
        {"b", fit.b},
        {"r_squared", num_json(fit.r_squared)},
        {"q_min", fit.q_min},
        {"q_max", fit.q_max},
        {"points", fit.n},
    };
    if (fit.kind == energy::FitKind::exponential) {
        j["amplitude"] = fit.amplitude();
        j["base"] = fit.base();
        j["r_squared_linear_space"] = num_json(fit.r_squared_linear_space);
    }
    return j;
}

json stage_energy(const ExperimentManifest &m, OutputWriter &out) {
    const auto &e = m.energy;
    if (e.qubits.size() < 2) {
        throw ValidationError("manifest key 'energy.qubits': the fits need at least 2 entries");
    }
    for (const std::size_t q : e.qubits) {
        if (q > energy::gpu_log_space_threshold) {
            throw ValidationError(fmt::format(
                "manifest key 'energy.qubits': {} exceeds the fit range (<= {})", q,
                energy::gpu_log_space_threshold));
        }
    }
    auto qubits = e.qubits;
    std::sort(qubits.begin(), qubits.end());
    qubits.erase(std::unique(qubits.begin(), qubits.end()), qubits.end());

    const auto rows = energy::scaling_table(qubits, m.ansatz, e.params, e.variant_multiplier);
    std::string csv =
        "q,single_qubit,two_qubit,e_qpu_kj,e_gpu_kj,e_gpu_log10_kj,depth,chi,mps_flops\n";
    std::vector<energy::Point> qpu;
    std::vector<energy::Point> gpu;
    for (const auto &r : rows) {
        csv += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.q, r.single_qubit, r.two_qubit,
                           num(r.e_qpu_kj), num(r.e_gpu_kj.value()),
                           num(r.e_gpu_kj.log() / std::log(10.0)), r.depth, r.chi,
                           num(r.mps_flops));
        qpu.push_back({static_cast<double>(r.q), r.e_qpu_kj});
        gpu.push_back({static_cast<double>(r.q), r.e_gpu_kj.value()});
    }
    out.text("energy_table.csv", csv);

    std::string params = "symbol,description,value\n";
    for (const auto &row : energy::parameter_table(e.params)) {
        params += fmt::format("{},{},{}\n", row.symbol, row.description, row.value);
    }
    out.text("energy_params.csv", params);

    const auto linear = energy::fit_linear(qpu);
    const auto exponential =
        keyed("energy.fit_min_q", [&] { return energy::fit_exponential(gpu, e.fit_min_q); });
    const auto cross = energy::crossover(linear, exponential, e.ceiling);

    json second = json::array();
    if (rows.size() >= 3) {
        bool even = true;
        for (std::size_t i = 2; i < rows.size(); ++i) {
            even = even && rows[i].q - rows[i - 1].q == rows[i - 1].q - rows[i - 2].q;
        }
        if (even) {
            for (const double d : energy::e_qpu_second_differences(rows, e.params)) {
                second.push_back(d);
            }
        }
    }

    json summary = {
        {"command", "energy"},
        {"qubits", qubits},
        {"variant_multiplier", e.variant_multiplier},
        {"linear_fit_qpu", fit_json(linear)},
        {"exponential_fit_gpu", fit_json(exponential)},
        {"crossover_qubits", cross ? json(*cross) : json(nullptr)},
        {"crossover_ceiling", e.ceiling},
        {"e_qpu_second_differences", second},
        {"reference_break_even",
         {{"qubits", pipeline::reference::measured_break_even_qubits},
          {"note", "obtained from measured power data on one specific trapped-ion system "
                   "and GPU; hardware-specific and not reproduced by this model"}}},
    };
    out.json("energy_fits.json", summary);
    return summary;
}

// -------------------------------------------------------------- powerlog --

json stage_powerlog(const ExperimentManifest &m, const fs::path &trace_path,
                    const fs::path &jobs_path, OutputWriter &out) {
    const auto &spec = m.powerlog;
    const auto trace = keyed("powerlog.trace", [&] { return powerlog::read_trace(trace_path); });
    const auto jobs = keyed("powerlog.jobs", [&] { return powerlog::read_jobs(jobs_path); });
    if (!trace.has_component(spec.component)) {
        throw ValidationError(fmt::format(
            "manifest key 'powerlog.component': the trace has no component '{}'",
            spec.component));
    }
    WarningLog warnings;
    const auto rows = powerlog::job_energy_table(trace, jobs, spec.integration);

    std::string csv = "job_id,component,qubits,shots,variants,duration_s,energy_kj,average_kw\n";
    json table = json::array();
    for (const auto &r : rows) {
        csv += fmt::format("{},{},{},{},{},{},{},{}\n", r.job_id, r.component, r.qubits, r.shots,
                           r.variants, num(r.duration_s), num(r.energy_kj), num(r.average_kw));
        table.push_back({{"job_id", r.job_id},
                         {"component", r.component},
                         {"qubits", r.qubits},
                         {"shots", r.shots},
                         {"variants", r.variants},
                         {"duration_s", r.duration_s},
                         {"energy_kj", r.energy_kj},
                         {"average_kw", r.average_kw}});
    }
    out.text("job_energy.csv", csv);

    json consistency = json::array();
    for (const auto &job : jobs) {
        if (const auto check = powerlog::component_consistency(trace, job, spec.integration)) {
            consistency.push_back({{"job_id", job.job_id},
                                   {"total_kj", check->total_kj},
                                   {"component_sum_kj", check->component_sum_kj},
                                   {"consistent", check->consistent}});
        }
    }

    std::string series = "job_id,series,timestamp,watts,normalized,display\n";
    std::vector<double> average_kw;
    std::vector<std::size_t> qubits;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        const auto &job = jobs[j];
        average_kw.push_back(
            powerlog::average_power(trace, job, spec.component, spec.integration));
        qubits.push_back(job.qubits);
        std::vector<powerlog::PowerTrace::Reading> window;
        for (const auto &r : trace.series(spec.component)) {
            const double t = r.timestamp;
            if (t >= job.start_ts + spec.integration.clock_offset &&
                t <= job.end_ts + spec.integration.clock_offset) {
                window.push_back(r);
            }
        }
        std::vector<double> watts;
        for (const auto &r : window) {
            watts.push_back(r.watts);
        }
        try {
            const auto normalized = powerlog::normalize_series(watts);
            const auto shifted = powerlog::display_offset(normalized, j, spec.spacing);
            for (std::size_t i = 0; i < window.size(); ++i) {
                series += fmt::format("{},{},{},{},{},{}\n", job.job_id, j,
                                      num(window[i].timestamp), num(window[i].watts),
                                      num(normalized[i]), num(shifted[i]));
            }
        } catch (const Error &e) {
            warn(fmt::format("job '{}': no normalised series ({})", job.job_id, e.what()));
        }
    }
    out.text("power_series.csv", series);

    json correlation = nullptr;
    if (jobs.size() >= 3) {
        try {
            correlation = powerlog::power_qubit_correlation(average_kw, qubits);
        } catch (const Error &e) {
            warn(fmt::format("no power/qubit correlation: {}", e.what()));
        }
    }
    json fit = nullptr;
    const auto points = powerlog::mean_energy_by_qubits(rows, spec.component);
    if (points.size() >= 2) {
        fit = fit_json(energy::fit_linear(points));
    }

    json summary = {
        {"command", "powerlog"},
        {"jobs", table},
        {"consistency", consistency},
        {"component", spec.component},
        {"power_qubit_correlation", correlation},
        {"linear_fit", fit},
        {"warnings", warnings.messages()},
    };
    out.json("job_energy.json", summary);
    return summary;
}

/// A trace and job list whose per-job energy follows the QPU model: each job
/// runs for E_qpu / P_qpu seconds while the device draws about P_qpu, split
/// over three components plus their total, sampled once per second with 1%
/// noise.
std::pair<fs::path, fs::path> synthetic_trace(const ExperimentManifest &m, std::uint64_t seed,
                                              OutputWriter &out) {
    const auto &params = m.energy.params;
    const std::vector<std::pair<std::string, double>> shares{
        {"cooling", 0.4}, {"ion_trap", 0.5}, {"peripherals", 0.1}};
    Rng rng(derive_seed(seed, tag::trace));

    std::vector<std::size_t> qubits{10, 12, 14, 16, 18};
    std::string jobs = "job_id,start_ts,end_ts,qubits,shots,variants\n";
    struct Window {
        double start;
        double end;
    };
    std::vector<Window> windows;
    double t = 1000.0;
    for (const std::size_t q : qubits) {
        auto c = m.ansatz;
        c.Q = q;
        const auto counts = ansatz::count_gates(c);
        const double seconds =
            std::round(energy::e_qpu(params, counts.single_qubit, counts.two_qubit) /
                       params.P_qpu);
        windows.push_back({t, t + seconds});
        jobs += fmt::format("job_q{},{},{},{},{},{}\n", q, t, t + seconds, q, params.S, 1);
        t += seconds + 5.0;
    }

    std::string trace = "timestamp,component,watts\n";
    for (double s = 995.0; s <= t; s += 1.0) {
        double total = 0.0;
        for (const auto &[name, share] : shares) {
            const double w = 1000.0 * params.P_qpu * share * (1.0 + 0.01 * normal(rng));
            total += w;
            trace += fmt::format("{},{},{}\n", s, name, num(w));
        }
        trace += fmt::format("{},total,{}\n", s, num(total));
    }
    return {out.text("trace.csv", trace), out.text("jobs.csv", jobs)};
}

json check(const std::string &name, json value, json expected, bool pass) {
    return {{"name", name}, {"value", value}, {"expected", expected}, {"pass", pass}};
}

} // namespace

// ---------------------------------------------------------------- writer --

OutputWriter::OutputWriter(fs::path dir, std::string manifest_hash)
    : dir_(std::move(dir)), hash_(std::move(manifest_hash)),
      written_(std::make_shared<std::vector<fs::path>>()) {}

fs::path OutputWriter::prepare(const fs::path &relative) {
    const fs::path path = dir_ / relative;
    fs::create_directories(path.parent_path());
    written_->push_back(path);
    return path;
}

fs::path OutputWriter::text(const fs::path &relative, const std::string &body) {
    const fs::path path = prepare(relative);
    std::ofstream f(path, std::ios::binary);
    f << "# manifest_sha256 " << hash_ << '\n' << body;
    if (!f) {
        throw std::runtime_error(fmt::format("cannot write {}", path.string()));
    }
    return path;
}

fs::path OutputWriter::json(const fs::path &relative, nlohmann::json document) {
    const fs::path path = prepare(relative);
    document["manifest_sha256"] = hash_;
    std::ofstream f(path, std::ios::binary);
    f << document.dump(2) << '\n';
    if (!f) {
        throw std::runtime_error(fmt::format("cannot write {}", path.string()));
    }
    return path;
}

void OutputWriter::adopt(const fs::path &file) {
    written_->push_back(file);
}

OutputWriter OutputWriter::sub(const fs::path &relative) const {
    OutputWriter w(dir_ / relative, hash_);
    w.written_ = written_;
    return w;
}

// -------------------------------------------------------------- commands --

Command parse_command(const std::string &name) {
    static const std::vector<std::pair<std::string, Command>> names{
        {"build", Command::build},       {"run", Command::run},
        {"mitigate", Command::mitigate}, {"train", Command::train},
        {"eval", Command::eval},         {"energy", Command::energy},
        {"powerlog", Command::powerlog}, {"repro", Command::repro}};
    for (const auto &[n, c] : names) {
        if (n == name) {
            return c;
        }
    }
    throw ValidationError(fmt::format("unknown command '{}'", name));
}

std::string to_string(Command command) {
    switch (command) {
    case Command::build:
        return "build";
    case Command::run:
        return "run";
    case Command::mitigate:
        return "mitigate";
    case Command::train:
        return "train";
    case Command::eval:
        return "eval";
    case Command::energy:
        return "energy";
    case Command::powerlog:
        return "powerlog";
    case Command::repro:
        return "repro";
    }
    return "unknown";
}

bool is_stochastic(Command command) {
    switch (command) {
    case Command::mitigate:
    case Command::energy:
    case Command::powerlog:
        return false;
    default:
        return true;
    }
}

CommandResult cmd_build(const ExperimentManifest &m) {
    const auto seed = m.require_seed();
    OutputWriter out(m.output, m.hash());
    const auto p = prepare(m, seed);
    auto summary = stage_build(m, seed, p, out);
    return {out.written(), summary};
}

CommandResult cmd_run(const ExperimentManifest &m) {
    const auto seed = m.require_seed();
    require_shot_backend(m);
    OutputWriter out(m.output, m.hash());
    const auto p = prepare(m, seed);
    auto summary = stage_run(m, seed, p, out);
    return {out.written(), summary};
}

CommandResult cmd_mitigate(const ExperimentManifest &m) {
    OutputWriter out(m.output, m.hash());
    auto summary = stage_mitigate(m, m.bundle.value_or(m.output / "bundle"), out);
    return {out.written(), summary};
}

CommandResult cmd_train(const ExperimentManifest &m) {
    const auto seed = m.require_seed();
    OutputWriter out(m.output, m.hash());
    auto p = prepare(m, seed);
    auto summary = stage_train(m, seed, p, out);
    return {out.written(), summary};
}

CommandResult cmd_eval(const ExperimentManifest &m) {
    const auto seed = m.require_seed();
    if (!m.model) {
        throw ValidationError("manifest key 'model': eval needs a trained model manifest");
    }
    if (m.mitigation.aggregation == Aggregation::grid) {
        throw ValidationError("manifest key 'mitigation.aggregation': eval supports mean or "
                              "dnl; grid search runs in mitigate");
    }
    OutputWriter out(m.output, m.hash());
    const auto p = prepare(m, seed);
    auto summary = stage_eval(m, seed, p, out);
    return {out.written(), summary};
}

CommandResult cmd_energy(const ExperimentManifest &m) {
    OutputWriter out(m.output, m.hash());
    auto summary = stage_energy(m, out);
    return {out.written(), summary};
}

CommandResult cmd_powerlog(const ExperimentManifest &m) {
    if (!m.powerlog.trace) {
        throw ValidationError("manifest key 'powerlog.trace': required by powerlog");
    }
    if (!m.powerlog.jobs) {
        throw ValidationError("manifest key 'powerlog.jobs': required by powerlog");
    }
    OutputWriter out(m.output, m.hash());
    auto summary = stage_powerlog(m, *m.powerlog.trace, *m.powerlog.jobs, out);
    return {out.written(), summary};
}

CommandResult cmd_repro(const ExperimentManifest &m) {
    const auto seed = m.require_seed();
    require_shot_backend(m);
    if (m.mitigation.aggregation == Aggregation::grid) {
        throw ValidationError("manifest key 'mitigation.aggregation': repro supports mean or "
                              "dnl; grid search runs in mitigate");
    }
    if (m.powerlog.trace.has_value() != m.powerlog.jobs.has_value()) {
        throw ValidationError(
            "manifest key 'powerlog': give both trace and jobs, or neither for a synthetic trace");
    }
    OutputWriter out(m.output, m.hash());
    json checks = json::array();

    auto p = prepare(m, seed);
    auto train_out = out.sub("train");
    const auto trained = stage_train(m, seed, p, train_out);

    auto exact_m = m;
    exact_m.backend = pipeline::Backend::exact;
    auto exact_out = out.sub("eval_exact");
    const auto exact = stage_eval(exact_m, seed, p, exact_out);
    auto noisy_m = m;
    noisy_m.backend = pipeline::Backend::noisy;
    auto noisy_out = out.sub("eval_noisy");
    const auto noisy = stage_eval(noisy_m, seed, p, noisy_out);

    auto run_out = out.sub("run");
    stage_run(noisy_m, seed, p, run_out);
    auto mitigate_out = out.sub("mitigate");
    const auto mitigated = stage_mitigate(m, run_out.dir() / "bundle", mitigate_out);

    auto energy_out = out.sub("energy");
    const auto energy_summary = stage_energy(m, energy_out);

    auto power_out = out.sub("powerlog");
    fs::path trace_path;
    fs::path jobs_path;
    if (m.powerlog.trace) {
        trace_path = *m.powerlog.trace;
        jobs_path = *m.powerlog.jobs;
    } else {
        std::tie(trace_path, jobs_path) = synthetic_trace(m, seed, power_out);
    }
    const auto power = stage_powerlog(m, trace_path, jobs_path, power_out);

    // Closed-form and property checks that need no hardware.
    {
        std::vector<std::size_t> two_qubit;
        std::vector<std::uint64_t> shots;
        std::vector<std::uint64_t> per_variant;
        for (const std::size_t q : {10, 12, 14, 16, 18}) {
            auto c = m.ansatz;
            c.Q = q;
            c.M = 2;
            c.R = 4;
            c.N = 1;
            two_qubit.push_back(ansatz::count_gates(c).two_qubit);
            shots.push_back(ansatz::shots_for(q));
            per_variant.push_back(ansatz::split_shots(shots.back(), 25).front());
        }
        const std::vector<std::size_t> tq_ref{35, 42, 49, 56, 63};
        const std::vector<std::uint64_t> shots_ref{500, 1000, 2000, 5000, 20000};
        const std::vector<std::uint64_t> per_ref{20, 40, 80, 200, 800};
        checks.push_back(check("two_qubit_gate_counts", two_qubit, tq_ref, two_qubit == tq_ref));
        checks.push_back(check("shot_schedule", shots, shots_ref, shots == shots_ref));
        checks.push_back(
            check("shots_per_variant", per_variant, per_ref, per_variant == per_ref));
    }
    {
        const auto bundle = mitigation::read_bundle(run_out.dir() / "bundle");
        double worst = 0.0;
        for (std::size_t i = 0; i < bundle.sample_ids.size(); ++i) {
            const auto hists = mitigation::remapped(bundle, i);
            const auto mean = mitigation::aggregate_mean(hists);
            const auto dnl = mitigation::dnl_filter(hists, {0.0, 0});
            for (const auto &[key, value] : mean) {
                const auto it = dnl.find(key);
                worst = std::max(worst, std::abs(value - (it == dnl.end() ? 0.0 : it->second)));
            }
        }
        checks.push_back(check("dnl_p0_t0_equals_mean", worst, 0.0, worst <= 1e-12));
    }
    {
        const double mean = exact["corrected_logit_mean"].get<double>();
        checks.push_back(
            check("bias_corrected_mean_zero", mean, 0.0, std::abs(mean) <= 1e-12));
    }
    {
        bool zero = !energy_summary["e_qpu_second_differences"].empty();
        for (const auto &d : energy_summary["e_qpu_second_differences"]) {
            zero = zero && d.get<double>() == 0.0;
        }
        checks.push_back(check("e_qpu_second_differences_zero",
                               energy_summary["e_qpu_second_differences"], 0.0, zero));
    }
    {
        energy::ScalingFit linear;
        linear.kind = energy::FitKind::linear;
        linear.a = 10.0;
        linear.b = 0.0;
        energy::ScalingFit exponential;
        exponential.kind = energy::FitKind::exponential;
        exponential.a = std::log(2.0);
        exponential.b = std::log(0.01);
        const auto q = energy::crossover(linear, exponential);
        checks.push_back(check("crossover_10q_vs_0.01_2q", q ? json(*q) : json(nullptr),
                               13.7468, q && std::abs(*q - 13.7468) <= 1e-3));
    }
    {
        powerlog::PowerTrace trace;
        for (int s = 0; s <= 10; ++s) {
            trace.add({static_cast<double>(s), "qpu", 5000.0});
        }
        const powerlog::JobRecord job{"constant", 0.0, 10.0, 10, 600, 1};
        const double kj = powerlog::integrate_energy(trace, job, "qpu");
        checks.push_back(check("constant_power_50kj", kj, 50.0, kj == 50.0));
    }
    {
        const double final_acc = trained["final_train_accuracy"].is_number()
                                     ? trained["final_train_accuracy"].get<double>()
                                     : 0.0;
        checks.push_back(check("train_accuracy_at_least_0.95", final_acc, 0.95,
                               final_acc >= 0.95));
        const double gap =
            std::abs(noisy["accuracy"].get<double>() - exact["accuracy"].get<double>());
        checks.push_back(check("noisy_mitigated_within_3_points", gap, 0.03, gap <= 0.03));
    }

    const bool all_pass = std::all_of(checks.begin(), checks.end(),
                                      [](const json &c) { return c["pass"].get<bool>(); });
    json summary = {
        {"command", "repro"},
        {"seed", seed},
        {"train", trained},
        {"eval_exact_accuracy", exact["accuracy"]},
        {"eval_noisy_accuracy", noisy["accuracy"]},
        {"mitigated_bundle_accuracy", mitigated["accuracy"]},
        {"crossover_qubits", energy_summary["crossover_qubits"]},
        {"powerlog_linear_fit", power["linear_fit"]},
        {"checks", checks},
        {"all_checks_pass", all_pass},
    };
    out.json("repro.json", summary);
    return {out.written(), summary};
}

CommandResult run_command(Command command, const ExperimentManifest &m) {
    switch (command) {
    case Command::build:
        return cmd_build(m);
    case Command::run:
        return cmd_run(m);
    case Command::mitigate:
        return cmd_mitigate(m);
    case Command::train:
        return cmd_train(m);
    case Command::eval:
        return cmd_eval(m);
    case Command::energy:
        return cmd_energy(m);
    case Command::powerlog:
        return cmd_powerlog(m);
    case Command::repro:
        return cmd_repro(m);
    }
    throw ValidationError("unknown command");
}

} // namespace qets::cli
