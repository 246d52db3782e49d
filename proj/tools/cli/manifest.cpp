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
#include "cli/manifest.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "qets/core/error.hpp"

namespace qets::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

/// Typed access to one JSON object. Every key read is remembered so that
/// `finish` can reject the ones nobody asked for.
class Reader {
  public:
    Reader(const json *object, std::string path) : object_(object), path_(std::move(path)) {
        if (object_ != nullptr && !object_->is_object()) {
            throw ValidationError(fmt::format("manifest key '{}': expected an object", path_));
        }
    }

    [[nodiscard]] bool has(const std::string &key) {
        seen_.insert(key);
        return object_ != nullptr && object_->contains(key);
    }

    [[nodiscard]] double number(const std::string &key, double fallback) {
        const json *v = get(key);
        if (v == nullptr) {
            return fallback;
        }
        if (!v->is_number()) {
            fail(key, "expected a number");
        }
        const double x = v->get<double>();
        if (!std::isfinite(x)) {
            fail(key, "expected a finite number");
        }
        return x;
    }

    [[nodiscard]] std::uint64_t integer(const std::string &key, std::uint64_t fallback) {
        const json *v = get(key);
        if (v == nullptr) {
            return fallback;
        }
        return as_integer(*v, key);
    }

    [[nodiscard]] std::string string(const std::string &key, std::string fallback) {
        const json *v = get(key);
        if (v == nullptr) {
            return fallback;
        }
        if (!v->is_string()) {
            fail(key, "expected a string");
        }
        return v->get<std::string>();
    }

    [[nodiscard]] bool boolean(const std::string &key, bool fallback) {
        const json *v = get(key);
        if (v == nullptr) {
            return fallback;
        }
        if (!v->is_boolean()) {
            fail(key, "expected true or false");
        }
        return v->get<bool>();
    }

    [[nodiscard]] std::vector<double> numbers(const std::string &key,
                                              std::vector<double> fallback) {
        const json *v = get(key);
        if (v == nullptr) {
            return fallback;
        }
        if (!v->is_array() || v->empty()) {
            fail(key, "expected a non-empty array of numbers");
        }
        std::vector<double> out;
        for (const auto &e : *v) {
            if (!e.is_number() || !std::isfinite(e.get<double>())) {
                fail(key, "expected a non-empty array of numbers");
            }
            out.push_back(e.get<double>());
        }
        return out;
    }

    [[nodiscard]] std::vector<std::uint64_t> integers(const std::string &key,
                                                      std::vector<std::uint64_t> fallback) {
        const json *v = get(key);
        if (v == nullptr) {
            return fallback;
        }
        if (!v->is_array() || v->empty()) {
            fail(key, "expected a non-empty array of non-negative integers");
        }
        std::vector<std::uint64_t> out;
        for (const auto &e : *v) {
            out.push_back(as_integer(e, key));
        }
        return out;
    }

    [[nodiscard]] std::optional<fs::path> path(const std::string &key, const fs::path &base) {
        const json *v = get(key);
        if (v == nullptr) {
            return std::nullopt;
        }
        if (!v->is_string() || v->get<std::string>().empty()) {
            fail(key, "expected a non-empty path string");
        }
        fs::path p = v->get<std::string>();
        return p.is_absolute() ? p : base / p;
    }

    [[nodiscard]] Reader child(const std::string &key) {
        const json *v = get(key);
        return Reader(v, full(key));
    }

    [[nodiscard]] std::string full(const std::string &key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    [[noreturn]] void fail(const std::string &key, const std::string &message) const {
        throw ValidationError(fmt::format("manifest key '{}': {}", full(key), message));
    }

    void finish() const {
        if (object_ == nullptr) {
            return;
        }
        for (const auto &[key, value] : object_->items()) {
            if (seen_.count(key) == 0) {
                throw ValidationError(fmt::format("manifest key '{}': unknown key", full(key)));
            }
        }
    }

  private:
    const json *get(const std::string &key) {
        seen_.insert(key);
        if (object_ == nullptr) {
            return nullptr;
        }
        const auto it = object_->find(key);
        return it == object_->end() || it->is_null() ? nullptr : &*it;
    }

    std::uint64_t as_integer(const json &v, const std::string &key) const {
        if (v.is_number_unsigned()) {
            return v.get<std::uint64_t>();
        }
        if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
            return static_cast<std::uint64_t>(v.get<std::int64_t>());
        }
        fail(key, "expected a non-negative integer");
    }

    const json *object_;
    std::string path_;
    std::set<std::string> seen_;
};

/// Runs a library validator and prefixes its message with the key path.
template <typename F> void checked(const std::string &path, F &&validate) {
    try {
        validate();
    } catch (const ValidationError &e) {
        throw ValidationError(fmt::format("manifest key '{}': {}", path, e.what()));
    }
}

void parse_ansatz(Reader &&r, ansatz::AnsatzConfig &c) {
    c.Q = r.integer("Q", c.Q);
    c.E = r.integer("E", c.E);
    c.R = r.integer("R", c.R);
    c.M = r.integer("M", c.M);
    c.N = r.integer("N", c.N);
    c.B = r.integer("B", c.B);
    c.S = r.integer("S", c.S);
    r.finish();
    if (c.Q < 4 || c.Q % 2 != 0) {
        r.fail("Q", fmt::format("{} is not an even number >= 4", c.Q));
    }
    if (c.E != 1) {
        r.fail("E", "only a single encoder is supported");
    }
    for (const auto &[key, value] :
         {std::pair{"R", c.R}, {"M", c.M}, {"N", c.N}, {"B", c.B}, {"S", c.S}}) {
        if (value < 1) {
            r.fail(key, "must be >= 1");
        }
    }
}

void parse_noise(Reader &&r, qsim::NoiseParams &n) {
    n.p1 = r.number("p1", n.p1);
    n.p2 = r.number("p2", n.p2);
    n.p_ro = r.number("p_ro", n.p_ro);
    r.finish();
    for (const auto &[key, value] : {std::pair{"p1", n.p1}, {"p2", n.p2}, {"p_ro", n.p_ro}}) {
        if (value < 0.0 || value > 1.0) {
            r.fail(key, fmt::format("{} is outside [0, 1]", value));
        }
    }
}

void parse_mitigation(Reader &&r, MitigationSpec &m, std::size_t qubits) {
    m.variants = r.integer("variants", m.variants);
    const std::string aggregation = r.string("aggregation", "mean");
    if (aggregation == "mean") {
        m.aggregation = Aggregation::mean;
    } else if (aggregation == "dnl") {
        m.aggregation = Aggregation::dnl;
    } else if (aggregation == "grid") {
        m.aggregation = Aggregation::grid;
    } else {
        r.fail("aggregation", fmt::format("'{}' is not one of mean, dnl, grid", aggregation));
    }
    m.filter.p = r.number("p", m.filter.p);
    m.filter.t = r.integer("t", m.filter.t);
    Reader grid = r.child("grid");
    m.grid_p = grid.numbers("p", m.grid_p);
    const auto ts = grid.integers("t", {m.grid_t.begin(), m.grid_t.end()});
    m.grid_t.assign(ts.begin(), ts.end());
    grid.finish();
    r.finish();

    if (m.variants < 1) {
        r.fail("variants", "must be >= 1");
    }
    double permutations = 1.0;
    for (std::size_t k = 2; k <= qubits; ++k) {
        permutations *= static_cast<double>(k);
    }
    if (static_cast<double>(m.variants) > permutations) {
        r.fail("variants", fmt::format("{} exceeds the {} distinct qubit assignments",
                                       m.variants, permutations));
    }
    if (m.filter.p < 0.0) {
        r.fail("p", "must be >= 0");
    }
    if (m.filter.t > m.variants) {
        r.fail("t", fmt::format("{} exceeds the variant count {}", m.filter.t, m.variants));
    }
    for (const double p : m.grid_p) {
        if (p < 0.0) {
            r.fail("grid.p", "every candidate must be >= 0");
        }
    }
}

void parse_data(Reader &&r, DataSpec &d, const fs::path &base) {
    d.embeddings = r.path("embeddings", base);
    Reader syn = r.child("synthetic");
    d.synthetic_per_label = syn.integer("per_label", d.synthetic_per_label);
    d.synthetic_dimension = syn.integer("dimension", d.synthetic_dimension);
    d.synthetic_separation = syn.number("separation", d.synthetic_separation);
    d.synthetic_noise = syn.number("noise", d.synthetic_noise);
    syn.finish();
    d.per_label_train = r.integer("per_label_train", d.per_label_train);
    r.finish();
    if (d.synthetic_dimension < 1) {
        syn.fail("dimension", "must be >= 1");
    }
    if (d.synthetic_noise < 0.0) {
        syn.fail("noise", "must be >= 0");
    }
    if (!d.embeddings && d.per_label_train >= d.synthetic_per_label) {
        r.fail("per_label_train",
               fmt::format("{} leaves no test samples out of {} per label", d.per_label_train,
                           d.synthetic_per_label));
    }
}

void parse_train(Reader &&r, TrainSpec &t) {
    t.epochs = r.integer("epochs", t.epochs);
    t.learning_rate = r.number("learning_rate", t.learning_rate);
    t.batch_size = r.integer("batch_size", t.batch_size);
    t.stop_accuracy = r.number("stop_accuracy", t.stop_accuracy);
    r.finish();
    if (t.learning_rate <= 0.0) {
        r.fail("learning_rate", "must be positive");
    }
}

void parse_energy(Reader &&r, EnergySpec &e) {
    const auto qs = r.integers("qubits", {e.qubits.begin(), e.qubits.end()});
    e.qubits.assign(qs.begin(), qs.end());
    auto &p = e.params;
    p.P_qpu = r.number("P_qpu", p.P_qpu);
    p.T_sq = r.number("T_sq", p.T_sq);
    p.T_tq = r.number("T_tq", p.T_tq);
    p.S = r.integer("S", p.S);
    p.O_S = r.number("O_S", p.O_S);
    p.O_C = r.number("O_C", p.O_C);
    p.P_gpu = r.number("P_gpu", p.P_gpu);
    p.F_gpu = r.number("F_gpu", p.F_gpu);
    e.variant_multiplier = r.integer("variant_multiplier", e.variant_multiplier);
    if (r.has("fit_min_q")) {
        e.fit_min_q = r.number("fit_min_q", 0.0);
    }
    e.ceiling = r.number("ceiling", e.ceiling);
    r.finish();

    for (const auto &[key, value] :
         {std::pair{"P_qpu", p.P_qpu}, {"T_sq", p.T_sq}, {"T_tq", p.T_tq}, {"O_S", p.O_S},
          {"O_C", p.O_C}, {"P_gpu", p.P_gpu}, {"F_gpu", p.F_gpu}}) {
        if (value <= 0.0) {
            r.fail(key, "must be positive");
        }
    }
    for (const std::size_t q : e.qubits) {
        if (q < 4 || q % 2 != 0) {
            r.fail("qubits", fmt::format("{} is not an even number >= 4", q));
        }
    }
    if (e.variant_multiplier < 1) {
        r.fail("variant_multiplier", "must be >= 1");
    }
    if (e.ceiling <= 0.0) {
        r.fail("ceiling", "must be positive");
    }
}

void parse_powerlog(Reader &&r, PowerlogSpec &p, const fs::path &base) {
    p.trace = r.path("trace", base);
    p.jobs = r.path("jobs", base);
    const std::string rule = r.string("rule", "rectangle");
    if (rule == "rectangle") {
        p.integration.rule = powerlog::Rule::rectangle;
    } else if (rule == "trapezoid") {
        p.integration.rule = powerlog::Rule::trapezoid;
    } else {
        r.fail("rule", fmt::format("'{}' is not one of rectangle, trapezoid", rule));
    }
    p.integration.clock_offset = r.number("clock_offset", p.integration.clock_offset);
    p.integration.nominal_period = r.number("nominal_period", p.integration.nominal_period);
    p.integration.gap_threshold = r.number("gap_threshold", p.integration.gap_threshold);
    p.component = r.string("component", p.component);
    p.spacing = r.number("spacing", p.spacing);
    r.finish();
    if (p.integration.nominal_period <= 0.0) {
        r.fail("nominal_period", "must be positive");
    }
    if (p.integration.gap_threshold <= 0.0) {
        r.fail("gap_threshold", "must be positive");
    }
    if (p.component.empty()) {
        r.fail("component", "must not be empty");
    }
}

} // namespace

std::uint64_t ExperimentManifest::total_shots() const {
    return shot_policy == ShotPolicy::fixed ? ansatz.S : ansatz::shots_for(ansatz.Q);
}

std::uint64_t ExperimentManifest::require_seed() const {
    if (!seed) {
        throw ValidationError("manifest key 'seed': required by this command (pass --seed)");
    }
    return *seed;
}

std::string ExperimentManifest::hash() const {
    json canonical = raw;
    canonical.erase("output");
    return sha256_hex(canonical.dump());
}

ExperimentManifest parse_manifest(const json &raw, const fs::path &base_dir) {
    ExperimentManifest m;
    m.raw = raw;
    m.base_dir = base_dir;
    Reader root(&raw, "");

    parse_ansatz(root.child("ansatz"), m.ansatz);

    const std::string backend = root.string("backend", "exact");
    try {
        m.backend = pipeline::parse_backend(backend);
    } catch (const ValidationError &) {
        root.fail("backend", fmt::format("'{}' is not one of exact, noisy, mps", backend));
    }

    parse_noise(root.child("noise"), m.noise);
    parse_mitigation(root.child("mitigation"), m.mitigation, m.ansatz.Q);

    Reader shots = root.child("shots");
    const std::string policy = shots.string("policy", "fixed");
    if (policy == "fixed") {
        m.shot_policy = ShotPolicy::fixed;
    } else if (policy == "table") {
        m.shot_policy = ShotPolicy::table;
        if (m.ansatz.Q < 10) {
            shots.fail("policy", fmt::format("the shot table starts at Q = 10, ansatz.Q is {}",
                                             m.ansatz.Q));
        }
    } else {
        shots.fail("policy", fmt::format("'{}' is not one of fixed, table", policy));
    }
    shots.finish();
    if (m.total_shots() < m.mitigation.variants) {
        throw ValidationError(fmt::format(
            "manifest key 'mitigation.variants': {} variants cannot share {} shots",
            m.mitigation.variants, m.total_shots()));
    }

    Reader mps = root.child("mps");
    m.chi_max = mps.integer("chi_max", m.chi_max);
    mps.finish();
    if (m.chi_max < 1) {
        mps.fail("chi_max", "must be >= 1");
    }

    if (root.has("seed")) {
        m.seed = root.integer("seed", 0);
    }

    parse_data(root.child("data"), m.data, base_dir);
    parse_train(root.child("train"), m.train);

    Reader eval = root.child("eval");
    m.eval.limit = eval.integer("limit", m.eval.limit);
    m.eval.logistic_baseline = eval.boolean("logistic_baseline", m.eval.logistic_baseline);
    eval.finish();

    Reader run = root.child("run");
    m.run_limit = run.integer("limit", m.run_limit);
    run.finish();
    if (m.run_limit < 1) {
        run.fail("limit", "must be >= 1");
    }

    m.model = root.path("model", base_dir);
    m.bundle = root.path("bundle", base_dir);
    parse_energy(root.child("energy"), m.energy);
    parse_powerlog(root.child("powerlog"), m.powerlog, base_dir);
    m.output = root.path("output", fs::current_path()).value_or(fs::path("out"));
    root.finish();

    checked("ansatz", [&] { m.ansatz.validate(); });
    checked("noise", [&] { m.noise.validate(); });
    checked("energy", [&] { m.energy.params.validate(); });
    return m;
}

json read_manifest_json(const fs::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError(fmt::format("cannot open manifest {}", path.string()));
    }
    try {
        json j = json::parse(in);
        if (!j.is_object()) {
            throw ValidationError(
                fmt::format("manifest {}: top level must be an object", path.string()));
        }
        return j;
    } catch (const json::parse_error &e) {
        throw ValidationError(fmt::format("manifest {}: {}", path.string(), e.what()));
    }
}

void apply_override(json &raw, const std::string &key_path, const std::string &value) {
    if (key_path.empty()) {
        throw ValidationError("override needs a key path");
    }
    json *node = &raw;
    std::size_t begin = 0;
    while (true) {
        const std::size_t dot = key_path.find('.', begin);
        const std::string key = key_path.substr(begin, dot - begin);
        if (key.empty()) {
            throw ValidationError(fmt::format("override key '{}': empty component", key_path));
        }
        if (!node->is_object()) {
            *node = json::object();
        }
        node = &(*node)[key];
        if (dot == std::string::npos) {
            break;
        }
        begin = dot + 1;
    }
    json parsed = json::parse(value, nullptr, false);
    *node = parsed.is_discarded() ? json(value) : parsed;
}

std::string sha256_hex(const std::string &data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 failed");
    }
    std::string hex;
    hex.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        hex += fmt::format("{:02x}", digest[i]);
    }
    return hex;
}

} // namespace qets::cli
