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
#include "qets/pipeline/serialization.hpp"

#include <fmt/format.h>

#include "qets/core/error.hpp"

namespace qets::pipeline {

using nlohmann::json;

json config_to_json(const ansatz::AnsatzConfig &config) {
    return {{"Q", config.Q}, {"E", config.E}, {"R", config.R}, {"M", config.M},
            {"N", config.N}, {"B", config.B}, {"S", config.S}};
}

ansatz::AnsatzConfig config_from_json(const json &j) {
    if (!j.is_object()) {
        throw ValidationError("ansatz: expected an object");
    }
    ansatz::AnsatzConfig c;
    for (const auto &[key, value] : j.items()) {
        if (!value.is_number_integer() || value.get<std::int64_t>() < 0) {
            throw ValidationError(fmt::format("ansatz.{}: expected a non-negative integer", key));
        }
        const auto v = value.get<std::uint64_t>();
        if (key == "Q") {
            c.Q = v;
        } else if (key == "E") {
            c.E = v;
        } else if (key == "R") {
            c.R = v;
        } else if (key == "M") {
            c.M = v;
        } else if (key == "N") {
            c.N = v;
        } else if (key == "B") {
            c.B = v;
        } else if (key == "S") {
            c.S = v;
        } else {
            throw ValidationError(fmt::format("ansatz.{}: unknown key", key));
        }
    }
    c.validate();
    return c;
}

json model_to_json(const Model &model, const json &seeds) {
    json j;
    j["config"] = config_to_json(model.config);
    j["encoder"] = {{"outputs", model.encoder.outputs},
                    {"inputs", model.encoder.inputs},
                    {"weights", model.encoder.weights},
                    {"bias", model.encoder.bias}};
    j["params"] = model.params;
    if (!seeds.is_null()) {
        j["seeds"] = seeds;
    }
    return j;
}

Model model_from_json(const json &j) {
    try {
        Model m;
        m.config = config_from_json(j.at("config"));
        const auto &e = j.at("encoder");
        m.encoder.outputs = e.at("outputs").get<std::size_t>();
        m.encoder.inputs = e.at("inputs").get<std::size_t>();
        m.encoder.weights = e.at("weights").get<std::vector<double>>();
        m.encoder.bias = e.at("bias").get<std::vector<double>>();
        m.params = j.at("params").get<std::vector<double>>();
        m.validate();
        return m;
    } catch (const json::exception &ex) {
        throw ValidationError(fmt::format("model manifest: {}", ex.what()));
    }
}

} // namespace qets::pipeline
