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

#include <nlohmann/json.hpp>

#include "qets/ansatz/ansatz.hpp"
#include "qets/pipeline/model.hpp"

namespace qets::pipeline {

/// Ansatz hyperparameters as a JSON object keyed Q, E, R, M, N, B, S.
[[nodiscard]] nlohmann::json config_to_json(const ansatz::AnsatzConfig &config);
/// Missing keys keep their defaults; unknown keys are rejected.
[[nodiscard]] ansatz::AnsatzConfig config_from_json(const nlohmann::json &j);

/// Trained-model manifest: config, encoder matrix, circuit parameters and the
/// seeds that produced them.
[[nodiscard]] nlohmann::json model_to_json(const Model &model, const nlohmann::json &seeds = {});
[[nodiscard]] Model model_from_json(const nlohmann::json &j);

} // namespace qets::pipeline
