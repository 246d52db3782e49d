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
#include "qets/core/diagnostics.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace qets {
namespace {

std::mutex sink_mutex;

WarningSink &current_sink() {
    static WarningSink sink = [](const std::string &message) {
        std::cerr << "warning: " << message << '\n';
    };
    return sink;
}

} // namespace

void set_warning_sink(WarningSink sink) {
    std::lock_guard lock(sink_mutex);
    current_sink() = std::move(sink);
}

void warn(const std::string &message) {
    std::lock_guard lock(sink_mutex);
    if (current_sink()) {
        current_sink()(message);
    }
}

ScopedWarningSink::ScopedWarningSink(WarningSink sink) {
    std::lock_guard lock(sink_mutex);
    previous_ = std::exchange(current_sink(), std::move(sink));
}

ScopedWarningSink::~ScopedWarningSink() {
    std::lock_guard lock(sink_mutex);
    current_sink() = std::move(previous_);
}

} // namespace qets
