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
#include "qets/qsim/histogram.hpp"

#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "qets/core/error.hpp"

namespace qets::qsim {

void Histogram::add(const std::string &bitstring, std::uint64_t count) {
    if (bitstring.size() != qubit_count_) {
        throw ValidationError(fmt::format("bitstring '{}' has length {}, expected {}",
                                          bitstring, bitstring.size(), qubit_count_));
    }
    if (bitstring.find_first_not_of("01") != std::string::npos) {
        throw ValidationError(fmt::format("bitstring '{}' is not binary", bitstring));
    }
    if (count == 0) {
        return;
    }
    counts_[bitstring] += count;
    total_ += count;
}

std::uint64_t Histogram::count(const std::string &bitstring) const {
    auto it = counts_.find(bitstring);
    return it == counts_.end() ? 0 : it->second;
}

Distribution frequencies(const Histogram &hist) {
    if (hist.empty()) {
        throw DataQualityError("histogram has no shots");
    }
    Distribution dist;
    const auto total = static_cast<double>(hist.total_shots());
    for (const auto &[key, n] : hist.counts()) {
        dist.emplace(key, static_cast<double>(n) / total);
    }
    return dist;
}

double z_from_histogram(const Histogram &hist, std::size_t qubit) {
    if (hist.empty()) {
        throw DataQualityError("cannot estimate <Z> from an empty histogram");
    }
    if (qubit >= hist.qubit_count()) {
        throw ValidationError(fmt::format("qubit {} out of range", qubit));
    }
    std::int64_t n0 = 0;
    std::int64_t n1 = 0;
    for (const auto &[key, n] : hist.counts()) {
        (key[qubit] == '0' ? n0 : n1) += static_cast<std::int64_t>(n);
    }
    return static_cast<double>(n0 - n1) / static_cast<double>(hist.total_shots());
}

double z_from_distribution(const Distribution &dist, std::size_t qubit) {
    double z = 0.0;
    for (const auto &[key, p] : dist) {
        if (qubit >= key.size()) {
            throw ValidationError(fmt::format("qubit {} out of range", qubit));
        }
        z += key[qubit] == '0' ? p : -p;
    }
    return z;
}

std::string basis_string(std::uint64_t index, std::size_t qubit_count) {
    std::string s(qubit_count, '0');
    for (std::size_t q = 0; q < qubit_count; ++q) {
        if ((index >> (qubit_count - 1 - q)) & 1U) {
            s[q] = '1';
        }
    }
    return s;
}

std::uint64_t basis_index(const std::string &bitstring) {
    std::uint64_t index = 0;
    for (char c : bitstring) {
        index = (index << 1) | (c == '1' ? 1U : 0U);
    }
    return index;
}

void write_histogram(std::ostream &out, const Histogram &hist) {
    out << "shots " << hist.total_shots() << '\n';
    for (const auto &[key, n] : hist.counts()) {
        out << key << ' ' << n << '\n';
    }
}

Histogram read_histogram(std::istream &in) {
    std::string line;
    std::optional<std::uint64_t> declared;
    std::optional<Histogram> hist;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') {
            continue;
        }
        std::istringstream fields(line);
        if (!declared) {
            std::string tag;
            std::uint64_t shots = 0;
            if (!(fields >> tag >> shots) || tag != "shots") {
                throw ValidationError(
                    fmt::format("histogram line {}: expected 'shots <N>'", line_no));
            }
            declared = shots;
            continue;
        }
        std::string key;
        std::uint64_t n = 0;
        if (!(fields >> key >> n)) {
            throw ValidationError(
                fmt::format("histogram line {}: expected '<bitstring> <count>'", line_no));
        }
        if (!hist) {
            hist.emplace(key.size());
        }
        hist->add(key, n);
    }
    if (!declared || !hist) {
        throw ValidationError("histogram file is missing its header or counts");
    }
    if (hist->total_shots() != *declared) {
        throw ValidationError(fmt::format("histogram counts sum to {}, header says {}",
                                          hist->total_shots(), *declared));
    }
    return *std::move(hist);
}

void write_distribution(std::ostream &out, const Distribution &dist,
                        std::uint64_t shots) {
    out << "shots " << shots << '\n';
    for (const auto &[key, p] : dist) {
        out << fmt::format("{} {:.17g}\n", key, p);
    }
}

} // namespace qets::qsim
