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
#include <iosfwd>
#include <map>
#include <string>

namespace qets::qsim {

/// Measurement counts keyed by bitstring. Character k of every key is the
/// outcome of qubit k (qubit 0 is leftmost).
class Histogram {
  public:
    using Counts = std::map<std::string, std::uint64_t>;

    explicit Histogram(std::size_t qubit_count) : qubit_count_(qubit_count) {}

    /// Adds `count` observations of `bitstring`; validates the key.
    void add(const std::string &bitstring, std::uint64_t count = 1);

    [[nodiscard]] std::size_t qubit_count() const noexcept { return qubit_count_; }
    [[nodiscard]] std::uint64_t total_shots() const noexcept { return total_; }
    [[nodiscard]] const Counts &counts() const noexcept { return counts_; }
    [[nodiscard]] std::uint64_t count(const std::string &bitstring) const;
    [[nodiscard]] bool empty() const noexcept { return total_ == 0; }

    friend bool operator==(const Histogram &, const Histogram &) = default;

  private:
    std::size_t qubit_count_;
    Counts counts_;
    std::uint64_t total_ = 0;
};

/// Probability distribution over bitstrings, same key convention.
using Distribution = std::map<std::string, double>;

/// Normalised frequencies of a histogram.
[[nodiscard]] Distribution frequencies(const Histogram &hist);

/// (N0 - N1) / shots for the given qubit.
[[nodiscard]] double z_from_histogram(const Histogram &hist, std::size_t qubit);

/// Sum of P(b) * (+1 / -1) over a distribution.
[[nodiscard]] double z_from_distribution(const Distribution &dist, std::size_t qubit);

/// `std::string` of length `qubit_count` for a basis-state index, qubit 0 in
/// the most significant position.
[[nodiscard]] std::string basis_string(std::uint64_t index, std::size_t qubit_count);
[[nodiscard]] std::uint64_t basis_index(const std::string &bitstring);

/// Text format: header `shots <N>`, then `<bitstring> <count>` lines.
void write_histogram(std::ostream &out, const Histogram &hist);
[[nodiscard]] Histogram read_histogram(std::istream &in);

/// Distribution in the histogram layout: header `shots <N>`, then
/// `<bitstring> <probability>` lines.
void write_distribution(std::ostream &out, const Distribution &dist,
                        std::uint64_t shots);

} // namespace qets::qsim
