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
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qets/energy/energy.hpp"

namespace qets::powerlog {

struct PowerSample {
    double timestamp = 0.0;
    std::string component;
    double watts = 0.0;
};

/// Samples grouped by component. Timestamps of each component must be
/// strictly increasing in insertion order.
class PowerTrace {
public:
    struct Reading {
        double timestamp;
        double watts;
    };

    void add(const PowerSample &sample);

    [[nodiscard]] std::vector<std::string> components() const;
    [[nodiscard]] bool has_component(const std::string &component) const;
    /// Throws ValidationError for an unknown component.
    [[nodiscard]] std::span<const Reading> series(const std::string &component) const;
    [[nodiscard]] std::size_t size() const noexcept { return total_; }
    [[nodiscard]] bool empty() const noexcept { return total_ == 0; }

private:
    std::map<std::string, std::vector<Reading>> series_;
    std::size_t total_ = 0;
};

/// `timestamp,component,watts` per line. Blank lines, `#` comments and a
/// literal `timestamp,component,watts` header are skipped.
[[nodiscard]] PowerTrace read_trace(std::istream &in);
[[nodiscard]] PowerTrace read_trace(const std::filesystem::path &path);
void write_trace(std::ostream &out, const PowerTrace &trace);

struct JobRecord {
    std::string job_id;
    double start_ts = 0.0;
    double end_ts = 0.0;
    std::size_t qubits = 0;
    std::uint64_t shots = 0;
    std::size_t variants = 1;

    [[nodiscard]] double duration() const noexcept { return end_ts - start_ts; }
    void validate() const;
};

/// `job_id,start_ts,end_ts,qubits,shots,variants` per line, same comment and
/// header rules as traces.
[[nodiscard]] std::vector<JobRecord> read_jobs(std::istream &in);
[[nodiscard]] std::vector<JobRecord> read_jobs(const std::filesystem::path &path);

enum class Rule { rectangle, trapezoid };

struct IntegrationOptions {
    /// rectangle: each reading holds until the next one. trapezoid: linear
    /// interpolation between readings.
    Rule rule = Rule::rectangle;
    /// Added to job timestamps to bring them onto the trace clock.
    double clock_offset = 0.0;
    /// How long the final reading of a series is held.
    double nominal_period = 1.0;
    /// Spacing above which two readings are bridged by linear interpolation
    /// and a data-quality warning is raised, whatever the rule.
    double gap_threshold = 2.0;

    void validate() const;
};

/// Energy in kJ drawn by `component` during [start, end) of the job. Readings
/// that straddle a window edge contribute in proportion to their overlap.
/// Throws DataQualityError when no reading covers any part of the window.
[[nodiscard]] double integrate_energy(const PowerTrace &trace, const JobRecord &job,
                                      const std::string &component,
                                      const IntegrationOptions &options = {});

/// integrate_energy / duration, in kW.
[[nodiscard]] double average_power(const PowerTrace &trace, const JobRecord &job,
                                   const std::string &component,
                                   const IntegrationOptions &options = {});

/// z-scores with population standard deviation.
[[nodiscard]] std::vector<double> normalize_series(std::span<const double> values);

/// Adds index * spacing to every value, used only when writing stacked
/// series for display.
[[nodiscard]] std::vector<double> display_offset(std::span<const double> normalized,
                                                 std::size_t series_index,
                                                 double spacing = 3.0);

[[nodiscard]] double pearson(std::span<const double> x, std::span<const double> y);

[[nodiscard]] double power_qubit_correlation(std::span<const double> average_kw,
                                             std::span<const std::size_t> qubits);

struct ConsistencyCheck {
    double total_kj = 0.0;
    double component_sum_kj = 0.0;
    bool consistent = true;
};

/// Compares the `total` component against the sum of all other components
/// over the job window. Empty when the trace has no `total`. A violation is
/// reported through the warning sink, not thrown.
[[nodiscard]] std::optional<ConsistencyCheck>
component_consistency(const PowerTrace &trace, const JobRecord &job,
                      const IntegrationOptions &options = {}, double tolerance_kj = 1e-6);

struct JobEnergy {
    std::string job_id;
    std::string component;
    std::size_t qubits = 0;
    std::uint64_t shots = 0;
    std::size_t variants = 0;
    double duration_s = 0.0;
    double energy_kj = 0.0;
    double average_kw = 0.0;
};

/// One row per (job, component), jobs in input order and components by name.
[[nodiscard]] std::vector<JobEnergy> job_energy_table(const PowerTrace &trace,
                                                      std::span<const JobRecord> jobs,
                                                      const IntegrationOptions &options = {});

/// Mean job energy for `component` at each distinct qubit count, ascending.
[[nodiscard]] std::vector<energy::Point>
mean_energy_by_qubits(std::span<const JobEnergy> rows, const std::string &component);

} // namespace qets::powerlog
