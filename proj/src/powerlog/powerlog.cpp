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
#include "qets/powerlog/powerlog.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>

#include <fmt/format.h>

#include "qets/core/diagnostics.hpp"
#include "qets/core/error.hpp"

namespace qets::powerlog {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        fields.push_back(trim(line.substr(pos, comma - pos)));
        if (comma == std::string_view::npos) {
            break;
        }
        pos = comma + 1;
    }
    return fields;
}

template <typename T>
T parse_number(std::string_view text, std::size_t line_no, const char *what) {
    T value{};
    const auto *end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw ValidationError(fmt::format("line {}: bad {} '{}'", line_no, what, text));
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) {
            throw ValidationError(fmt::format("line {}: non-finite {}", line_no, what));
        }
    }
    return value;
}

// Calls `fn(fields, line_no)` for every data line, skipping blanks, comments
// and the given header.
template <typename Fn>
void for_each_record(std::istream &in, std::string_view header, std::size_t field_count, Fn fn) {
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        auto fields = split_fields(line);
        if (fields.size() != field_count) {
            throw ValidationError(fmt::format("line {}: expected {} fields, got {}", line_no,
                                              field_count, fields.size()));
        }
        std::string joined;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            joined += (i ? "," : "") + std::string(fields[i]);
        }
        if (joined == header) {
            continue;
        }
        fn(fields, line_no);
    }
}

std::ifstream open_input(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError(fmt::format("cannot open {}", path.string()));
    }
    return in;
}

struct Segment {
    double t0;
    double t1;
    double w0;
    double w1;
    bool gap;
};

std::vector<Segment> segments(std::span<const PowerTrace::Reading> r,
                              const IntegrationOptions &options) {
    std::vector<Segment> out;
    out.reserve(r.size());
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        const bool gap = r[i + 1].timestamp - r[i].timestamp > options.gap_threshold;
        const bool linear = gap || options.rule == Rule::trapezoid;
        out.push_back({r[i].timestamp, r[i + 1].timestamp, r[i].watts,
                       linear ? r[i + 1].watts : r[i].watts, gap});
    }
    if (!r.empty()) {
        out.push_back({r.back().timestamp, r.back().timestamp + options.nominal_period,
                       r.back().watts, r.back().watts, false});
    }
    return out;
}

} // namespace

void PowerTrace::add(const PowerSample &sample) {
    if (sample.component.empty()) {
        throw ValidationError("power sample needs a component name");
    }
    if (!std::isfinite(sample.timestamp) || !std::isfinite(sample.watts)) {
        throw DataQualityError(
            fmt::format("non-finite power sample for '{}'", sample.component));
    }
    if (sample.watts < 0.0) {
        throw DataQualityError(fmt::format("negative power {} W for '{}' at t={}", sample.watts,
                                           sample.component, sample.timestamp));
    }
    auto &s = series_[sample.component];
    if (!s.empty() && sample.timestamp <= s.back().timestamp) {
        throw DataQualityError(fmt::format("timestamps for '{}' not strictly increasing at t={}",
                                           sample.component, sample.timestamp));
    }
    s.push_back({sample.timestamp, sample.watts});
    ++total_;
}

std::vector<std::string> PowerTrace::components() const {
    std::vector<std::string> names;
    for (const auto &[name, _] : series_) {
        names.push_back(name);
    }
    return names;
}

bool PowerTrace::has_component(const std::string &component) const {
    return series_.contains(component);
}

std::span<const PowerTrace::Reading> PowerTrace::series(const std::string &component) const {
    const auto it = series_.find(component);
    if (it == series_.end()) {
        throw ValidationError(fmt::format("trace has no component '{}'", component));
    }
    return it->second;
}

PowerTrace read_trace(std::istream &in) {
    PowerTrace trace;
    for_each_record(in, "timestamp,component,watts", 3, [&](const auto &f, std::size_t line) {
        trace.add({parse_number<double>(f[0], line, "timestamp"), std::string(f[1]),
                   parse_number<double>(f[2], line, "watts")});
    });
    return trace;
}

PowerTrace read_trace(const std::filesystem::path &path) {
    auto in = open_input(path);
    return read_trace(in);
}

void write_trace(std::ostream &out, const PowerTrace &trace) {
    out << "timestamp,component,watts\n";
    for (const auto &name : trace.components()) {
        for (const auto &r : trace.series(name)) {
            out << fmt::format("{:.17g},{},{:.17g}\n", r.timestamp, name, r.watts);
        }
    }
}

void JobRecord::validate() const {
    if (job_id.empty()) {
        throw ValidationError("job record needs an id");
    }
    if (!std::isfinite(start_ts) || !std::isfinite(end_ts) || !(start_ts < end_ts)) {
        throw ValidationError(
            fmt::format("job '{}': start {} must precede end {}", job_id, start_ts, end_ts));
    }
}

std::vector<JobRecord> read_jobs(std::istream &in) {
    std::vector<JobRecord> jobs;
    for_each_record(in, "job_id,start_ts,end_ts,qubits,shots,variants", 6,
                    [&](const auto &f, std::size_t line) {
                        JobRecord job{std::string(f[0]),
                                      parse_number<double>(f[1], line, "start_ts"),
                                      parse_number<double>(f[2], line, "end_ts"),
                                      parse_number<std::size_t>(f[3], line, "qubits"),
                                      parse_number<std::uint64_t>(f[4], line, "shots"),
                                      parse_number<std::size_t>(f[5], line, "variants")};
                        job.validate();
                        jobs.push_back(std::move(job));
                    });
    return jobs;
}

std::vector<JobRecord> read_jobs(const std::filesystem::path &path) {
    auto in = open_input(path);
    return read_jobs(in);
}

void IntegrationOptions::validate() const {
    if (!std::isfinite(clock_offset)) {
        throw ValidationError("clock_offset must be finite");
    }
    if (!std::isfinite(nominal_period) || nominal_period <= 0.0) {
        throw ValidationError("nominal_period must be positive");
    }
    if (!std::isfinite(gap_threshold) || gap_threshold <= 0.0) {
        throw ValidationError("gap_threshold must be positive");
    }
}

double integrate_energy(const PowerTrace &trace, const JobRecord &job,
                        const std::string &component, const IntegrationOptions &options) {
    job.validate();
    options.validate();
    const double start = job.start_ts + options.clock_offset;
    const double end = job.end_ts + options.clock_offset;
    double joules = 0.0;
    double covered = 0.0;
    std::size_t gaps = 0;
    for (const auto &seg : segments(trace.series(component), options)) {
        const double a = std::max(start, seg.t0);
        const double b = std::min(end, seg.t1);
        if (b <= a) {
            continue;
        }
        const double slope = (seg.w1 - seg.w0) / (seg.t1 - seg.t0);
        const double wa = seg.w0 + slope * (a - seg.t0);
        const double wb = seg.w0 + slope * (b - seg.t0);
        joules += 0.5 * (wa + wb) * (b - a);
        covered += b - a;
        gaps += seg.gap ? 1 : 0;
    }
    if (covered == 0.0) {
        throw DataQualityError(fmt::format("job '{}': no '{}' readings in [{}, {})", job.job_id,
                                           component, start, end));
    }
    if (gaps > 0) {
        warn(fmt::format("job '{}': {} gap(s) longer than {} s in '{}' bridged by interpolation",
                         job.job_id, gaps, options.gap_threshold, component));
    }
    const double span = end - start;
    if (covered < span * (1.0 - 1e-12)) {
        warn(fmt::format("job '{}': '{}' readings cover {:.6g} of {:.6g} s", job.job_id,
                         component, covered, span));
    }
    return joules / 1000.0;
}

double average_power(const PowerTrace &trace, const JobRecord &job,
                     const std::string &component, const IntegrationOptions &options) {
    if (!(job.duration() > 0.0)) {
        throw ValidationError(fmt::format("job '{}' has a zero-length window", job.job_id));
    }
    return integrate_energy(trace, job, component, options) / job.duration();
}

std::vector<double> normalize_series(std::span<const double> values) {
    if (values.size() < 2) {
        throw ValidationError("normalization needs at least 2 values");
    }
    const auto n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) {
        mean += v;
    }
    mean /= n;
    double var = 0.0;
    for (double v : values) {
        var += (v - mean) * (v - mean);
    }
    var /= n;
    if (!(var > 0.0)) {
        throw DataQualityError("cannot normalize a series with zero variance");
    }
    const double sd = std::sqrt(var);
    std::vector<double> out;
    out.reserve(values.size());
    for (double v : values) {
        out.push_back((v - mean) / sd);
    }
    return out;
}

std::vector<double> display_offset(std::span<const double> normalized, std::size_t series_index,
                                   double spacing) {
    std::vector<double> out(normalized.begin(), normalized.end());
    for (double &v : out) {
        v += static_cast<double>(series_index) * spacing;
    }
    return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw ValidationError(fmt::format("pearson: {} x values but {} y values", x.size(),
                                          y.size()));
    }
    if (x.size() < 3) {
        throw ValidationError("pearson needs at least 3 pairs");
    }
    const auto n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) {
        throw DataQualityError("pearson: zero variance on one axis");
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double power_qubit_correlation(std::span<const double> average_kw,
                               std::span<const std::size_t> qubits) {
    std::vector<double> q(qubits.begin(), qubits.end());
    return pearson(q, average_kw);
}

std::optional<ConsistencyCheck> component_consistency(const PowerTrace &trace,
                                                      const JobRecord &job,
                                                      const IntegrationOptions &options,
                                                      double tolerance_kj) {
    if (!trace.has_component("total")) {
        return std::nullopt;
    }
    ConsistencyCheck check;
    check.total_kj = integrate_energy(trace, job, "total", options);
    for (const auto &name : trace.components()) {
        if (name != "total") {
            check.component_sum_kj += integrate_energy(trace, job, name, options);
        }
    }
    check.consistent = check.component_sum_kj <= check.total_kj + tolerance_kj;
    if (!check.consistent) {
        warn(fmt::format("job '{}': components sum to {:.6f} kJ, above total {:.6f} kJ",
                         job.job_id, check.component_sum_kj, check.total_kj));
    }
    return check;
}

std::vector<JobEnergy> job_energy_table(const PowerTrace &trace, std::span<const JobRecord> jobs,
                                        const IntegrationOptions &options) {
    std::vector<JobEnergy> rows;
    const auto names = trace.components();
    for (const auto &job : jobs) {
        for (const auto &name : names) {
            const double kj = integrate_energy(trace, job, name, options);
            rows.push_back({job.job_id, name, job.qubits, job.shots, job.variants,
                            job.duration(), kj, kj / job.duration()});
        }
        (void)component_consistency(trace, job, options);
    }
    return rows;
}

std::vector<energy::Point> mean_energy_by_qubits(std::span<const JobEnergy> rows,
                                                 const std::string &component) {
    std::map<std::size_t, std::pair<double, std::size_t>> acc;
    for (const auto &r : rows) {
        if (r.component == component) {
            auto &[sum, count] = acc[r.qubits];
            sum += r.energy_kj;
            ++count;
        }
    }
    std::vector<energy::Point> points;
    for (const auto &[q, sc] : acc) {
        points.push_back({static_cast<double>(q), sc.first / static_cast<double>(sc.second)});
    }
    return points;
}

} // namespace qets::powerlog
