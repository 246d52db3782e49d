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
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "qets/core/diagnostics.hpp"
#include "qets/core/error.hpp"
#include "qets/core/random.hpp"
#include "qets/powerlog/powerlog.hpp"

using namespace qets;
using namespace qets::powerlog;
using Catch::Matchers::WithinAbs;

namespace {

PowerTrace constant_trace(double watts, int seconds, const std::string &name = "total") {
    PowerTrace t;
    for (int s = 0; s < seconds; ++s) {
        t.add({static_cast<double>(s), name, watts});
    }
    return t;
}

PowerTrace ramp_trace() {
    PowerTrace t;
    for (int s = 0; s <= 100; ++s) {
        t.add({static_cast<double>(s), "total", 10.0 * s});
    }
    return t;
}

JobRecord job(double start, double end, std::size_t qubits = 10) {
    return {"j", start, end, qubits, 500, 25};
}

struct Captured {
    std::vector<std::string> messages;
    ScopedWarningSink sink{[this](const std::string &m) { messages.push_back(m); }};
};

} // namespace

TEST_CASE("constant 5 kW for 10 s is 50 kJ", "[powerlog][integrate]") {
    const auto t = constant_trace(5000.0, 10);
    CHECK(integrate_energy(t, job(0, 10), "total") == 50.0);
    CHECK(average_power(t, job(0, 10), "total") == 5.0);
}

TEST_CASE("linear ramp integrates within one rectangle step", "[powerlog][integrate]") {
    const auto t = ramp_trace();
    const double kj = integrate_energy(t, job(0, 100), "total");
    CHECK(std::abs(kj - 50.0) <= 0.5);
    IntegrationOptions trap;
    trap.rule = Rule::trapezoid;
    CHECK_THAT(integrate_energy(t, job(0, 100), "total", trap), WithinAbs(50.0, 1e-9));
}

TEST_CASE("disjoint job window is a data-quality error", "[powerlog][integrate]") {
    const auto t = constant_trace(100.0, 10);
    CHECK_THROWS_AS(integrate_energy(t, job(50, 60), "total"), DataQualityError);
    CHECK_THROWS_AS(integrate_energy(t, job(0, 5), "cooling"), ValidationError);
}

TEST_CASE("partial edge seconds are weighted by overlap", "[powerlog][integrate]") {
    PowerTrace t;
    for (int s = 0; s < 10; ++s) {
        t.add({static_cast<double>(s), "total", s < 5 ? 1000.0 : 3000.0});
    }
    CHECK_THAT(integrate_energy(t, job(4.5, 5.5), "total"), WithinAbs(0.5 + 1.5, 1e-12));
}

TEST_CASE("energy is additive over split windows", "[powerlog][integrate]") {
    Rng rng(6);
    PowerTrace t;
    for (int s = 0; s < 300; ++s) {
        t.add({s + 0.3 * uniform01(rng), "total", 4000.0 + 500.0 * uniform01(rng)});
    }
    for (double cut : {17.0, 100.25, 150.5, 201.9}) {
        const double whole = integrate_energy(t, job(5.5, 250.0), "total");
        const double parts =
            integrate_energy(t, job(5.5, cut), "total") + integrate_energy(t, job(cut, 250), "total");
        CHECK(std::abs(whole - parts) <= 1e-9);
    }
}

TEST_CASE("average power is window-weighted and bounded", "[powerlog][average]") {
    Rng rng(10);
    PowerTrace t;
    std::vector<double> watts;
    for (int s = 0; s < 120; ++s) {
        watts.push_back(2000.0 + 1000.0 * uniform01(rng));
        t.add({static_cast<double>(s), "trap", watts.back()});
    }
    const auto whole = job(10, 100);
    const double avg = average_power(t, whole, "trap");
    const double a = average_power(t, job(10, 40), "trap");
    const double b = average_power(t, job(40, 100), "trap");
    CHECK_THAT((a * 30 + b * 60) / 90, WithinAbs(avg, 1e-12));
    const auto lo = *std::min_element(watts.begin() + 10, watts.begin() + 100) / 1000.0;
    const auto hi = *std::max_element(watts.begin() + 10, watts.begin() + 100) / 1000.0;
    CHECK(avg >= lo);
    CHECK(avg <= hi);

    const auto flat = constant_trace(750.0, 30, "trap");
    CHECK_THAT(average_power(flat, job(3, 17), "trap"), WithinAbs(0.75, 1e-15));
}

TEST_CASE("gaps are bridged by interpolation with a warning", "[powerlog][integrate]") {
    PowerTrace t;
    t.add({0, "total", 1000});
    t.add({1, "total", 1000});
    t.add({6, "total", 2000});
    t.add({7, "total", 2000});
    Captured captured;
    const double kj = integrate_energy(t, job(0, 8), "total");
    CHECK_THAT(kj, WithinAbs((1000 + 5 * 1500 + 2000 + 2000) / 1000.0, 1e-12));
    REQUIRE(captured.messages.size() == 1);
    CHECK(captured.messages[0].find("gap") != std::string::npos);
}

TEST_CASE("clock offset shifts the job window", "[powerlog][integrate]") {
    PowerTrace t;
    for (int s = 100; s < 120; ++s) {
        t.add({static_cast<double>(s), "total", s < 110 ? 1000.0 : 5000.0});
    }
    IntegrationOptions opts;
    opts.clock_offset = 100.0;
    CHECK(integrate_energy(t, job(10, 15), "total", opts) == 25.0);
    opts.nominal_period = 0.0;
    CHECK_THROWS_AS(integrate_energy(t, job(10, 15), "total", opts), ValidationError);
}

TEST_CASE("incomplete coverage warns", "[powerlog][integrate]") {
    const auto t = constant_trace(1000.0, 5);
    Captured captured;
    CHECK(integrate_energy(t, job(3, 20), "total") == 2.0);
    CHECK(captured.messages.size() == 1);
}

TEST_CASE("trace invariants", "[powerlog][trace]") {
    PowerTrace t;
    t.add({1.0, "trap", 10.0});
    CHECK_THROWS_AS(t.add({1.0, "trap", 11.0}), DataQualityError);
    CHECK_THROWS_AS(t.add({2.0, "trap", -1.0}), DataQualityError);
    CHECK_NOTHROW(t.add({1.0, "cooling", 11.0}));
    CHECK_THROWS_AS(t.add({2.0, "", 1.0}), ValidationError);
    CHECK(t.components() == std::vector<std::string>{"cooling", "trap"});
    CHECK_THROWS_AS(job(5, 5).validate(), ValidationError);
}

TEST_CASE("trace and job files", "[powerlog][io]") {
    std::istringstream trace_in("# exported\ntimestamp,component,watts\n0,total,10\n1, total ,20\n"
                                "0,trap,4\n\n1,trap,5\n");
    const auto t = read_trace(trace_in);
    CHECK(t.size() == 4);
    CHECK(t.series("total")[1].watts == 20.0);
    std::stringstream round;
    write_trace(round, t);
    CHECK(read_trace(round).size() == 4);

    std::istringstream bad("0,total,abc\n");
    CHECK_THROWS_AS(read_trace(bad), ValidationError);
    std::istringstream short_line("0,total\n");
    CHECK_THROWS_AS(read_trace(short_line), ValidationError);

    std::istringstream jobs_in("job_id,start_ts,end_ts,qubits,shots,variants\n"
                               "a,0,10,10,500,25\nb,10,30,12,1000,25\n");
    const auto jobs = read_jobs(jobs_in);
    REQUIRE(jobs.size() == 2);
    CHECK(jobs[1].qubits == 12);
    CHECK(jobs[1].duration() == 20.0);
    std::istringstream reversed("c,10,5,10,500,25\n");
    CHECK_THROWS_AS(read_jobs(reversed), ValidationError);
}

TEST_CASE("normalize_series examples", "[powerlog][normalize]") {
    const std::vector<double> v{1, 2, 3};
    const auto z = normalize_series(v);
    CHECK_THAT(z[0], WithinAbs(-1.2247448713915890, 1e-12));
    CHECK_THAT(z[1], WithinAbs(0.0, 1e-15));
    CHECK_THAT(z[2], WithinAbs(1.2247448713915890, 1e-12));

    const std::vector<double> flat{4, 4, 4};
    CHECK_THROWS_AS(normalize_series(flat), DataQualityError);
    const std::vector<double> single{1};
    CHECK_THROWS_AS(normalize_series(single), ValidationError);

    Rng rng(3);
    std::vector<double> series;
    for (int i = 0; i < 500; ++i) {
        series.push_back(3000 + 200 * normal(rng));
    }
    const auto n = normalize_series(series);
    double mean = 0;
    double sq = 0;
    for (double x : n) {
        mean += x;
    }
    mean /= 500;
    for (double x : n) {
        sq += (x - mean) * (x - mean);
    }
    CHECK(std::abs(mean) < 1e-12);
    CHECK(std::abs(std::sqrt(sq / 500) - 1.0) < 1e-12);

    const auto shifted = display_offset(z, 2, 3.0);
    CHECK_THAT(shifted[1], WithinAbs(6.0, 1e-15));
}

TEST_CASE("power_qubit_correlation examples", "[powerlog][correlation]") {
    const std::vector<std::size_t> q{10, 12, 14, 16, 18};
    const std::vector<double> up{1.0, 1.5, 1.7, 2.5, 3.0};
    CHECK_THAT(power_qubit_correlation(up, q), WithinAbs(pearson(std::vector<double>{10, 12, 14, 16, 18}, up), 1e-15));
    const std::vector<double> x{1, 2, 3, 4};
    const std::vector<double> same{2, 4, 6, 8};
    const std::vector<double> neg{-1, -2, -3, -4};
    CHECK_THAT(pearson(x, same), WithinAbs(1.0, 1e-15));
    CHECK_THAT(pearson(x, neg), WithinAbs(-1.0, 1e-15));

    Rng rng(1234);
    std::vector<double> qs;
    std::vector<double> flat;
    for (int i = 0; i < 30; ++i) {
        qs.push_back(10 + 2 * (i % 5));
        flat.push_back(5.0 + 0.1 * normal(rng));
    }
    CHECK(std::abs(pearson(qs, flat)) < 0.5);

    const std::vector<double> two{1, 2};
    CHECK_THROWS_AS(pearson(two, two), ValidationError);
    const std::vector<double> constant{3, 3, 3};
    const std::vector<double> three{1, 2, 3};
    CHECK_THROWS_AS(pearson(three, constant), DataQualityError);
    CHECK_THROWS_AS(pearson(three, x), ValidationError);
}

TEST_CASE("component sum consistency", "[powerlog][consistency]") {
    PowerTrace t;
    for (int s = 0; s < 10; ++s) {
        t.add({static_cast<double>(s), "total", 5000});
        t.add({static_cast<double>(s), "trap", 2000});
        t.add({static_cast<double>(s), "cooling", 2500});
    }
    const auto ok = component_consistency(t, job(0, 10));
    REQUIRE(ok.has_value());
    CHECK(ok->consistent);
    CHECK(ok->total_kj == 50.0);
    CHECK(ok->component_sum_kj == 45.0);

    for (int s = 0; s < 10; ++s) {
        t.add({static_cast<double>(s), "pumps", 2000});
    }
    Captured captured;
    const auto bad = component_consistency(t, job(0, 10));
    REQUIRE(bad.has_value());
    CHECK_FALSE(bad->consistent);
    CHECK_FALSE(captured.messages.empty());

    CHECK_FALSE(component_consistency(constant_trace(1, 5, "trap"), job(0, 5)).has_value());
}

TEST_CASE("job energy table feeds the linear fit", "[powerlog][table]") {
    PowerTrace t;
    std::vector<JobRecord> jobs;
    double clock = 0.0;
    for (std::size_t q : {10, 12, 14, 10}) {
        const double duration = 10.0 * static_cast<double>(q);
        jobs.push_back({fmt::format("job{}", jobs.size()), clock, clock + duration, q, 500, 25});
        clock += duration;
    }
    for (int s = 0; s < static_cast<int>(clock) + 1; ++s) {
        t.add({static_cast<double>(s), "total", 5000});
        t.add({static_cast<double>(s), "trap", 1000});
    }
    const auto rows = job_energy_table(t, jobs);
    REQUIRE(rows.size() == 8);
    CHECK(rows[0].job_id == "job0");
    CHECK(rows[0].component == "total");
    CHECK(rows[1].component == "trap");
    CHECK(rows[0].energy_kj == 500.0);
    CHECK(rows[0].average_kw == 5.0);
    const auto points = mean_energy_by_qubits(rows, "total");
    REQUIRE(points.size() == 3);
    CHECK(points[0].q == 10);
    CHECK(points[0].energy == 500.0);
    const auto fit = energy::fit_linear(points);
    CHECK_THAT(fit.a, WithinAbs(50.0, 1e-9));
    CHECK_THAT(fit.r_squared, WithinAbs(1.0, 1e-12));
}
