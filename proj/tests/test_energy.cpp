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

#include <cmath>

#include "qets/core/error.hpp"
#include "qets/core/random.hpp"
#include "qets/energy/energy.hpp"
#include "qets/mps/mps.hpp"

using namespace qets;
using namespace qets::energy;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<Point> sample_curve(double q0, double q1, double step, auto f) {
    std::vector<Point> pts;
    for (double q = q0; q <= q1 + 1e-9; q += step) {
        pts.push_back({q, f(q)});
    }
    return pts;
}

// Plain bisection on a hand-chosen bracket, independent of the library's
// scan.
double bisect(auto f, double lo, double hi) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((f(lo) < 0) == (f(mid) < 0)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

ScalingFit linear_fit(double a, double b) {
    ScalingFit f;
    f.kind = FitKind::linear;
    f.a = a;
    f.b = b;
    return f;
}

ScalingFit exponential_fit(double amplitude, double base) {
    ScalingFit f;
    f.kind = FitKind::exponential;
    f.a = std::log(base);
    f.b = std::log(amplitude);
    return f;
}

} // namespace

TEST_CASE("e_qpu at Q = 10 with default coefficients", "[energy][qpu]") {
    // ((170 * 1.1e-4 + 35 * 9e-4 + 1.5e-3) * 600 + 10) * 5
    //   = ((0.0187 + 0.0315 + 0.0015) * 600 + 10) * 5 = (31.02 + 10) * 5
    const double hand = 205.10;
    CHECK_THAT(e_qpu({}, 170, 35), WithinAbs(hand, 1e-9));
}

TEST_CASE("e_qpu overhead-only limit", "[energy][qpu]") {
    EnergyModelParams p;
    p.S = 0;
    CHECK(e_qpu(p, 170, 35) == 50.0);
    CHECK(e_qpu(p, 0, 0) == 50.0);
}

TEST_CASE("e_qpu is affine in SQ, TQ and S", "[energy][qpu]") {
    const EnergyModelParams p;
    for (std::uint64_t sq = 10; sq < 200; sq += 37) {
        const double d2 = e_qpu(p, sq + 2, 5) - 2 * e_qpu(p, sq + 1, 5) + e_qpu(p, sq, 5);
        CHECK(std::abs(d2) < 1e-10);
        const double t2 = e_qpu(p, 5, sq + 2) - 2 * e_qpu(p, 5, sq + 1) + e_qpu(p, 5, sq);
        CHECK(std::abs(t2) < 1e-10);
    }
    auto p1 = p;
    auto p2 = p;
    auto p3 = p;
    p1.S = 100;
    p2.S = 200;
    p3.S = 300;
    CHECK(std::abs(e_qpu(p3, 170, 35) - 2 * e_qpu(p2, 170, 35) + e_qpu(p1, 170, 35)) < 1e-10);
}

TEST_CASE("E_qpu second differences over an even grid are zero", "[energy][qpu]") {
    const std::vector<std::size_t> qs{10, 12, 14, 16, 18, 20, 22, 24, 26, 28};
    const auto rows = scaling_table(qs, {}, {});
    const auto d2 = e_qpu_second_differences(rows, {});
    REQUIRE(d2.size() == qs.size() - 2);
    for (std::size_t i = 0; i < d2.size(); ++i) {
        CHECK(d2[i] == 0.0);
        const double rounded =
            rows[i + 2].e_qpu_kj - 2 * rows[i + 1].e_qpu_kj + rows[i].e_qpu_kj;
        CHECK(std::abs(rounded) < 1e-12 * rows[i + 2].e_qpu_kj);
    }

    const std::vector<std::size_t> uneven{10, 12, 16};
    CHECK_THROWS_AS(e_qpu_second_differences(scaling_table(uneven, {}, {}), {}), ValidationError);
}

TEST_CASE("variant multiplier scales the circuit overhead", "[energy][qpu]") {
    const EnergyModelParams p;
    CHECK_THAT(e_qpu(p, 170, 35, 25) - e_qpu(p, 170, 35, 1),
               WithinAbs(24 * p.O_C * p.P_qpu, 1e-9));
}

TEST_CASE("coefficients are validated", "[energy]") {
    EnergyModelParams p;
    p.P_qpu = 0.0;
    CHECK_THROWS_AS(e_qpu(p, 1, 1), ValidationError);
    p = {};
    p.F_gpu = -1.0;
    CHECK_THROWS_AS(e_gpu(p, 10, 1, 1), ValidationError);
    p = {};
    p.T_tq = std::nan("");
    CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("e_gpu at Q = 10", "[energy][gpu]") {
    const double hand = 1024.0 * (680.0 + 280.0) / 3.03e13 * 0.072;
    const auto e = e_gpu({}, 10, 170, 35);
    CHECK_FALSE(e.in_log_space());
    CHECK_THAT(e.value(), WithinRel(hand, 1e-15));
    CHECK_THAT(e.value(), WithinAbs(2.336e-9, 1e-12));
}

TEST_CASE("e_gpu doubles per added qubit at fixed gate counts", "[energy][gpu]") {
    for (std::size_t q = 4; q < 60; ++q) {
        CHECK(e_gpu({}, q + 1, 170, 35).value() == 2.0 * e_gpu({}, q, 170, 35).value());
        CHECK(e_gpu({}, q + 2, 170, 35).value() == 4.0 * e_gpu({}, q, 170, 35).value());
    }
}

TEST_CASE("e_gpu with no gates is zero", "[energy][gpu]") {
    CHECK(e_gpu({}, 20, 0, 0).value() == 0.0);
    CHECK(e_gpu({}, 5000, 0, 0).value() == 0.0);
}

TEST_CASE("e_gpu switches to log space for huge registers", "[energy][gpu]") {
    const auto big = e_gpu({}, 2000, 170, 35);
    CHECK(big.in_log_space());
    CHECK(big.mantissa >= 1.0);
    CHECK(big.mantissa < 10.0);
    CHECK(std::isinf(big.value()));
    const double expected_log =
        2000 * std::log(2.0) + std::log(960.0) - std::log(3.03e13) + std::log(0.072);
    CHECK_THAT(big.log(), WithinRel(expected_log, 1e-12));
    const auto edge = e_gpu({}, gpu_log_space_threshold, 170, 35);
    CHECK_FALSE(edge.in_log_space());
    CHECK_THAT(edge.log(), WithinRel(e_gpu({}, gpu_log_space_threshold + 1, 170, 35).log() -
                                         std::log(2.0),
                                     1e-12));
}

TEST_CASE("fit_linear examples", "[energy][fit]") {
    const auto line = fit_linear(sample_curve(10, 18, 2, [](double q) { return 2 * q + 1; }));
    CHECK_THAT(line.a, WithinAbs(2.0, 1e-12));
    CHECK_THAT(line.b, WithinAbs(1.0, 1e-12));
    CHECK(line.r_squared == 1.0);
    CHECK(line.kind == FitKind::linear);
    CHECK(line.n == 5);
    CHECK(line.q_min == 10);
    CHECK(line.q_max == 18);

    const auto flat = fit_linear(sample_curve(10, 18, 2, [](double) { return 7.0; }));
    CHECK(flat.a == 0.0);
    CHECK(flat.r_squared == 1.0);

    Rng rng(2718);
    const auto noisy = fit_linear(sample_curve(10, 40, 1, [&](double q) {
        return (3.0 * q + 50.0) * (1.0 + 0.01 * normal(rng));
    }));
    CHECK(std::abs(noisy.a - 3.0) / 3.0 < 0.05);
}

TEST_CASE("fit_linear errors and small samples", "[energy][fit]") {
    const std::vector<Point> one{{10, 1.0}};
    CHECK_THROWS_AS(fit_linear(one), ValidationError);
    const std::vector<Point> same_q{{10, 1.0}, {10, 2.0}, {10, 3.0}};
    CHECK_THROWS_AS(fit_linear(same_q), ValidationError);
    const std::vector<Point> two{{10, 1.0}, {12, 2.0}};
    const auto f = fit_linear(two);
    CHECK(std::isnan(f.r_squared));
    CHECK_THAT(f.a, WithinAbs(0.5, 1e-15));
}

TEST_CASE("fit_exponential examples", "[energy][fit]") {
    const auto pure =
        fit_exponential(sample_curve(10, 28, 2, [](double q) { return 3e-12 * std::pow(2.0, q); }));
    CHECK_THAT(pure.base(), WithinAbs(2.0, 1e-10));
    CHECK_THAT(pure.amplitude(), WithinRel(3e-12, 1e-9));
    CHECK_THAT(pure.r_squared, WithinAbs(1.0, 1e-12));

    const auto pts = sample_curve(10, 28, 2, [](double q) { return std::pow(2.0, q); });
    const auto restricted = fit_exponential(pts, 16.0);
    CHECK(restricted.n == 7);
    CHECK(restricted.q_min == 16);

    const auto floor_curve =
        sample_curve(10, 28, 2, [](double q) { return 1e-9 * std::pow(2.0, q) + 5e-4; });
    const auto full = fit_exponential(floor_curve);
    const auto tail = fit_exponential(floor_curve, 16.0);
    CHECK(full.r_squared < tail.r_squared);
}

TEST_CASE("fit_exponential errors", "[energy][fit]") {
    const std::vector<Point> bad{{10, 1.0}, {12, 0.0}, {14, 3.0}};
    CHECK_THROWS_AS(fit_exponential(bad), ValidationError);
    const std::vector<Point> pts{{10, 1.0}, {12, 2.0}, {14, 3.0}};
    CHECK_THROWS_AS(fit_exponential(pts, 13.0), ValidationError);
}

TEST_CASE("fits are scale-equivariant", "[energy][fit]") {
    Rng rng(5);
    std::vector<Point> pts;
    for (double q = 10; q <= 30; q += 2) {
        pts.push_back({q, (0.5 * q + 4.0) * (1.0 + 0.05 * normal(rng))});
    }
    auto scaled = pts;
    for (auto &p : scaled) {
        p.energy *= 7.5;
    }
    const auto a = fit_linear(pts);
    const auto b = fit_linear(scaled);
    CHECK_THAT(b.a, WithinRel(7.5 * a.a, 1e-12));
    CHECK_THAT(b.b, WithinRel(7.5 * a.b, 1e-12));
    CHECK_THAT(b.r_squared, WithinAbs(a.r_squared, 1e-12));

    const auto ea = fit_exponential(pts);
    const auto eb = fit_exponential(scaled);
    CHECK_THAT(eb.a, WithinAbs(ea.a, 1e-12));
    CHECK_THAT(eb.b, WithinAbs(ea.b + std::log(7.5), 1e-12));
    CHECK_THAT(eb.r_squared, WithinAbs(ea.r_squared, 1e-12));
    CHECK_THAT(eb.r_squared_linear_space, WithinAbs(ea.r_squared_linear_space, 1e-12));
}

TEST_CASE("crossover of 10 Q and 0.01 * 2^Q", "[energy][crossover]") {
    const auto lin = linear_fit(10.0, 0.0);
    const auto ex = exponential_fit(0.01, 2.0);
    const double oracle =
        bisect([](double q) { return 0.01 * std::pow(2.0, q) - 10.0 * q; }, 13.0, 14.0);
    const auto q = crossover(lin, ex);
    REQUIRE(q.has_value());
    CHECK_THAT(*q, WithinAbs(oracle, 1e-9));
    CHECK_THAT(*q, WithinAbs(13.7468, 1e-4));
    CHECK(std::abs(lin.evaluate(*q) - ex.evaluate(*q)) <=
          1e-6 * std::max(1.0, lin.evaluate(*q)));
}

TEST_CASE("crossover absent cases", "[energy][crossover]") {
    CHECK_FALSE(crossover(linear_fit(1.0, 0.0), exponential_fit(1.0, 2.0)).has_value());
    CHECK_FALSE(crossover(linear_fit(1000.0, 5.0), exponential_fit(1e-100, 1.01)).has_value());
    const auto late = crossover(linear_fit(1.0, 0.0), exponential_fit(1e-6, 1.12), 100.0);
    CHECK_FALSE(late.has_value());
    CHECK(crossover(linear_fit(1.0, 0.0), exponential_fit(1e-6, 1.12), 200.0).has_value());
    CHECK_THROWS_AS(crossover(exponential_fit(1, 2), exponential_fit(1, 2)), ValidationError);
}

TEST_CASE("crossover from sampled curves", "[energy][crossover]") {
    const auto qpu = fit_linear(sample_curve(10, 20, 2, [](double q) { return 20 * q + 300; }));
    const auto gpu =
        fit_exponential(sample_curve(10, 20, 2, [](double q) { return 1e-6 * std::pow(2.0, q); }));
    const auto q = crossover(qpu, gpu);
    REQUIRE(q.has_value());
    const double oracle = bisect(
        [](double x) { return 1e-6 * std::pow(2.0, x) - (20 * x + 300); }, 25.0, 40.0);
    CHECK_THAT(*q, WithinAbs(oracle, 1e-6));
}

TEST_CASE("scaling table", "[energy][table]") {
    std::vector<std::size_t> qs;
    for (std::size_t q = 10; q <= 28; q += 2) {
        qs.push_back(q);
    }
    const EnergyModelParams params;
    const auto rows = scaling_table(qs, {}, params);
    REQUIRE(rows.size() == qs.size());

    const auto &first = rows.front();
    CHECK(first.q == 10);
    CHECK(first.single_qubit == 170);
    CHECK(first.two_qubit == 35);
    CHECK(first.e_qpu_kj == e_qpu(params, 170, 35));
    CHECK(first.e_gpu_kj.value() == e_gpu(params, 10, 170, 35).value());
    CHECK(first.depth == 4);
    CHECK(first.chi == 16);
    CHECK(first.mps_flops == mps::mps_cost(10, 16, 205).estimated_flops);

    for (std::size_t i = 0; i + 2 < rows.size(); ++i) {
        const double d2 = rows[i + 2].e_qpu_kj - 2 * rows[i + 1].e_qpu_kj + rows[i].e_qpu_kj;
        CHECK(std::abs(d2) < 1e-9);
    }
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const auto ops = [](const ScalingRow &r) {
            return 4.0 * static_cast<double>(r.single_qubit) +
                   8.0 * static_cast<double>(r.two_qubit);
        };
        CHECK_THAT(rows[i + 1].e_gpu_kj.value() / ops(rows[i + 1]),
                   WithinRel(4.0 * rows[i].e_gpu_kj.value() / ops(rows[i]), 1e-15));
    }
}

TEST_CASE("scaling table MPS column grows as Q^4", "[energy][table]") {
    const std::vector<std::size_t> qs{8, 16, 32, 64};
    const auto rows = scaling_table(qs, {}, {});
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        CHECK(rows[i + 1].mps_flops / rows[i].mps_flops == 16.0);
    }
    const std::vector<std::size_t> uneven{10, 20};
    const auto r = scaling_table(uneven, {}, {});
    CHECK(r[1].mps_flops / r[0].mps_flops == 16.0);
    const std::vector<std::size_t> odd{11};
    CHECK_THROWS_AS(scaling_table(odd, {}, {}), ValidationError);
}

TEST_CASE("parameter table prints the default coefficients", "[energy]") {
    const auto rows = parameter_table({});
    REQUIRE(rows.size() == 10);
    const std::vector<std::pair<std::string, std::string>> expected{
        {"P_qpu", "5 kW"},       {"T_sq", "0.00011 s"}, {"T_tq", "0.0009 s"},
        {"SQ_Q", "o(Q^2)"},      {"TQ_Q", "o(Q^2)"},    {"S", "600"},
        {"O_S", "0.0015 s"},     {"O_C", "10 s"},       {"P_gpu", "0.072 kW"},
        {"F_gpu", "3.03e+13 FLOPS"}};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].symbol == expected[i].first);
        CHECK(rows[i].value == expected[i].second);
    }
}
