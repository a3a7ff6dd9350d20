// Copyright 2026 The agingsim Authors
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

#include <agingsim/sweep.hpp>

#include <catch_amalgamated.hpp>

using namespace agingsim;
using namespace agingsim::sweep;

namespace {

ErrorKind error_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::InvalidArgument;
}

SweepSpec classical_p_sweep(std::vector<double> ps, std::vector<double> gs) {
    SweepSpec spec;
    spec.fixed = presets::classical();
    spec.axis1 = {AxisName::p, std::move(ps)};
    spec.axis2 = Axis{AxisName::g, std::move(gs)};
    return spec;
}

bool same_rows(const SweepResult& x, const SweepResult& y) {
    if (x.rows.size() != y.rows.size()) return false;
    for (std::size_t i = 0; i < x.rows.size(); ++i) {
        const auto &a = x.rows[i], &b = y.rows[i];
        if (!(a.x1 == b.x1 && a.Q == b.Q && a.R == b.R && a.amp_active == b.amp_active &&
              a.status == b.status && a.baseline == b.baseline))
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("axis helpers") {
    const auto v = linspace_step(0.0, 0.01, 0.9);
    CHECK(v.size() == 91);
    CHECK(v[64] == 0.64);
    CHECK(error_of([] { linspace_step(0.0, 0.0, 1.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("spec validation") {
    auto spec = classical_p_sweep({0.1, 0.1}, {2.6});
    CHECK(error_of([&] { run_sweep(spec); }) == ErrorKind::InvalidArgument);
    spec = classical_p_sweep({0.1, 0.105}, {2.6});
    CHECK(error_of([&] { run_sweep(spec); }) == ErrorKind::InvalidArgument);
    spec = classical_p_sweep({0.1, 0.2}, {2.6});
    spec.axis2->name = AxisName::p;
    CHECK(error_of([&] { run_sweep(spec); }) == ErrorKind::InvalidArgument);
    spec = classical_p_sweep({}, {2.6});
    CHECK(error_of([&] { run_sweep(spec); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("classical sweep: baseline exactly one, zero after the threshold, p_c per slice") {
    const auto r = run_sweep(classical_p_sweep({0.0, 0.3, 0.6, 0.62, 0.64, 0.66, 0.68, 0.7, 0.72, 0.74}, {0.0, 2.6}));
    REQUIRE(r.rows.size() == 20);
    CHECK(r.rows[0].Q == 1.0);
    CHECK(r.rows[10].Q == 1.0);
    CHECK(r.rows[10].x2 == 2.6);
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        CHECK(r.rows[i].Q >= 0.0);
        CHECK(r.rows[i].Q <= 1.05);
    }
    const auto pc = extract_classical_pc(r);
    REQUIRE(pc.size() == 2);
    REQUIRE(pc[0].value);
    REQUIRE(pc[1].value);
    CHECK(*pc[1].value < *pc[0].value);
    const double step = 0.02;
    CHECK(std::abs(*pc[1].value - 0.64) <= step + 1e-12);
    CHECK(std::abs(*pc[0].value - 0.7111) <= step + 1e-12);
}

TEST_CASE("p_c extraction reports slices without a transition") {
    const auto r = run_sweep(classical_p_sweep({0.0, 0.1, 0.2}, {2.6}));
    const auto pc = extract_classical_pc(r);
    REQUIRE(pc.size() == 1);
    CHECK_FALSE(pc[0].value);
    CHECK(pc[0].note.find("NoTransition") != std::string::npos);
}

TEST_CASE("p_c extraction ignores isolated zeros") {
    SweepResult r;
    r.provenance.spec = classical_p_sweep({0.0, 0.1, 0.2, 0.3}, {2.6});
    r.provenance.spec.axis2.reset();
    const double ps[] = {0.0, 0.1, 0.2, 0.3};
    const double Qs[] = {1.0, 0.0, 0.5, 0.0};
    for (int i = 0; i < 4; ++i) {
        SweepRow row;
        row.x1 = ps[i];
        row.Q = Qs[i];
        row.baseline = 5.0;
        r.rows.push_back(row);
    }
    const auto pc = extract_classical_pc(r);
    CHECK(*pc[0].value == 0.3);
}

TEST_CASE("sweeps are deterministic and thread-count independent") {
    auto spec = classical_p_sweep({0.0, 0.2, 0.5, 0.7}, {2.6, 3.6});
    const auto serial = run_sweep(spec);
    const auto again = run_sweep(spec);
    spec.threads = 3;
    const auto parallel = run_sweep(spec);
    CHECK(same_rows(serial, again));
    CHECK(same_rows(serial, parallel));
}

TEST_CASE("dead baseline fails the sweep") {
    auto spec = classical_p_sweep({0.0, 0.5}, {2.6});
    spec.initial.classical = {};
    CHECK(error_of([&] { run_sweep(spec); }) == ErrorKind::BaselineDead);
}

TEST_CASE("unconverged quantum points are flagged, not fatal") {
    SweepSpec spec;
    spec.regime = Regime::Quantum;
    spec.fixed = presets::quantum(0.03);
    spec.axis1 = {AxisName::p, {0.0, 0.2}};
    spec.solver.quantum.t_max = 5.0;
    const auto r = run_sweep(spec);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[0].Q == 1.0);
    CHECK_FALSE(r.rows[1].converged);
    CHECK(r.rows[1].status == "not_converged");
    CHECK(std::isfinite(r.rows[1].Q));
}

TEST_CASE("adiabatic regime violations fail the baseline") {
    SweepSpec spec;
    spec.regime = Regime::Adiabatic;
    spec.fixed = presets::quantum(0.5, 0.3);
    spec.axis1 = {AxisName::p, {0.0, 0.3}};
    CHECK(error_of([&] { run_sweep(spec); }) == ErrorKind::BaselineDead);
}

TEST_CASE("quantum sweep along V normalizes each point by its own baseline") {
    SweepSpec spec;
    spec.regime = Regime::Adiabatic;
    spec.fixed = presets::quantum(0.03, 0.32);
    spec.axis1 = {AxisName::V, {1.0, 2.0, 4.0}};
    const auto r = run_sweep(spec);
    REQUIRE(r.rows.size() == 3);
    for (const auto& row : r.rows) {
        CHECK(row.error.empty());
        CHECK(row.Q > 0.0);
        CHECK(row.Q <= 1.05);
    }
    CHECK(r.rows[0].baseline != r.rows[2].baseline);
    CHECK(r.critical_points.empty());
}

TEST_CASE("threshold curves") {
    const auto V = threshold_curve(presets::classical(2.6), AxisName::V, {150.0, 200.0, 300.0, 400.0, 600.0});
    for (std::size_t i = 1; i < V.size(); ++i) CHECK(*V[i].p_cmin < *V[i - 1].p_cmin);
    const auto g = threshold_curve(presets::classical(), AxisName::g, {0.5, 1.0, 2.0, 3.0, 4.0});
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(*g[i].p_cmin < *g[i - 1].p_cmin);
    const auto J = threshold_curve(presets::classical(2.6), AxisName::J, {100.0, 200.0, 300.0, 500.0});
    for (std::size_t i = 1; i < J.size(); ++i) CHECK(*J[i].p_cmin > *J[i - 1].p_cmin);
    const auto bad = threshold_curve(presets::classical(), AxisName::g, {2.6, 30.0});
    CHECK(bad[0].p_cmin);
    CHECK_FALSE(bad[1].p_cmin);
    CHECK(bad[1].error.find("RegimeViolation") != std::string::npos);
    CHECK(error_of([] { threshold_curve(presets::classical(), AxisName::p, {0.1}); }) == ErrorKind::InvalidArgument);
}
