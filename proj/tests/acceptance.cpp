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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Pass criterion numbers to run a subset.

#include <agingsim/classical.hpp>
#include <agingsim/knee.hpp>
#include <agingsim/quantum.hpp>
#include <agingsim/rk4.hpp>
#include <agingsim/stability.hpp>
#include <agingsim/sweep.hpp>

#include "support.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace {

using namespace agingsim;
using sweep::AxisName;
using sweep::Regime;

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

sweep::SweepSpec make_spec(Regime regime, const SystemParams& fixed, sweep::Axis axis1,
                           std::optional<sweep::Axis> axis2 = std::nullopt) {
    sweep::SweepSpec spec;
    spec.regime = regime;
    spec.fixed = fixed;
    spec.axis1 = std::move(axis1);
    spec.axis2 = std::move(axis2);
    return spec;
}

/// Q along axis1 for slice j of a sweep.
std::vector<double> slice_Q(const sweep::SweepResult& r, std::size_t j) {
    const std::size_t n1 = r.provenance.spec.axis1.values.size();
    std::vector<double> q;
    for (std::size_t i = 0; i < n1; ++i) q.push_back(r.rows[j * n1 + i].Q);
    return q;
}

std::vector<std::optional<double>> knees(const sweep::SweepResult& r) {
    std::vector<std::optional<double>> out;
    for (const auto& cp : r.critical_points)
        if (cp.kind == "knee") out.push_back(cp.value);
    return out;
}

/// Quantum p-sweep knee for one parameter point, time step scaled to the fastest rate.
std::optional<double> quantum_knee(const SystemParams& params, const std::vector<double>& ps) {
    auto spec = make_spec(Regime::Quantum, params, {AxisName::p, ps});
    spec.solver.quantum.dt = std::min(5e-3, 0.04 / std::max({params.J, params.V, params.a, params.b, params.kappa}));
    return knees(sweep::run_sweep(spec)).front();
}

std::string show(const std::optional<double>& v) { return v ? fmt("%.2f", *v) : std::string("none"); }

// ---------------------------------------------------------------------------

Verdict threshold_identity() {
    const auto P = presets::classical(2.6);
    const double pc = stability::p_cmin(P);
    auto max_re = [&](double p) { return stability::analyze(P.with_p(p)).max_real_part; };
    const double at = max_re(pc), below = max_re(pc - 1e-3), above = max_re(pc + 1e-3);
    const bool pass = std::abs(pc - 0.6406) <= 1e-4 && std::abs(pc - 0.64) <= 0.01 && std::abs(at) <= 1e-3 &&
                      below > 0.0 && above < 0.0;
    return {pass, fmt("p_cmin=%.6f, max Re at p_cmin %.2e, at -1e-3 %.2e, at +1e-3 %.2e", pc, at, below, above)};
}

Verdict uncoupled_limit() {
    const auto P = presets::classical(1e-9);
    const double expected = P.a * (P.b + 2.0 * P.V) / (2.0 * P.V * (P.a + P.b));
    const double pc = stability::p_cmin(P);
    return {std::abs(pc - expected) <= 1e-6 && std::abs(expected - 0.71111) <= 1e-5,
            fmt("p_cmin=%.9f, a(b+2V)/(2V(a+b))=%.9f", pc, expected)};
}

Verdict routh_hurwitz_agreement() {
    testing::Gen gen(20260);
    int disagreements = 0;
    double closest = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 1000; ++k) {
        SystemParams P = gen.classical_params();
        // Every other draw sits within 0.01 of its own threshold.
        if (k % 2 == 1) {
            const double shift = gen.uniform(-0.01, 0.01);
            try {
                const double pc = stability::p_cmin(P) + shift;
                if (pc > 0.0 && pc < 1.0) P.p = pc;
            } catch (const Error&) {
            }
        }
        const bool rh = stability::routh_hurwitz_stable(stability::characteristic_coefficients(P));
        Eigen::ComplexEigenSolver<stability::Matrix4> solver(stability::build_jacobian(P), false);
        std::vector<complex> ev(solver.eigenvalues().begin(), solver.eigenvalues().end());
        const auto atom = std::min_element(ev.begin(), ev.end(), [&](complex x, complex y) {
            return std::abs(x + P.J) < std::abs(y + P.J);
        });
        ev.erase(atom);
        double max_re = -std::numeric_limits<double>::infinity();
        for (complex z : ev) max_re = std::max(max_re, z.real());
        closest = std::min(closest, std::abs(max_re));
        if (rh != (max_re < 0.0)) ++disagreements;
    }
    return {disagreements == 0, fmt("%d disagreements in 1000 draws (smallest |max Re| %.2e)", disagreements, closest)};
}

Verdict classical_family() {
    const std::vector<double> gs{0.0, 2.6, 3.2, 3.6};
    const auto ps = sweep::linspace_step(0.0, 0.01, 0.9);
    const auto r = sweep::run_sweep(
        make_spec(Regime::Classical, presets::classical(), {AxisName::p, ps}, sweep::Axis{AxisName::g, gs}));
    const auto pc = sweep::extract_classical_pc(r);

    bool monotone = true;
    double worst_rise = 0.0;
    for (std::size_t j = 0; j < gs.size(); ++j) {
        const auto q = slice_Q(r, j);
        for (std::size_t i = 1; i < q.size(); ++i) {
            worst_rise = std::max(worst_rise, q[i] - q[i - 1]);
            if (!(q[i] <= q[i - 1] + 1e-6)) monotone = false;
        }
    }
    double smallest = 1.0;
    for (double g : gs) smallest = std::min(smallest, stability::p_cmin(presets::classical(g)));
    const auto q0 = slice_Q(r, 0);
    double worst_gap = 0.0;
    for (std::size_t j = 1; j < gs.size(); ++j) {
        const auto q = slice_Q(r, j);
        for (std::size_t i = 0; i < ps.size() && ps[i] < smallest; ++i)
            worst_gap = std::max(worst_gap, std::abs(q[i] - q0[i]) / q0[i]);
    }
    bool decreasing = true;
    std::string pcs;
    for (std::size_t j = 0; j < pc.size(); ++j) {
        pcs += (j ? "/" : "") + show(pc[j].value);
        if (!pc[j].value || (j > 0 && (!pc[j - 1].value || !(*pc[j].value < *pc[j - 1].value)))) decreasing = false;
    }
    return {monotone && worst_gap <= 0.01 && decreasing,
            fmt("largest rise %.1e, max relative gap below p=%.3f is %.2e, p_c=%s", worst_rise, smallest, worst_gap,
                pcs.c_str())};
}

Verdict reduced_solver() {
    double worst = 0.0, spread = 0.0;
    for (double p : {0.1, 0.2, 0.3, 0.4, 0.5}) {
        std::optional<classical::ReducedSolution> first;
        for (double g : {2.6, 3.2, 3.6}) {
            const auto P = presets::classical(g, p);
            const auto red = classical::reduced_steady_solve(P);
            const auto full = classical::run_to_steady(sweep::InitialCondition{}.classical, P);
            const double A = std::abs(full.final_state.A), I = std::abs(full.final_state.I);
            worst = std::max({worst, std::abs(std::abs(red.A) - A) / A, std::abs(std::abs(red.I) - I) / I});
            if (!first) first = red;
            spread = std::max({spread, std::abs(red.A - first->A) / std::abs(first->A),
                               std::abs(red.I - first->I) / std::abs(first->I)});
        }
    }
    const double eps = std::numeric_limits<double>::epsilon();
    return {worst <= 0.02 && spread <= 4.0 * eps,
            fmt("max relative amplitude error %.2e, max relative spread over g %.1e", worst, spread)};
}

struct InvariantTally {
    double trace_drift = 0.0;
    double min_eigenvalue = std::numeric_limits<double>::infinity();
    bool hermitian = true;

    template <int Dim>
    void add(const DensityMatrix<Dim>& rho) {
        trace_drift = std::max(trace_drift, std::abs(rho.trace() - 1.0));
        min_eigenvalue = std::min(min_eigenvalue, rho.min_eigenvalue());
        const auto m = rho.full();
        if (m != m.adjoint()) hermitian = false;
    }
};

Verdict quantum_invariants() {
    InvariantTally tally;
    const double dt = 5e-3, t_max = 400.0;
    int trajectories = 0;
    for (double g : {0.0, 0.03}) {
        for (double p : sweep::linspace_step(0.0, 0.05, 0.6)) {
            const auto P = presets::quantum(g, p);
            const auto rhs = [&P](const quantum::QuantumState<>& s) { return quantum::FullModel<>::rhs(s, P); };
            auto s = quantum::QuantumState<>::coherent(1.0);
            for (long step = 1; step <= std::lround(t_max / dt); ++step) {
                s = rk4_step(s, dt, rhs);
                if (step % 10 == 0) {
                    tally.add(s.atom);
                    tally.add(s.active);
                    tally.add(s.inactive);
                }
            }
            ++trajectories;
        }
    }
    double worst_halving = 0.0;
    quantum::SteadyOptions coarse{.dt = 5e-3, .t_max = 5000.0, .tolerance = 1e-12, .throw_on_failure = true};
    quantum::SteadyOptions fine = coarse;
    fine.dt = 2.5e-3;
    for (double g : {0.0, 0.03}) {
        for (double p : {0.0, 0.3, 0.6}) {
            const auto P = presets::quantum(g, p);
            const auto init = quantum::QuantumState<>::coherent(1.0);
            const double n1 = quantum::mean_boson_number(quantum::steady_state(init, P, coarse).state, P);
            const double n2 = quantum::mean_boson_number(quantum::steady_state(init, P, fine).state, P);
            worst_halving = std::max(worst_halving, std::abs(n1 - n2) / n2);
        }
    }
    return {tally.trace_drift < 1e-6 && tally.min_eigenvalue > -1e-6 && tally.hermitian && worst_halving < 1e-6,
            fmt("%d trajectories: trace drift %.1e, min eigenvalue %.1e, hermitian %s; step halving %.1e",
                trajectories, tally.trace_drift, tally.min_eigenvalue, tally.hermitian ? "exact" : "broken",
                worst_halving)};
}

Verdict analytic_fock() {
    const auto P = presets::quantum(0.03);
    const auto knee = quantum_knee(P, sweep::linspace_step(0.0, 0.01, 0.6));
    if (!knee) return {false, "no knee detected at g=0.03"};
    double worst = 0.0, sum_error = 0.0;
    int points = 0;
    const quantum::SteadyOptions opts{.dt = 5e-3, .t_max = 5000.0, .tolerance = 1e-12, .throw_on_failure = true};
    for (double p : {0.4, 0.45, 0.5, 0.55, 0.6}) {
        if (!(p > *knee)) continue;
        const auto Pp = P.with_p(p);
        const auto r = quantum::steady_state(quantum::QuantumState<>::coherent(1.0), Pp, opts);
        const auto [active, inactive] = quantum::aging_fock_analytic(Pp);
        double sa = 0.0, si = 0.0;
        for (int n = 0; n < kFockDim; ++n) {
            worst = std::max(worst, std::abs(r.state.active.population(n) - active.populations[n]));
            worst = std::max(worst, std::abs(r.state.inactive.population(n) - (n == 0 ? 1.0 : 0.0)));
            worst = std::max(worst, std::abs(inactive.populations[n] - (n == 0 ? 1.0 : 0.0)));
            sa += active.populations[n];
            si += inactive.populations[n];
        }
        sum_error = std::max({sum_error, std::abs(sa - 1.0), std::abs(si - 1.0)});
        ++points;
    }
    return {points > 0 && worst <= 1e-6 && sum_error <= 1e-12,
            fmt("knee %.2f, %d points beyond it: max population error %.1e, max |sum-1| %.1e", *knee, points, worst,
                sum_error)};
}

Verdict adiabatic_agreement() {
    const auto P = presets::quantum(0.03);
    const sweep::Axis ps{AxisName::p, sweep::linspace_step(0.0, 0.02, 0.6)};
    // Relaxation next to the knee needs a longer horizon than the default.
    auto full_spec = make_spec(Regime::Quantum, P, ps), reduced_spec = make_spec(Regime::Adiabatic, P, ps);
    full_spec.solver.quantum.t_max = reduced_spec.solver.quantum.t_max = 20000.0;
    const auto full = sweep::run_sweep(full_spec);
    const auto reduced = sweep::run_sweep(reduced_spec);
    double worst = 0.0, at = 0.0;
    bool converged = true;
    for (std::size_t i = 0; i < full.rows.size(); ++i) {
        converged = converged && full.rows[i].converged && reduced.rows[i].converged;
        const double gap = std::abs(reduced.rows[i].Q - full.rows[i].Q) / full.rows[i].Q;
        if (!(gap <= worst)) {
            worst = gap;
            at = full.rows[i].x1;
        }
    }
    return {converged && worst <= 0.02, fmt("max relative Q gap %.2e at p=%.2f over %zu points%s", worst, at,
                                            full.rows.size(), converged ? "" : ", unconverged points")};
}

Verdict knee_trends() {
    const auto ps = sweep::linspace_step(0.0, 0.01, 0.6);
    std::vector<std::optional<double>> by_g, by_J;
    for (double g : sweep::linspace_step(0.0, 0.005, 0.045)) by_g.push_back(quantum_knee(presets::quantum(g), ps));
    for (double J : {7.5, 10.0, 12.5, 15.0, 20.0, 25.0, 30.0, 40.0, 50.0, 60.0}) {
        auto P = presets::quantum(0.03);
        P.J = J;
        by_J.push_back(quantum_knee(P, ps));
    }
    auto all = [](const auto& v) { return std::all_of(v.begin(), v.end(), [](const auto& x) { return x.has_value(); }); };
    auto list = [](const auto& v) {
        std::string s;
        for (const auto& x : v) s += (s.empty() ? "" : " ") + show(x);
        return s;
    };
    const std::string detail = "knee vs g: " + list(by_g) + "; knee vs J: " + list(by_J);
    if (!all(by_g) || !all(by_J)) return {false, detail};

    const double uncoupled = *by_g.front(), step = 0.01;
    bool g_ok = *by_g.back() < *by_g.front();
    for (std::size_t i = 1; i < by_g.size(); ++i) g_ok = g_ok && *by_g[i] <= *by_g[i - 1];
    bool J_ok = std::abs(*by_J.back() - uncoupled) < std::abs(*by_J.front() - uncoupled);
    for (std::size_t i = 1; i < by_J.size(); ++i) J_ok = J_ok && *by_J[i] >= *by_J[i - 1];
    for (const auto& k : by_J) J_ok = J_ok && *k <= uncoupled + step;
    return {g_ok && J_ok, detail};
}

Verdict classical_quantum_correspondence() {
    constexpr int Dim = 80;
    // The top Fock levels lose bosons at a rate near 2 V n, so the step is far below the default.
    const double window = 1.0, t_max = 10.0, dt = 2e-5;
    double worst = 0.0, longest = 0.0;
    std::string where;
    for (double alpha : {0.5, 1.0, 2.0}) {
        const auto ic = classical::ClassicalState::excited_with(alpha, alpha);
        const double baseline = classical::run_to_steady(ic, presets::classical(3.6)).R_magnitude;
        for (double p : sweep::linspace_step(0.0, 0.05, 0.9)) {
            const auto P = presets::classical(3.6, p);
            const auto cl = classical::run_to_steady(ic, P);
            // Integrate window by window until the mean |R| over the second half of a
            // window moves by less than 1e-3 of the baseline.
            auto state = quantum::QuantumState<Dim>::coherent(alpha);
            double Rq = std::numeric_limits<double>::quiet_NaN(), t = 0.0;
            while (t < t_max) {
                const auto ev = quantum::evolve<quantum::FullModel<Dim>>(state, P, window, dt, 500);
                state = ev.final_state;
                t += window;
                double sum = 0.0;
                int count = 0;
                for (const auto& o : ev.series) {
                    if (o.t < 0.5 * window) continue;
                    sum += std::abs(P.q() * o.lowering_active + P.p * o.lowering_inactive);
                    ++count;
                }
                const double previous = Rq;
                Rq = sum / count;
                if (std::abs(Rq - previous) < 1e-3 * baseline) break;
            }
            longest = std::max(longest, t);
            const bool aging = cl.kind == classical::SteadyKind::AgingState;
            const double err = aging ? Rq / baseline : std::abs(Rq - cl.R_magnitude) / cl.R_magnitude;
            if (!(err <= worst)) {
                worst = err;
                where = fmt("alpha0=%.1f p=%.2f (classical %.4f, quantum %.4f)", alpha, p, cl.R_magnitude, Rq);
            }
        }
    }
    return {worst <= 0.05,
            fmt("max relative |R| deviation %.2e at %s; longest run t=%.0f", worst, where.c_str(), longest)};
}

/// Minimizer of a sampled curve: parabola through the smallest sample and its neighbours.
double refined_minimizer(const std::vector<double>& x, const std::vector<double>& y, std::size_t k) {
    const double den = y[k - 1] - 2.0 * y[k] + y[k + 1];
    if (!(den > 0.0)) return x[k];
    return x[k] - 0.5 * (x[k + 1] - x[k]) * (y[k + 1] - y[k - 1]) / den;
}

Verdict g_V_structure() {
    // Classical (g, V) plane at p = 0.6.
    const auto gs = sweep::linspace_step(0.0, 0.25, 5.0), Vs = sweep::linspace_step(100.0, 20.0, 500.0);
    auto grid_spec = make_spec(Regime::Classical, presets::classical(0.0, 0.6), {AxisName::g, gs},
                               sweep::Axis{AxisName::V, Vs});
    // Cells on the boundary sit next to the threshold and decay slowly.
    grid_spec.solver.classical.max_doublings = 7;
    const auto grid = sweep::run_sweep(grid_spec);
    const std::size_t n1 = gs.size(), n2 = Vs.size();
    std::vector<int> zero(n1 * n2), seen(n1 * n2, 0);
    std::size_t zeros = 0, unresolved = 0, start = 0;
    for (std::size_t r = 0; r < grid.rows.size(); ++r) {
        zero[r] = grid.rows[r].status == "aging";
        if (grid.rows[r].status != "aging" && grid.rows[r].status != "oscillatory") ++unresolved;
        if (zero[r] && zeros++ == 0) start = r;
    }
    std::size_t reached = 0;
    double boundary_min = std::numeric_limits<double>::infinity();
    if (zeros > 0) {
        std::vector<std::size_t> stack{start};
        seen[start] = 1;
        while (!stack.empty()) {
            const std::size_t r = stack.back();
            stack.pop_back();
            ++reached;
            const std::size_t i = r % n1, j = r / n1;
            std::vector<std::size_t> nb;
            if (i > 0) nb.push_back(r - 1);
            if (i + 1 < n1) nb.push_back(r + 1);
            if (j > 0) nb.push_back(r - n1);
            if (j + 1 < n2) nb.push_back(r + n1);
            for (std::size_t s : nb) {
                if (!zero[s]) {
                    boundary_min = std::min(boundary_min, grid.rows[s].Q);
                } else if (!seen[s]) {
                    seen[s] = 1;
                    stack.push_back(s);
                }
            }
        }
    }
    const bool classical_ok =
        zeros > 0 && zeros < zero.size() && reached == zeros && unresolved == 0 && boundary_min >= 0.1;

    // Quantum Q(V) at p = 0.32.
    const auto V = sweep::linspace_step(0.25, 0.25, 8.0);
    const auto curves = sweep::run_sweep(make_spec(Regime::Quantum, presets::quantum(0.0, 0.32), {AxisName::V, V},
                                                   sweep::Axis{AxisName::g, {0.0, 0.03}}));
    double minimizer[2] = {0.0, 0.0};
    bool dip = true;
    for (std::size_t j = 0; j < 2; ++j) {
        const auto q = slice_Q(curves, j);
        const auto k = static_cast<std::size_t>(std::min_element(q.begin(), q.end()) - q.begin());
        if (k == 0 || k + 1 == q.size()) {
            dip = false;
            minimizer[j] = V[k];
            continue;
        }
        dip = dip && q.front() > q[k] && q.back() > q[k];
        minimizer[j] = refined_minimizer(V, q, k);
    }
    const bool quantum_ok = dip && minimizer[1] > minimizer[0];

    return {classical_ok && quantum_ok,
            fmt("classical: %zu/%zu aging cells, %zu connected, %zu unresolved, smallest Q next to the region %.3f; "
                "quantum: minimizer V=%.3f (g=0), V=%.3f (g=0.03)%s",
                zeros, zero.size(), reached, unresolved, boundary_min, minimizer[0], minimizer[1],
                dip ? "" : ", no interior minimum")};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> run;
    double budget_seconds;  ///< 0 when only an order of magnitude is set
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "threshold formula identity", threshold_identity, 1.0},
        {2, "uncoupled threshold limit", uncoupled_limit, 1.0},
        {3, "Routh-Hurwitz matches eigenvalues", routh_hurwitz_agreement, 10.0},
        {4, "classical Q_c curve family", classical_family, 0.0},
        {5, "reduced steady solver", reduced_solver, 60.0},
        {6, "quantum invariants", quantum_invariants, 0.0},
        {7, "analytic aging Fock distribution", analytic_fock, 60.0},
        {8, "adiabatic elimination", adiabatic_agreement, 0.0},
        {9, "knee trends in g and J", knee_trends, 0.0},
        {10, "classical-quantum correspondence", classical_quantum_correspondence, 0.0},
        {11, "g-V plane structure", g_V_structure, 0.0},
    };
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : criteria) {
        if (!wanted.empty() && !wanted.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_seconds > 0.0 && seconds > c.budget_seconds) {
            v.pass = false;
            v.detail += fmt(" [over the %.0f s budget]", c.budget_seconds);
        }
        if (!v.pass) ++failures;
        std::printf("%s AC%-2d %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), seconds);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
