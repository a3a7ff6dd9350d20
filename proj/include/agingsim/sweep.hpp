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

#pragma once

#include <agingsim/classical.hpp>
#include <agingsim/knee.hpp>
#include <agingsim/params.hpp>
#include <agingsim/quantum.hpp>
#include <agingsim/stability.hpp>

#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace agingsim::sweep {

inline constexpr const char* kVersion = "agingsim 1.0.0";

enum class Regime { Classical, Quantum, Adiabatic };
enum class AxisName { p, g, J, V };

constexpr const char* to_string(Regime r) {
    switch (r) {
    case Regime::Classical: return "classical";
    case Regime::Quantum: return "quantum";
    case Regime::Adiabatic: return "adiabatic";
    }
    return "unknown";
}

constexpr const char* to_string(AxisName a) {
    switch (a) {
    case AxisName::p: return "p";
    case AxisName::g: return "g";
    case AxisName::J: return "J";
    case AxisName::V: return "V";
    }
    return "?";
}

inline void set_axis(SystemParams& params, AxisName name, double value) {
    switch (name) {
    case AxisName::p: params.p = value; break;
    case AxisName::g: params.g = value; break;
    case AxisName::J: params.J = value; break;
    case AxisName::V: params.V = value; break;
    }
}

struct Axis {
    AxisName name = AxisName::p;
    std::vector<double> values;
};

/// Evenly spaced values start, start+step, ... up to stop (inclusive within
/// half a step). Values are computed as start + i*step, not accumulated.
inline std::vector<double> linspace_step(double start, double step, double stop) {
    if (!(step > 0.0) || stop < start) throw Error(ErrorKind::InvalidArgument, "bad range");
    std::vector<double> v;
    const auto count = static_cast<long>(std::floor((stop - start) / step + 0.5));
    for (long i = 0; i <= count; ++i) v.push_back(start + static_cast<double>(i) * step);
    return v;
}

/// Initial state shared by every grid point and its baseline.
struct InitialCondition {
    std::string name = "small";
    classical::ClassicalState classical = classical::ClassicalState::excited_with(0.01, 0.01);
    complex alpha{1.0, 0.0};  ///< coherent amplitude of both oscillators (quantum regimes)
    bool atom_excited = true;
};

struct SolverKnobs {
    classical::RunOptions classical{};
    quantum::SteadyOptions quantum{.dt = 5e-3, .t_max = 2000.0, .tolerance = 1e-9, .throw_on_failure = false};
};

struct SweepSpec {
    Regime regime = Regime::Classical;
    SystemParams fixed;
    Axis axis1;
    std::optional<Axis> axis2;
    InitialCondition initial;
    SolverKnobs solver;
    KneeOptions knee;
    int threads = 1;
};

struct SweepRow {
    double x1 = 0.0;
    double x2 = std::numeric_limits<double>::quiet_NaN();  ///< NaN without a second axis
    SystemParams params;
    double Q = std::numeric_limits<double>::quiet_NaN();
    double R = 0.0;             ///< |R| at this point (terminal-window mean, classical)
    double baseline = 0.0;      ///< |R(0)| (classical) or n0(0) (quantum) of the slice
    double mean_boson = 0.0;    ///< quantum regimes only
    double amp_active = 0.0;    ///< |A| or |Tr(a rho_A)|
    double amp_inactive = 0.0;  ///< |I| or |Tr(a rho_I)|
    std::string status;         ///< aging/oscillatory/unresolved, converged/not_converged, or error
    bool converged = false;
    std::string error;
};

/// Critical value extracted along the p axis of one slice.
struct CriticalPoint {
    std::string kind;  ///< "p_c", "p_cmin", or "knee"
    double slice = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> value;
    double confidence = std::numeric_limits<double>::quiet_NaN();
    std::string note;
};

struct Provenance {
    std::string version = kVersion;
    SweepSpec spec;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<CriticalPoint> critical_points;
    Provenance provenance;

    bool has_axis2() const { return provenance.spec.axis2.has_value(); }
};

namespace detail {

inline void validate_axis(const Axis& axis, int N) {
    if (axis.values.empty()) throw Error(ErrorKind::InvalidArgument, "empty axis");
    for (std::size_t i = 1; i < axis.values.size(); ++i)
        if (!(axis.values[i] > axis.values[i - 1]))
            throw Error(ErrorKind::InvalidArgument, std::string("axis ") + to_string(axis.name) +
                                                        " must be strictly increasing");
    if (axis.name == AxisName::p)
        for (double p : axis.values)
            if (std::abs(p * N - std::round(p * N)) > 1e-9)
                throw Error(ErrorKind::InvalidArgument,
                            "p = " + std::to_string(p) + " is not on the 1/N grid");
}

/// Per-point solver output before normalization.
struct PointSolution {
    double order = 0.0;  ///< |R| (classical) or n0 (quantum)
    bool aging = false;
    double R = 0.0;
    double amp_active = 0.0, amp_inactive = 0.0;
    double mean_boson = 0.0;
    bool converged = false;
    std::string status;
};

inline PointSolution solve_point(const SweepSpec& spec, const SystemParams& params) {
    PointSolution s;
    if (spec.regime == Regime::Classical) {
        const auto out = classical::run_to_steady(spec.initial.classical, params, spec.solver.classical);
        s.order = out.R_magnitude;
        s.R = out.R_magnitude;
        s.aging = out.kind == classical::SteadyKind::AgingState;
        s.amp_active = std::abs(out.final_state.A);
        s.amp_inactive = std::abs(out.final_state.I);
        s.converged = out.kind != classical::SteadyKind::Unresolved;
        s.status = classical::to_string(out.kind);
        return s;
    }
    auto fill = [&](const auto& result) {
        s.mean_boson = quantum::mean_boson_number(result.state, params);
        s.order = s.mean_boson;
        s.R = std::abs(quantum::mean_amplitude(result.state, params));
        s.amp_active = std::abs(expect_lowering(result.state.active));
        s.amp_inactive = std::abs(expect_lowering(result.state.inactive));
        s.converged = result.converged;
        s.status = result.converged ? "converged" : "not_converged";
    };
    const auto init = quantum::QuantumState<>::coherent(spec.initial.alpha, spec.initial.atom_excited);
    if (spec.regime == Regime::Quantum) {
        fill(quantum::steady_state<quantum::FullModel<>>(init, params, spec.solver.quantum));
    } else {
        quantum::require_adiabatic_regime(params);
        fill(quantum::steady_state<quantum::AdiabaticModel<>>(quantum::OscillatorPair<>::from(init), params,
                                                              spec.solver.quantum));
    }
    return s;
}

/// Runs `count` independent jobs on up to `threads` workers.
template <class Job>
void parallel_for(std::size_t count, int threads, const Job& job) {
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, count); ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) job(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace detail

/// Smallest grid p whose Q_c and every larger p's Q_c sit below the aging
/// threshold, per slice of the second axis.
inline std::vector<CriticalPoint> extract_classical_pc(const SweepResult& result) {
    const auto& spec = result.provenance.spec;
    if (spec.regime != Regime::Classical || spec.axis1.name != AxisName::p)
        throw Error(ErrorKind::InvalidArgument, "classical p_c extraction needs a classical sweep along p");
    std::map<double, std::vector<const SweepRow*>> slices;
    for (const auto& row : result.rows) slices[result.has_axis2() ? row.x2 : 0.0].push_back(&row);

    std::vector<CriticalPoint> out;
    for (const auto& [slice, rows] : slices) {
        CriticalPoint cp;
        cp.kind = "p_c";
        cp.slice = result.has_axis2() ? slice : std::numeric_limits<double>::quiet_NaN();
        std::optional<double> candidate;
        for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
            const SweepRow& row = **it;
            const double threshold = classical::kAgingAmplitude / row.baseline;
            if (!(row.Q < threshold)) break;
            candidate = row.x1;
        }
        if (candidate) cp.value = candidate;
        else cp.note = std::string(to_string(ErrorKind::NoTransition)) + ": no aging transition on the grid";
        out.push_back(cp);
    }
    return out;
}

/// Closed-form thresholds along one axis of a parameter template.
struct ThresholdPoint {
    double value = 0.0;
    std::optional<double> p_cmin;
    std::string error;
};

inline std::vector<ThresholdPoint> threshold_curve(const SystemParams& base, AxisName axis,
                                                   const std::vector<double>& values) {
    if (axis == AxisName::p) throw Error(ErrorKind::InvalidArgument, "threshold axis must be g, J or V");
    std::vector<ThresholdPoint> out;
    for (double v : values) {
        SystemParams params = base;
        set_axis(params, axis, v);
        ThresholdPoint pt;
        pt.value = v;
        try {
            pt.p_cmin = stability::p_cmin(params);
        } catch (const Error& e) {
            pt.error = e.what();
        }
        out.push_back(pt);
    }
    return out;
}

/// Evaluates every grid point of the spec, normalizing by a p = 0 baseline
/// solved once per slice of the non-p axes.
inline SweepResult run_sweep(const SweepSpec& spec) {
    validate_params(spec.fixed);
    detail::validate_axis(spec.axis1, spec.fixed.N);
    if (spec.axis2) {
        detail::validate_axis(*spec.axis2, spec.fixed.N);
        if (spec.axis2->name == spec.axis1.name)
            throw Error(ErrorKind::InvalidArgument, "the two axes must differ");
    }

    const std::size_t n1 = spec.axis1.values.size();
    const std::size_t n2 = spec.axis2 ? spec.axis2->values.size() : 1;
    const bool p_on_axis1 = spec.axis1.name == AxisName::p;
    const bool p_on_axis2 = spec.axis2 && spec.axis2->name == AxisName::p;

    SweepResult result;
    result.provenance.spec = spec;
    result.rows.resize(n1 * n2);
    for (std::size_t j = 0; j < n2; ++j) {
        for (std::size_t i = 0; i < n1; ++i) {
            SweepRow& row = result.rows[j * n1 + i];
            row.x1 = spec.axis1.values[i];
            row.params = spec.fixed;
            set_axis(row.params, spec.axis1.name, row.x1);
            if (spec.axis2) {
                row.x2 = spec.axis2->values[j];
                set_axis(row.params, spec.axis2->name, row.x2);
            }
            validate_params(row.params);
        }
    }

    // Baseline slices: one per value of the non-p axes.
    auto slice_of = [&](std::size_t row_index) -> std::size_t {
        const std::size_t i = row_index % n1, j = row_index / n1;
        if (p_on_axis1) return j;
        if (p_on_axis2) return i;
        return row_index;
    };
    const std::size_t n_slices = p_on_axis1 ? n2 : (p_on_axis2 ? n1 : n1 * n2);
    std::vector<SystemParams> slice_params(n_slices);
    for (std::size_t r = 0; r < result.rows.size(); ++r) slice_params[slice_of(r)] = result.rows[r].params.with_p(0.0);

    std::vector<detail::PointSolution> baselines(n_slices);
    std::vector<std::string> baseline_errors(n_slices);
    detail::parallel_for(n_slices, spec.threads, [&](std::size_t s) {
        try {
            baselines[s] = detail::solve_point(spec, slice_params[s]);
        } catch (const std::exception& e) {
            baseline_errors[s] = e.what();
        }
    });
    for (std::size_t s = 0; s < n_slices; ++s) {
        if (!baseline_errors[s].empty())
            throw Error(ErrorKind::BaselineDead, "baseline solve failed: " + baseline_errors[s]);
        if (baselines[s].aging || !(baselines[s].order > 0.0))
            throw Error(ErrorKind::BaselineDead, "the p=0 baseline has no oscillation to normalize by");
    }

    detail::parallel_for(result.rows.size(), spec.threads, [&](std::size_t r) {
        SweepRow& row = result.rows[r];
        const detail::PointSolution& base = baselines[slice_of(r)];
        row.baseline = base.order;
        try {
            const detail::PointSolution sol = row.params.p == 0.0 ? base : detail::solve_point(spec, row.params);
            row.Q = sol.aging ? 0.0 : sol.order / base.order;
            row.R = sol.R;
            row.mean_boson = sol.mean_boson;
            row.amp_active = sol.amp_active;
            row.amp_inactive = sol.amp_inactive;
            row.converged = sol.converged;
            row.status = sol.status;
        } catch (const std::exception& e) {
            row.status = "error";
            row.error = e.what();
        }
    });

    // Critical points along p.
    if (p_on_axis1) {
        if (spec.regime == Regime::Classical) {
            result.critical_points = extract_classical_pc(result);
            for (std::size_t j = 0; j < n2; ++j) {
                CriticalPoint cp;
                cp.kind = "p_cmin";
                cp.slice = spec.axis2 ? spec.axis2->values[j] : std::numeric_limits<double>::quiet_NaN();
                try {
                    cp.value = stability::p_cmin(result.rows[j * n1].params);
                } catch (const Error& e) {
                    cp.note = e.what();
                }
                result.critical_points.push_back(cp);
            }
        } else {
            for (std::size_t j = 0; j < n2; ++j) {
                CriticalPoint cp;
                cp.kind = "knee";
                cp.slice = spec.axis2 ? spec.axis2->values[j] : std::numeric_limits<double>::quiet_NaN();
                std::vector<CurvePoint> curve;
                for (std::size_t i = 0; i < n1; ++i) {
                    const SweepRow& row = result.rows[j * n1 + i];
                    if (std::isfinite(row.Q)) curve.push_back({row.x1, row.Q});
                }
                try {
                    const KneeFit fit = detect_knee(curve, spec.knee);
                    cp.value = fit.breakpoint;
                    cp.confidence = fit.improvement;
                } catch (const Error& e) {
                    cp.note = e.what();
                }
                result.critical_points.push_back(cp);
            }
        }
    }
    return result;
}

}  // namespace agingsim::sweep
