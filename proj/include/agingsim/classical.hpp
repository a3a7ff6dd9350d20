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

#include <agingsim/params.hpp>
#include <agingsim/rk4.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace agingsim::classical {

/// Mean-field variables of the classical regime: atom coherence and
/// population plus one representative amplitude per oscillator group.
struct ClassicalState {
    complex sigma_minus{};
    double sigma_ee = 0.0;
    complex A{};
    complex I{};

    /// Atom excited, no coherence, both groups at the given amplitudes.
    static ClassicalState excited_with(complex A0, complex I0) {
        return {complex{}, 1.0, A0, I0};
    }

    ClassicalState& operator+=(const ClassicalState& o) {
        sigma_minus += o.sigma_minus;
        sigma_ee += o.sigma_ee;
        A += o.A;
        I += o.I;
        return *this;
    }
    friend ClassicalState operator+(ClassicalState l, const ClassicalState& r) { return l += r; }
    friend ClassicalState operator*(double s, const ClassicalState& x) {
        return {s * x.sigma_minus, s * x.sigma_ee, s * x.A, s * x.I};
    }
    friend bool operator==(const ClassicalState&, const ClassicalState&) = default;
};

/// R = N^-1 sum_n alpha_n for the two-group network.
inline complex mean_amplitude(const ClassicalState& s, const SystemParams& params) {
    return params.q() * s.A + params.p * s.I;
}

inline ClassicalState classical_rhs(const ClassicalState& s, const SystemParams& params) {
    const double p = params.p;
    const double q = params.q();
    const complex Z = params.active_count() * s.A + params.inactive_count() * s.I;
    const complex atom_drive = -kI * params.g * s.sigma_minus;

    ClassicalState d;
    d.sigma_minus = -kI * params.g * Z * (1.0 - 2.0 * s.sigma_ee) - 0.5 * params.J * s.sigma_minus;
    // -i g (Z <sigma_+> - Z* <sigma_->) is real: 2 g Im(Z <sigma_+>).
    d.sigma_ee = 2.0 * params.g * std::imag(Z * std::conj(s.sigma_minus)) - params.J * s.sigma_ee;
    d.A = atom_drive + (0.5 * params.a - params.V * p - params.kappa * std::norm(s.A)) * s.A +
          params.V * p * s.I;
    d.I = atom_drive + (-0.5 * params.b - params.V * q - params.kappa * std::norm(s.I)) * s.I +
          params.V * q * s.A;
    return d;
}

struct Trajectory {
    std::vector<double> times;
    std::vector<ClassicalState> states;
    SystemParams params;
};

inline constexpr double kBlochTolerance = 1e-4;
inline constexpr int kInvariantCheckInterval = 100;

/// Fixed-step RK4 from `initial` to `t_max`. Every `stride`-th state is
/// recorded (the initial and final states always are).
inline Trajectory integrate(const ClassicalState& initial, const SystemParams& params, double t_max,
                            double dt, int stride = 1) {
    if (!(dt > 0.0) || !(t_max > dt))
        throw Error(ErrorKind::InvalidArgument, "integrate requires dt > 0 and t_max > dt");
    if (stride < 1) throw Error(ErrorKind::InvalidArgument, "stride must be >= 1");

    const double bound = 10.0 * std::max({1.0, std::abs(initial.A), std::abs(initial.I),
                                          std::sqrt(params.a / (2.0 * params.kappa))});
    const auto steps = static_cast<long>(std::llround(t_max / dt));
    const auto rhs = [&params](const ClassicalState& s) { return classical_rhs(s, params); };

    Trajectory traj;
    traj.params = params;
    traj.times.reserve(static_cast<std::size_t>(steps / stride + 2));
    traj.states.reserve(traj.times.capacity());
    traj.times.push_back(0.0);
    traj.states.push_back(initial);

    ClassicalState state = initial;
    for (long step = 1; step <= steps; ++step) {
        state = rk4_step(state, dt, rhs);
        if (!(std::abs(state.A) <= bound && std::abs(state.I) <= bound))
            throw Error(ErrorKind::IntegratorDiverged,
                        "oscillator amplitude left the bound " + std::to_string(bound) +
                            " at t=" + std::to_string(step * dt));
        if (step % kInvariantCheckInterval == 0) {
            const double pop = state.sigma_ee;
            const double bloch = std::norm(state.sigma_minus) - pop * (1.0 - pop);
            if (pop < -kBlochTolerance || pop > 1.0 + kBlochTolerance || bloch > kBlochTolerance)
                throw Error(ErrorKind::InvariantViolation,
                            "atom left the Bloch ball at t=" + std::to_string(step * dt));
        }
        if (step % stride == 0 || step == steps) {
            traj.times.push_back(step * dt);
            traj.states.push_back(state);
        }
    }
    return traj;
}

enum class SteadyKind { AgingState, OscillatoryState, Unresolved };

constexpr const char* to_string(SteadyKind kind) {
    switch (kind) {
    case SteadyKind::AgingState: return "aging";
    case SteadyKind::OscillatoryState: return "oscillatory";
    case SteadyKind::Unresolved: return "unresolved";
    }
    return "unknown";
}

struct SteadyOutcome {
    SteadyKind kind = SteadyKind::Unresolved;
    ClassicalState final_state;
    double R_magnitude = 0.0;  ///< terminal-window mean of |R|
};

/// Amplitude below which both groups count as quenched.
inline constexpr double kAgingAmplitude = 1e-6;
inline constexpr double kTerminalFraction = 0.2;
inline constexpr double kMaxWindowDrift = 0.05;
/// Relative size of the nonlinear terms below which a state is still linear.
inline constexpr double kLinearRegime = 1e-3;

/// True when neither the oscillator damping nor the atom saturation acts yet.
/// A slow transient here has no steady amplitude and must not count as oscillating.
inline bool in_linear_regime(double max_amp, double R_magnitude, const SystemParams& params) {
    const double oscillator = params.kappa * max_amp * max_amp / std::max(params.a, params.b);
    const double atom_drive = 2.0 * params.g * params.N * R_magnitude / params.J;
    return oscillator < kLinearRegime && atom_drive * atom_drive < kLinearRegime;
}

inline SteadyOutcome classify_steady(const Trajectory& traj) {
    if (traj.states.empty()) throw Error(ErrorKind::InvalidArgument, "empty trajectory");
    const std::size_t n = traj.states.size();
    const std::size_t window = std::max<std::size_t>(2, static_cast<std::size_t>(n * kTerminalFraction));
    const std::size_t begin = n > window ? n - window : 0;
    const std::size_t mid = begin + (n - begin) / 2;

    double max_amp = 0.0;
    double sum_first = 0.0, sum_second = 0.0, sum_all = 0.0;
    for (std::size_t i = begin; i < n; ++i) {
        const auto& s = traj.states[i];
        max_amp = std::max({max_amp, std::abs(s.A), std::abs(s.I)});
        const double r = std::abs(mean_amplitude(s, traj.params));
        sum_all += r;
        (i < mid ? sum_first : sum_second) += r;
    }
    SteadyOutcome out;
    out.final_state = traj.states.back();
    out.R_magnitude = sum_all / static_cast<double>(n - begin);
    if (max_amp < kAgingAmplitude) {
        out.kind = SteadyKind::AgingState;
        return out;
    }
    const double first = sum_first / static_cast<double>(std::max<std::size_t>(1, mid - begin));
    const double second = sum_second / static_cast<double>(std::max<std::size_t>(1, n - mid));
    const double drift = std::abs(second - first) / std::max(first, second);
    out.kind = (out.R_magnitude >= kAgingAmplitude && drift < kMaxWindowDrift &&
                !in_linear_regime(max_amp, out.R_magnitude, traj.params))
                   ? SteadyKind::OscillatoryState
                   : SteadyKind::Unresolved;
    return out;
}

struct RunOptions {
    double t_max = 10.0;
    double dt = 1e-4;
    int max_doublings = 3;  ///< horizon doublings while the outcome is Unresolved
    int stride = 10;
};

/// Integrates until classify_steady resolves the outcome, doubling the
/// horizon up to `max_doublings` times. Doubling continues the existing
/// trajectory, which is step-for-step identical to a fresh longer run.
inline SteadyOutcome run_to_steady(const ClassicalState& initial, const SystemParams& params,
                                   const RunOptions& opts = {}) {
    Trajectory traj = integrate(initial, params, opts.t_max, opts.dt, opts.stride);
    SteadyOutcome outcome = classify_steady(traj);
    double horizon = opts.t_max;
    for (int k = 0; k < opts.max_doublings && outcome.kind == SteadyKind::Unresolved; ++k) {
        const double t0 = traj.times.back();
        Trajectory more = integrate(traj.states.back(), params, horizon, opts.dt, opts.stride);
        for (std::size_t i = 1; i < more.states.size(); ++i) {
            traj.times.push_back(t0 + more.times[i]);
            traj.states.push_back(more.states[i]);
        }
        horizon *= 2.0;
        outcome = classify_steady(traj);
    }
    return outcome;
}

/// Q_c from an already-solved p-run and p=0 baseline.
inline double order_parameter_from(const SteadyOutcome& at_p, const SteadyOutcome& baseline) {
    if (baseline.kind == SteadyKind::AgingState)
        throw Error(ErrorKind::BaselineDead, "the p=0 baseline decays to the aging state");
    if (at_p.kind == SteadyKind::AgingState) return 0.0;
    return at_p.R_magnitude / baseline.R_magnitude;
}

/// Normalized order parameter Q_c = |R(p)| / |R(0)| for a common initial state.
inline double order_parameter_Qc(const SystemParams& params, const ClassicalState& initial,
                                 const RunOptions& opts = {}) {
    const SteadyOutcome baseline = run_to_steady(initial, params.with_p(0.0), opts);
    if (params.p == 0.0) return order_parameter_from(baseline, baseline);
    return order_parameter_from(run_to_steady(initial, params, opts), baseline);
}

// ---------------------------------------------------------------------------
// Reduced steady-state equations for the large-|Z| oscillatory branch:
//   (a/2 - Vp - k|A|^2) A + Vp I - J / (4 Z*) = 0
//   (-b/2 - Vq - k|I|^2) I + Vq A - J / (4 Z*) = 0,   Z = N (q A + p I).
// Neither equation contains g.

struct ReducedSolution {
    complex A;
    complex I;
    int iterations = 0;
};

inline constexpr int kReducedMaxIterations = 10000;

/// Residuals of the reduced equations at arbitrary complex (A, I).
inline std::pair<complex, complex> reduced_steady_residual(complex A, complex I,
                                                           const SystemParams& params) {
    const double p = params.p, q = params.q();
    const complex Z = params.active_count() * A + params.inactive_count() * I;
    const complex atom = params.J / (4.0 * std::conj(Z));
    return {(0.5 * params.a - params.V * p - params.kappa * std::norm(A)) * A + params.V * p * I - atom,
            (-0.5 * params.b - params.V * q - params.kappa * std::norm(I)) * I + params.V * q * A - atom};
}

/// Real, positive nontrivial fixed point of the atom-free two-group system.
/// Eliminates A through the inactive equation and bisects on I.
inline ReducedSolution atom_free_steady(const SystemParams& params) {
    const double p = params.p, q = params.q(), k = params.kappa, V = params.V;
    if (!(q > 0.0) || !(V > 0.0))
        throw Error(ErrorKind::InvalidArgument, "reduced solve needs active oscillators and V > 0");
    auto active_of = [&](double I) { return (0.5 * params.b + V * q + k * I * I) * I / (V * q); };
    auto f = [&](double I) {
        const double A = active_of(I);
        return (0.5 * params.a - V * p - k * A * A) * A + V * p * I;
    };
    const double slope = (0.5 * params.a - V * p) * (0.5 * params.b + V * q) / (V * q) + V * p;
    if (!(slope > 0.0)) throw Error(ErrorKind::NoConvergence, "origin is stable without the atom");

    double lo = 0.0, hi = 1.0;
    int guard = 0;
    while (f(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 200) throw Error(ErrorKind::NoConvergence, "cannot bracket the atom-free branch");
    }
    int it = 0;
    for (; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    const double I = 0.5 * (lo + hi);
    return {active_of(I), I, it};
}

/// Solves the reduced steady equations by damped Newton iteration in the real
/// gauge (A, I real), seeded from the atom-free fixed point.
inline ReducedSolution reduced_steady_solve(const SystemParams& params) {
    const ReducedSolution seed = atom_free_steady(params);
    const double p = params.p, q = params.q(), k = params.kappa, V = params.V, N = params.N;
    const double a = params.a, b = params.b, J = params.J;

    auto residual = [&](double A, double I) {
        const double Z = N * (q * A + p * I);
        const double atom = J / (4.0 * Z);
        return std::pair{(0.5 * a - V * p - k * A * A) * A + V * p * I - atom,
                         (-0.5 * b - V * q - k * I * I) * I + V * q * A - atom};
    };
    auto norm2 = [](std::pair<double, double> r) { return std::hypot(r.first, r.second); };

    double A = seed.A.real(), I = seed.I.real();
    auto r = residual(A, I);
    const double scale = std::max(1.0, std::abs(A) * (0.5 * a + V + k * A * A));
    int it = 0;
    for (; it < kReducedMaxIterations && norm2(r) > 1e-13 * scale; ++it) {
        const double Z = N * (q * A + p * I);
        const double dz = J / (4.0 * Z * Z);
        const double j11 = 0.5 * a - V * p - 3.0 * k * A * A + dz * N * q;
        const double j12 = V * p + dz * N * p;
        const double j21 = V * q + dz * N * q;
        const double j22 = -0.5 * b - V * q - 3.0 * k * I * I + dz * N * p;
        const double det = j11 * j22 - j12 * j21;
        if (det == 0.0) break;
        const double dA = (j22 * r.first - j12 * r.second) / det;
        const double dI = (-j21 * r.first + j11 * r.second) / det;
        double step = 1.0;
        const double current = norm2(r);
        for (int halving = 0; halving < 40; ++halving, step *= 0.5) {
            auto trial = residual(A - step * dA, I - step * dI);
            if (norm2(trial) < current) break;
        }
        A -= step * dA;
        I -= step * dI;
        r = residual(A, I);
    }
    if (!(norm2(r) <= 1e-13 * scale))
        throw Error(ErrorKind::NoConvergence, "reduced steady equations did not converge");

    const double Z = N * (q * A + p * I);
    if (!(J * J / (Z * Z) < 8.0 * params.g * params.g * 0.1))
        throw Error(ErrorKind::ValidityViolated,
                    "|Z| = " + std::to_string(std::abs(Z)) + " too small for the large-Z reduction");
    return {A, I, it};
}

}  // namespace agingsim::classical
