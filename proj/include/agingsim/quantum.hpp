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

#include <agingsim/density_matrix.hpp>
#include <agingsim/params.hpp>
#include <agingsim/rk4.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace agingsim::quantum {

/// Product-state ansatz: the atom and one representative oscillator per group.
template <int Dim = kFockDim>
struct QuantumState {
    AtomMatrix atom;
    DensityMatrix<Dim> active;
    DensityMatrix<Dim> inactive;

    /// Atom excited (or ground), both oscillators in the truncated coherent state |alpha>.
    static QuantumState coherent(complex alpha, bool atom_excited = true) {
        return {atom_excited ? atom::excited() : atom::ground(), coherent_amplitude_to_fock<Dim>(alpha),
                coherent_amplitude_to_fock<Dim>(alpha)};
    }

    QuantumState& operator+=(const QuantumState& o) {
        atom += o.atom;
        active += o.active;
        inactive += o.inactive;
        return *this;
    }
    friend QuantumState operator+(QuantumState l, const QuantumState& r) { return l += r; }
    friend QuantumState operator*(double s, QuantumState x) {
        x.atom *= s;
        x.active *= s;
        x.inactive *= s;
        return x;
    }
    double max_abs() const { return std::max({atom.max_abs(), active.max_abs(), inactive.max_abs()}); }
};

/// Oscillator-only state of the adiabatically eliminated model.
template <int Dim = kFockDim>
struct OscillatorPair {
    DensityMatrix<Dim> active;
    DensityMatrix<Dim> inactive;

    static OscillatorPair coherent(complex alpha) {
        return {coherent_amplitude_to_fock<Dim>(alpha), coherent_amplitude_to_fock<Dim>(alpha)};
    }
    static OscillatorPair from(const QuantumState<Dim>& s) { return {s.active, s.inactive}; }

    OscillatorPair& operator+=(const OscillatorPair& o) {
        active += o.active;
        inactive += o.inactive;
        return *this;
    }
    friend OscillatorPair operator+(OscillatorPair l, const OscillatorPair& r) { return l += r; }
    friend OscillatorPair operator*(double s, OscillatorPair x) {
        x.active *= s;
        x.inactive *= s;
        return x;
    }
    double max_abs() const { return std::max(active.max_abs(), inactive.max_abs()); }
};

/// Sums of <a> over the network: all members, all but one active member,
/// all but one inactive member.
struct MeanFields {
    complex total;
    complex active;
    complex inactive;
};

template <int Dim>
MeanFields mean_fields(const DensityMatrix<Dim>& active, const DensityMatrix<Dim>& inactive,
                       const SystemParams& params) {
    const complex a_active = expect_lowering(active);
    const complex a_inactive = expect_lowering(inactive);
    const double n_active = params.active_count();
    const double n_inactive = params.inactive_count();
    return {n_active * a_active + n_inactive * a_inactive,
            (n_active - 1.0) * a_active + n_inactive * a_inactive,
            n_active * a_active + (n_inactive - 1.0) * a_inactive};
}

template <class State>
MeanFields mean_fields(const State& state, const SystemParams& params) {
    return mean_fields(state.active, state.inactive, params);
}

/// Network-averaged amplitude R = (1-p) Tr(a rho_A) + p Tr(a rho_I).
template <class State>
complex mean_amplitude(const State& state, const SystemParams& params) {
    return params.q() * expect_lowering(state.active) + params.p * expect_lowering(state.inactive);
}

/// n0 = (1-p) Tr(a^dag a rho_A) + p Tr(a^dag a rho_I).
template <class State>
double mean_boson_number(const State& state, const SystemParams& params) {
    return params.q() * expect_number(state.active) + params.p * expect_number(state.inactive);
}

/// Single-oscillator generator in the truncated Fock basis:
///   pump D[a^dag] + loss D[a] + kappa D[a^2] + drive [a^dag, rho] - drive* [a, rho].
/// Raising out of the top level is annihilated by the truncation.
template <int Dim>
DensityMatrix<Dim> oscillator_rhs(const DensityMatrix<Dim>& rho, double pump, double loss, double kappa,
                                  complex drive) {
    static const auto root = [] {
        std::array<double, Dim + 2> r{};
        for (int n = 0; n < Dim + 2; ++n) r[n] = std::sqrt(static_cast<double>(n));
        return r;
    }();
    auto raise_norm = [](int n) { return n + 1 < Dim ? n + 1.0 : 0.0; };  // diag of a a^dag
    const complex drive_conj = std::conj(drive);

    // Walks the packed lower triangle directly. With i = index(j, k):
    // (j-1, k-1) = i - j - 1, (j+1, k) = i + j + 1, (j+1, k+1) = i + j + 2, (j+2, k+2) = i + 2j + 5.
    const auto& in = rho.packed();
    DensityMatrix<Dim> out;
    auto& d_out = out.packed();
    std::size_t i = 0;
    for (int j = 0; j < Dim; ++j) {
        for (int k = 0; k <= j; ++k, ++i) {
            const complex rjk = in[i];
            complex d = -0.5 * (pump * (raise_norm(j) + raise_norm(k)) + loss * (j + k) +
                                kappa * (j * (j - 1) + k * (k - 1))) *
                        rjk;
            if (k >= 1) d += pump * root[j] * root[k] * in[i - j - 1];
            if (j + 1 < Dim) d += loss * root[j + 1] * root[k + 1] * in[i + j + 2];
            if (j + 2 < Dim)
                d += kappa * root[j + 1] * root[j + 2] * root[k + 1] * root[k + 2] * in[i + 2 * j + 5];

            // rho(j-1, k) and rho(j, k+1) leave the lower triangle on the diagonal.
            complex raise_comm{};
            if (j >= 1) raise_comm = root[j] * (k < j ? in[i - j] : std::conj(in[i - 1]));
            if (k + 1 < Dim) raise_comm -= root[k + 1] * (k < j ? in[i + 1] : std::conj(in[i + j + 1]));
            complex lower_comm = j + 1 < Dim ? root[j + 1] * in[i + j + 1] : complex{};
            if (k >= 1) lower_comm -= root[k] * in[i - 1];
            d += drive * raise_comm - drive_conj * lower_comm;

            d_out[i] = k == j ? complex(d.real(), 0.0) : d;
        }
    }
    return out;
}

/// Atom driven by the full mean field M with decay J.
inline AtomMatrix atom_rhs(const AtomMatrix& rho, complex M, const SystemParams& params) {
    const complex eg = atom::sigma_minus(rho);
    const double ee = atom::excited_population(rho);
    const double d_ee = 2.0 * params.g * std::imag(M * std::conj(eg)) - params.J * ee;
    AtomMatrix out;
    out.set(atom::kExcited, atom::kGround, -kI * params.g * M * (1.0 - 2.0 * ee) - 0.5 * params.J * eg);
    out.set(atom::kExcited, atom::kExcited, d_ee);
    out.set(atom::kGround, atom::kGround, -d_ee);
    return out;
}

/// Rate of the single-boson loss channel from the dissipative coupling.
inline double coupling_loss(const SystemParams& params) {
    return 2.0 * params.V * (params.N - 1.0) / params.N;
}

/// Factorized master equations for atom, active and inactive oscillator.
template <int Dim>
QuantumState<Dim> quantum_rhs(const QuantumState<Dim>& s, const SystemParams& params) {
    const MeanFields M = mean_fields(s, params);
    const complex sigma = atom::sigma_minus(s.atom);
    const double VN = params.V / params.N;
    const double loss = coupling_loss(params);
    const complex atom_drive = -kI * params.g * sigma;
    return {atom_rhs(s.atom, M.total, params),
            oscillator_rhs(s.active, params.a, loss, params.kappa, VN * M.active + atom_drive),
            oscillator_rhs(s.inactive, 0.0, params.b + loss, params.kappa, VN * M.inactive + atom_drive)};
}

/// Atom-oscillator coupling shift G = -2 g^2 / J of the eliminated model.
inline double coupling_shift(const SystemParams& params) {
    return params.g == 0.0 ? 0.0 : -2.0 * params.g * params.g / params.J;
}

/// The eliminated model needs J well above g.
inline constexpr double kAdiabaticRatio = 20.0;

inline void require_adiabatic_regime(const SystemParams& params) {
    if (params.g > 0.0 && !(params.J > kAdiabaticRatio * params.g))
        throw Error(ErrorKind::RegimeViolation, "adiabatic elimination requires J > 20 g");
}

/// Oscillator equations with the atom eliminated: the mean-field drive
/// coefficient becomes V/N + G.
template <int Dim>
OscillatorPair<Dim> adiabatic_rhs(const OscillatorPair<Dim>& s, const SystemParams& params) {
    require_adiabatic_regime(params);
    const MeanFields M = mean_fields(s, params);
    const double coupling = params.V / params.N + coupling_shift(params);
    const double loss = coupling_loss(params);
    return {oscillator_rhs(s.active, params.a, loss, params.kappa, coupling * M.active),
            oscillator_rhs(s.inactive, 0.0, params.b + loss, params.kappa, coupling * M.inactive)};
}

struct AtomExpectations {
    complex sigma_minus;
    double sigma_ee = 0.0;
};

/// Stationary atom under a fixed mean field M.
inline AtomExpectations atom_steady_expectations(complex M, const SystemParams& params) {
    if (!(params.J > 0.0)) throw Error(ErrorKind::InvalidArgument, "atom decay J must be > 0");
    const double drive = 4.0 * params.g * params.g * std::norm(M);
    if (drive == 0.0) return {};
    const double ee = 1.0 / (2.0 + params.J * params.J / drive);
    return {(-2.0 * params.g * kI / params.J) * M * (1.0 - 2.0 * ee), ee};
}

// ---------------------------------------------------------------------------
// Time evolution

/// Full model: state, generator, and observables.
template <int Dim = kFockDim>
struct FullModel {
    using State = QuantumState<Dim>;
    static State rhs(const State& s, const SystemParams& params) { return quantum_rhs(s, params); }
    static double atom_excited(const State& s, const SystemParams&) { return atom::excited_population(s.atom); }
};

/// Adiabatically eliminated model; the atom population is its stationary value.
template <int Dim = kFockDim>
struct AdiabaticModel {
    using State = OscillatorPair<Dim>;
    static State rhs(const State& s, const SystemParams& params) { return adiabatic_rhs(s, params); }
    static double atom_excited(const State& s, const SystemParams& params) {
        return atom_steady_expectations(mean_fields(s, params).total, params).sigma_ee;
    }
};

struct Observation {
    double t = 0.0;
    complex lowering_active;
    complex lowering_inactive;
    double number_active = 0.0;
    double number_inactive = 0.0;
    double mean_boson_number = 0.0;
    double atom_excited = 0.0;
};

template <class Model>
Observation observe(double t, const typename Model::State& s, const SystemParams& params) {
    return {t,
            expect_lowering(s.active),
            expect_lowering(s.inactive),
            expect_number(s.active),
            expect_number(s.inactive),
            mean_boson_number(s, params),
            Model::atom_excited(s, params)};
}

inline constexpr double kTraceTolerance = 1e-6;
inline constexpr double kNegativityTolerance = 1e-6;
inline constexpr int kCheckInterval = 100;
inline constexpr double kMaxStepRate = 0.05;

namespace detail {

template <int Dim>
void check_matrix(const DensityMatrix<Dim>& rho, const char* name, double t) {
    const double tr = rho.trace();
    if (!std::isfinite(tr) || !std::isfinite(rho.max_abs()))
        throw Error(ErrorKind::IntegratorDiverged, std::string(name) + " is not finite at t=" + std::to_string(t));
    if (std::abs(tr - 1.0) > kTraceTolerance)
        throw Error(ErrorKind::InvariantViolation,
                    std::string(name) + " trace drifted to " + std::to_string(tr) + " at t=" + std::to_string(t));
    if (rho.min_eigenvalue() < -kNegativityTolerance)
        throw Error(ErrorKind::InvariantViolation,
                    std::string(name) + " lost positivity at t=" + std::to_string(t));
}

template <int Dim>
void check_state(const QuantumState<Dim>& s, double t) {
    check_matrix(s.atom, "atom", t);
    check_matrix(s.active, "active oscillator", t);
    check_matrix(s.inactive, "inactive oscillator", t);
}

template <int Dim>
void check_state(const OscillatorPair<Dim>& s, double t) {
    check_matrix(s.active, "active oscillator", t);
    check_matrix(s.inactive, "inactive oscillator", t);
}

inline void check_step(const SystemParams& params, double dt) {
    const double rate = std::max({params.a, params.b, params.kappa, params.V, params.J});
    if (!(dt > 0.0) || !(dt * rate < kMaxStepRate))
        throw Error(ErrorKind::InvalidArgument,
                    "time step too large: dt * max rate = " + std::to_string(dt * rate) + " (limit 0.05)");
}

}  // namespace detail

template <class State>
struct Evolution {
    State final_state;
    std::vector<Observation> series;
};

/// Fixed-step RK4 to t_max, recording observables every `stride` steps and
/// checking trace and positivity every kCheckInterval steps.
template <class Model = FullModel<>>
Evolution<typename Model::State> evolve(const typename Model::State& initial, const SystemParams& params,
                                        double t_max, double dt = 5e-3, int stride = 100) {
    detail::check_step(params, dt);
    if (stride < 1) throw Error(ErrorKind::InvalidArgument, "stride must be >= 1");
    const auto rhs = [&params](const typename Model::State& s) { return Model::rhs(s, params); };
    const auto steps = static_cast<long>(std::llround(t_max / dt));

    Evolution<typename Model::State> out{initial, {}};
    out.series.push_back(observe<Model>(0.0, initial, params));
    auto& s = out.final_state;
    for (long step = 1; step <= steps; ++step) {
        s = rk4_step(s, dt, rhs);
        if (step % kCheckInterval == 0 || step == steps) detail::check_state(s, step * dt);
        if (step % stride == 0 || step == steps) out.series.push_back(observe<Model>(step * dt, s, params));
    }
    return out;
}

struct SteadyOptions {
    double dt = 5e-3;
    double t_max = 2000.0;
    double tolerance = 1e-9;  ///< max-norm of the generator output
    bool throw_on_failure = true;
};

template <class State>
struct SteadyResult {
    State state;
    bool converged = false;
    double residual = 0.0;
    double time = 0.0;
};

/// Integrates until the generator's max-norm drops below the tolerance.
template <class Model = FullModel<>>
SteadyResult<typename Model::State> steady_state(const typename Model::State& initial, const SystemParams& params,
                                                 const SteadyOptions& opts = {}) {
    detail::check_step(params, opts.dt);
    const auto rhs = [&params](const typename Model::State& s) { return Model::rhs(s, params); };
    const auto steps = static_cast<long>(std::llround(opts.t_max / opts.dt));

    SteadyResult<typename Model::State> out{initial, false, rhs(initial).max_abs(), 0.0};
    auto& s = out.state;
    for (long step = 1; step <= steps && out.residual >= opts.tolerance; ++step) {
        s = rk4_step(s, opts.dt, rhs);
        if (step % kCheckInterval == 0 || step == steps) {
            detail::check_state(s, step * opts.dt);
            out.residual = rhs(s).max_abs();
            out.time = step * opts.dt;
        }
    }
    out.converged = out.residual < opts.tolerance;
    if (!out.converged && opts.throw_on_failure)
        throw Error(ErrorKind::NoConvergence,
                    "generator residual " + std::to_string(out.residual) + " after t=" + std::to_string(out.time));
    return out;
}

// ---------------------------------------------------------------------------
// Fock distributions

struct FockDistribution {
    std::array<double, kFockDim> populations{};
    bool coherences_present = false;
};

inline constexpr double kCoherenceThreshold = 1e-8;

inline FockDistribution fock_distribution(const OscillatorMatrix& rho) {
    FockDistribution d;
    for (int n = 0; n < kFockDim; ++n) d.populations[n] = rho.population(n);
    d.coherences_present = !rho.is_diagonal(kCoherenceThreshold);
    return d;
}

/// Stationary Fock populations of the aging state (all mean fields zero):
/// the inactive oscillator sits in vacuum and the active one balances
/// single-boson gain a against the coupling loss and two-boson damping.
inline std::pair<FockDistribution, FockDistribution> aging_fock_analytic(const SystemParams& params) {
    const double g = params.a;  // gain of the active group
    const double k = params.kappa;
    const double N = params.N;
    const double V = params.V;
    const double c1 = std::pow(N, 4);
    const double c2 = (N - 1.0) * std::pow(N, 3) * V;
    const double c3 = std::pow(N - 1.0, 2) * N * N * V * V;
    const double c4 = std::pow(N - 1.0, 3) * N * std::pow(V, 3);
    const double c5 = std::pow(N - 1.0, 4) * std::pow(V, 4);
    const double C = g * (g * g * g + 7.0 * g * g * k + 27.0 * g * k * k + 18.0 * k * k * k) * c1 +
                     2.0 * (g * g * g + 12.0 * g * g * k + 34.0 * g * k * k + 6.0 * k * k * k) * c2 +
                     4.0 * (g * g + 15.0 * g * k + 11.0 * k * k) * c3 + 8.0 * (g + 6.0 * k) * c4 + 16.0 * c5;

    FockDistribution active;
    auto& P = active.populations;
    P[0] = (4.0 * g * k * k * (2.0 * g + 3.0 * k) * c1 + 2.0 * k * k * (23.0 * g + 6.0 * k) * c2 +
            4.0 * k * (9.0 * g + 11.0 * k) * c3 + 48.0 * k * c4 + 16.0 * c5) / C;
    P[1] = (g * k * (6.0 * k * k + 13.0 * g * k) * c1 + g * k * (22.0 * k + 14.0 * g) * c2 +
            24.0 * g * k * c3 + 8.0 * g * c4) / C;
    P[2] = (2.0 * g * k * (2.0 * g * g + 3.0 * g * k) * c1 + 10.0 * g * g * k * c2 + 4.0 * g * g * c3) / C;
    // The c2 weight here is 2 g^3: it is what the diagonal balance equations
    // give and what makes C the exact normalizer.
    P[3] = (3.0 * g * g * g * k * c1 + 2.0 * g * g * g * c2) / C;
    P[4] = std::pow(g, 4) * c1 / C;

    FockDistribution inactive;
    inactive.populations[0] = 1.0;
    return {active, inactive};
}

}  // namespace agingsim::quantum
