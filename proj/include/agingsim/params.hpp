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

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace agingsim {

using complex = std::complex<double>;
inline constexpr complex kI{0.0, 1.0};

/// Failure categories reported by every module. Each maps to a stable
/// machine-readable name used by the CLI error JSON.
enum class ErrorKind {
    NegativeRate,
    InvalidFraction,
    NonzeroDetuning,
    InvalidArgument,
    IntegratorDiverged,
    InvariantViolation,
    BaselineDead,
    NoConvergence,
    ValidityViolated,
    SelfCheckFailed,
    RegimeViolation,
    OutOfRange,
    UnexpectedRouthBranch,
    NoKnee,
    NoTransition,
    ConfigError,
};

constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::NegativeRate: return "NegativeRate";
    case ErrorKind::InvalidFraction: return "InvalidFraction";
    case ErrorKind::NonzeroDetuning: return "NonzeroDetuning";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IntegratorDiverged: return "IntegratorDiverged";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::BaselineDead: return "BaselineDead";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::ValidityViolated: return "ValidityViolated";
    case ErrorKind::SelfCheckFailed: return "SelfCheckFailed";
    case ErrorKind::RegimeViolation: return "RegimeViolation";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::UnexpectedRouthBranch: return "UnexpectedRouthBranch";
    case ErrorKind::NoKnee: return "NoKnee";
    case ErrorKind::NoTransition: return "NoTransition";
    case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Physical rates of the atom + active/inactive oscillator network, all in
/// units of the nonlinear damping rate kappa (which is therefore 1).
struct SystemParams {
    double a = 0.0;      ///< linear gain of active oscillators
    double b = 0.0;      ///< linear loss of inactive oscillators
    double kappa = 1.0;  ///< two-boson damping, the unit rate
    double V = 0.0;      ///< dissipative inter-oscillator coupling
    double g = 0.0;      ///< atom-oscillator coherent coupling
    double J = 0.0;      ///< atom decay rate
    int N = 1;           ///< total oscillator count
    double p = 0.0;      ///< inactive fraction N_i / N
    double delta = 0.0;  ///< atom-oscillator detuning; only resonance is supported

    double q() const { return 1.0 - p; }
    double active_count() const { return N * (1.0 - p); }
    double inactive_count() const { return N * p; }

    SystemParams with_p(double value) const {
        SystemParams copy = *this;
        copy.p = value;
        return copy;
    }
};

/// kappa / min(a, b) below this ratio marks a parameter set as suitable for
/// the classical amplitude equations.
inline constexpr double kClassicalRatio = 0.05;

struct ValidatedParams {
    SystemParams params;
    bool classical_capable = false;
};

inline bool is_classical_capable(const SystemParams& params) {
    double smallest = std::min(params.a, params.b);
    if (smallest <= 0.0) return false;
    return params.kappa / smallest < kClassicalRatio;
}

inline ValidatedParams validate_params(const SystemParams& params) {
    auto check_rate = [](double value, const char* name) {
        if (!(value >= 0.0) || !std::isfinite(value))
            throw Error(ErrorKind::NegativeRate, std::string(name) + " must be a finite rate >= 0");
    };
    check_rate(params.a, "a");
    check_rate(params.b, "b");
    check_rate(params.kappa, "kappa");
    check_rate(params.V, "V");
    check_rate(params.g, "g");
    check_rate(params.J, "J");
    if (params.N < 1) throw Error(ErrorKind::InvalidArgument, "N must be >= 1");
    if (!(params.p >= 0.0 && params.p <= 1.0))
        throw Error(ErrorKind::InvalidFraction, "p must lie in [0, 1]");
    if (params.delta != 0.0)
        throw Error(ErrorKind::NonzeroDetuning, "only resonant coupling (delta = 0) is supported");
    return {params, is_classical_capable(params)};
}

/// Snaps p onto the 1/N count grid; count-based sweeps must hit integer N*p.
inline double snap_fraction(double p, int N) {
    return std::round(p * N) / static_cast<double>(N);
}

/// Parameter sets used throughout the documentation and tests.
namespace presets {

/// Classical regime: a=80, b=40, V=300, J=300, N=100.
inline SystemParams classical(double g = 2.6, double p = 0.0) {
    return SystemParams{.a = 80.0, .b = 40.0, .kappa = 1.0, .V = 300.0, .g = g, .J = 300.0,
                        .N = 100, .p = p};
}

/// Quantum regime: a=0.5, b=0.375, V=3.75, J=7.5, N=100.
inline SystemParams quantum(double g = 0.03, double p = 0.0) {
    return SystemParams{.a = 0.5, .b = 0.375, .kappa = 1.0, .V = 3.75, .g = g, .J = 7.5,
                        .N = 100, .p = p};
}

}  // namespace presets

}  // namespace agingsim
