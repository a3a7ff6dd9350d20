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

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <limits>
#include <optional>
#include <span>

namespace agingsim::stability {

using Matrix4 = Eigen::Matrix<complex, 4, 4>;
using Matrix3 = Eigen::Matrix<complex, 3, 3>;

/// Linearization of the classical mean-field equations at the aging fixed
/// point, in the variable order (sigma_-, sigma_ee, A, I).
inline Matrix4 build_jacobian(const SystemParams& params) {
    const double p = params.p, q = params.q();
    const complex ig = kI * params.g;
    Matrix4 M;
    M << -0.5 * params.J, 0.0, -ig * (params.N * q), -ig * (params.N * p),
        0.0, -params.J, 0.0, 0.0,
        -ig, 0.0, 0.5 * params.a - params.V * p, params.V * p,
        -ig, 0.0, params.V * q, -0.5 * params.b - params.V * q;
    return M;
}

/// Monic cubic lambda^3 + c2 lambda^2 + c1 lambda + c0.
struct CubicCoefficients {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
};

/// Closed-form coefficients of the cubic factor of det(lambda - M) after the
/// decoupled (lambda + J) root is divided out.
inline CubicCoefficients closed_form_coefficients(const SystemParams& params) {
    const double a = params.a, b = params.b, J = params.J, V = params.V, p = params.p;
    const double g2N = params.g * params.g * params.N;
    CubicCoefficients c;
    c.c0 = (-4.0 * b * g2N * (p - 1.0) + 8.0 * g2N * V + 2.0 * b * J * p * V -
            a * (b * J + 4.0 * g2N * p - 2.0 * J * (p - 1.0) * V)) / 8.0;
    c.c1 = (b * J + 4.0 * g2N + 2.0 * (J + b * p) * V - a * (b + J + 2.0 * V - 2.0 * p * V)) / 4.0;
    c.c2 = 0.5 * (-a + b + J) + V;
    return c;
}

/// Coefficients of det(lambda I - M) for a 4x4 matrix, highest power first,
/// by the Faddeev-LeVerrier recursion.
inline std::array<complex, 5> characteristic_polynomial(const Matrix4& M) {
    std::array<complex, 5> coeff{};
    coeff[0] = 1.0;
    Matrix4 Mk = Matrix4::Zero();
    const Matrix4 identity = Matrix4::Identity();
    for (int k = 1; k <= 4; ++k) {
        Mk = M * Mk + coeff[k - 1] * identity;
        coeff[k] = -(M * Mk).trace() / static_cast<double>(k);
    }
    return coeff;
}

/// Divides a monic quartic (highest power first) by (lambda - root).
inline std::array<complex, 4> deflate(const std::array<complex, 5>& quartic, complex root) {
    std::array<complex, 4> cubic{};
    cubic[0] = quartic[0];
    for (int k = 1; k < 4; ++k) cubic[k] = quartic[k] + root * cubic[k - 1];
    return cubic;
}

inline constexpr double kCoefficientTolerance = 1e-9;

/// Closed-form cubic coefficients, verified against polynomial division of
/// the numerically expanded determinant by (lambda + J).
inline CubicCoefficients characteristic_coefficients(const SystemParams& params) {
    const CubicCoefficients closed = closed_form_coefficients(params);
    const auto cubic = deflate(characteristic_polynomial(build_jacobian(params)), -params.J);
    const std::array<double, 3> expected{closed.c2, closed.c1, closed.c0};
    const double c2_scale = std::max(1.0, std::abs(closed.c2));
    for (int k = 0; k < 3; ++k) {
        // Coefficient k+1 carries units of lambda^(k+1).
        const double scale = std::max(std::abs(expected[k]), std::pow(c2_scale, k + 1));
        const double mismatch = std::abs(cubic[k + 1] - expected[k]);
        if (!(mismatch <= kCoefficientTolerance * scale))
            throw Error(ErrorKind::SelfCheckFailed,
                        "closed-form coefficient c" + std::to_string(2 - k) +
                            " disagrees with the determinant expansion");
    }
    return closed;
}

/// Routh-Hurwitz test for the monic cubic: every root has negative real part.
constexpr bool routh_hurwitz_stable(double c0, double c1, double c2) {
    return c2 > 0.0 && c0 > 0.0 && c2 * c1 > c0;
}

inline bool routh_hurwitz_stable(const CubicCoefficients& c) {
    return routh_hurwitz_stable(c.c0, c.c1, c.c2);
}

/// Lowest inactive fraction at which the aging fixed point is linearly
/// stable: the root in p of c0.
inline double p_cmin(const SystemParams& params) {
    const double g2N = params.g * params.g * params.N;
    const double a = params.a, b = params.b, J = params.J, V = params.V;
    if (!(2.0 * g2N < J * V))
        throw Error(ErrorKind::RegimeViolation, "threshold formula requires 2 g^2 N < J V");
    const double value = (4.0 * g2N - a * J) * (b + 2.0 * V) / (2.0 * (2.0 * g2N - J * V) * (a + b));
    if (!(value > 0.0 && value <= 1.0))
        throw Error(ErrorKind::OutOfRange, "threshold " + std::to_string(value) + " outside (0, 1]");

    // c0 crosses zero here; the other two Routh-Hurwitz conditions must hold
    // for c0 to be the binding one.
    const CubicCoefficients c = closed_form_coefficients(params.with_p(value));
    if (!(c.c2 > 0.0 && c.c2 * c.c1 > 0.0))
        throw Error(ErrorKind::UnexpectedRouthBranch,
                    "c2 > 0 or c2 c1 > c0 binds at the threshold instead of c0");
    return value;
}

// ---------------------------------------------------------------------------
// Roots

/// Roots of the monic cubic z^3 + c2 z^2 + c1 z + c0 with complex
/// coefficients. Cardano's closed form, switching to the companion-matrix
/// eigenvalues when the discriminant is too small to separate the roots.
inline std::array<complex, 3> cubic_roots(complex c2, complex c1, complex c0) {
    const complex shift = c2 / 3.0;
    const complex P = c1 - c2 * c2 / 3.0;
    const complex Q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
    const complex disc = Q * Q / 4.0 + P * P * P / 27.0;
    const double scale = std::max({std::abs(c2), std::sqrt(std::abs(c1)), std::cbrt(std::abs(c0)),
                                   std::numeric_limits<double>::min()});

    std::array<complex, 3> roots;
    if (std::abs(disc) < 1e-12 * std::pow(scale, 6)) {
        Matrix3 companion = Matrix3::Zero();
        companion(0, 0) = -c2;
        companion(0, 1) = -c1;
        companion(0, 2) = -c0;
        companion(1, 0) = 1.0;
        companion(2, 1) = 1.0;
        Eigen::ComplexEigenSolver<Matrix3> solver(companion, false);
        for (int k = 0; k < 3; ++k) roots[k] = solver.eigenvalues()(k);
        return roots;
    }

    const complex sq = std::sqrt(disc);
    const complex w1 = -0.5 * Q + sq;
    const complex w2 = -0.5 * Q - sq;
    const complex u = std::pow(std::abs(w1) >= std::abs(w2) ? w1 : w2, 1.0 / 3.0);
    const complex v = std::abs(u) > 0.0 ? -P / (3.0 * u) : complex{};
    const complex omega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    complex rot{1.0, 0.0};
    for (int k = 0; k < 3; ++k) {
        roots[k] = u * rot + v * std::conj(rot) - shift;
        rot *= omega;
    }

    // Newton polish; keeps a step only if it reduces the residual.
    auto f = [&](complex z) { return ((z + c2) * z + c1) * z + c0; };
    auto df = [&](complex z) { return (3.0 * z + 2.0 * c2) * z + c1; };
    for (auto& z : roots) {
        for (int it = 0; it < 3; ++it) {
            const complex d = df(z);
            if (std::abs(d) == 0.0) break;
            const complex next = z - f(z) / d;
            if (std::abs(f(next)) >= std::abs(f(z))) break;
            z = next;
        }
    }
    return roots;
}

namespace detail {
inline void sort_descending_real(auto& values) {
    std::sort(values.begin(), values.end(), [](complex x, complex y) {
        return x.real() != y.real() ? x.real() > y.real() : x.imag() > y.imag();
    });
}
}  // namespace detail

/// Eigenvalues of a 4x4 matrix split into one decoupled diagonal entry (a row
/// and column with no off-diagonal entries, e.g. the atom population) and the
/// roots of the remaining 3x3 block.
struct Spectrum {
    std::array<complex, 4> all;        ///< sorted by descending real part
    std::optional<int> decoupled_index;
    std::array<complex, 3> remainder;  ///< sorted by descending real part
};

inline Spectrum spectrum(const Matrix4& M) {
    std::optional<int> decoupled;
    for (int k = 0; k < 4 && !decoupled; ++k) {
        bool isolated = true;
        for (int j = 0; j < 4; ++j)
            if (j != k && (M(k, j) != 0.0 || M(j, k) != 0.0)) isolated = false;
        if (isolated) decoupled = k;
    }

    Spectrum out;
    if (!decoupled) {
        Eigen::ComplexEigenSolver<Matrix4> solver(M, false);
        for (int k = 0; k < 4; ++k) out.all[k] = solver.eigenvalues()(k);
        detail::sort_descending_real(out.all);
        std::copy_n(out.all.begin(), 3, out.remainder.begin());
        return out;
    }

    std::array<int, 3> keep{};
    for (int k = 0, n = 0; k < 4; ++k)
        if (k != *decoupled) keep[n++] = k;
    Matrix3 B;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) B(r, c) = M(keep[r], keep[c]);
    const complex minors = B(0, 0) * B(1, 1) - B(0, 1) * B(1, 0) + B(0, 0) * B(2, 2) -
                           B(0, 2) * B(2, 0) + B(1, 1) * B(2, 2) - B(1, 2) * B(2, 1);
    out.remainder = cubic_roots(-B.trace(), minors, -B.determinant());
    out.decoupled_index = decoupled;
    detail::sort_descending_real(out.remainder);
    std::copy(out.remainder.begin(), out.remainder.end(), out.all.begin());
    out.all[3] = M(*decoupled, *decoupled);
    detail::sort_descending_real(out.all);
    return out;
}

inline std::array<complex, 4> eigenvalues(const Matrix4& M) { return spectrum(M).all; }

inline double max_real_part(std::span<const complex> values) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& z : values) m = std::max(m, z.real());
    return m;
}

inline constexpr double kMarginalBand = 1e-10;

struct StabilityReport {
    Matrix4 jacobian;
    CubicCoefficients coefficients;
    std::array<complex, 4> eigenvalues;
    double max_real_part = 0.0;
    bool stable = false;
    bool marginal = false;  ///< |max_real_part| within kMarginalBand
    bool routh_hurwitz_stable = false;
};

inline StabilityReport analyze(const SystemParams& params) {
    StabilityReport report;
    report.jacobian = build_jacobian(params);
    report.coefficients = characteristic_coefficients(params);
    report.eigenvalues = eigenvalues(report.jacobian);
    report.max_real_part = report.eigenvalues.front().real();
    report.marginal = std::abs(report.max_real_part) <= kMarginalBand;
    report.stable = report.max_real_part < 0.0;
    report.routh_hurwitz_stable = routh_hurwitz_stable(report.coefficients);
    return report;
}

}  // namespace agingsim::stability
