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

#include <cmath>
#include <cstddef>
#include <limits>
#include <algorithm>
#include <span>
#include <utility>
#include <vector>

namespace agingsim {

struct CurvePoint {
    double x = 0.0;
    double y = 0.0;
};

struct KneeOptions {
    int min_side = 10;              ///< grid points required strictly on each side of the breakpoint
    double min_improvement = 0.2;   ///< required relative SSE reduction over one line
};

struct KneeFit {
    double breakpoint = 0.0;
    std::size_t index = 0;
    double left_slope = 0.0;
    double right_slope = 0.0;
    double sse_two_segment = 0.0;
    double sse_one_line = 0.0;
    double improvement = 0.0;  ///< (sse_one_line - sse_two_segment) / sse_one_line
};

namespace detail {

/// Least-squares fit of y on the given basis columns (at most 3); returns SSE
/// and coefficients.
inline std::pair<double, std::vector<double>> least_squares(std::span<const CurvePoint> pts, auto&& basis,
                                                            int n_basis) {
    double G[3][3] = {};
    double r[3] = {};
    for (const auto& pt : pts) {
        double phi[3];
        basis(pt.x, phi);
        for (int i = 0; i < n_basis; ++i) {
            r[i] += phi[i] * pt.y;
            for (int j = 0; j < n_basis; ++j) G[i][j] += phi[i] * phi[j];
        }
    }
    // Gaussian elimination with partial pivoting on the small normal system.
    for (int c = 0; c < n_basis; ++c) {
        int best = c;
        for (int k = c + 1; k < n_basis; ++k)
            if (std::abs(G[k][c]) > std::abs(G[best][c])) best = k;
        std::swap(G[c], G[best]);
        std::swap(r[c], r[best]);
        if (G[c][c] == 0.0) continue;
        for (int k = c + 1; k < n_basis; ++k) {
            const double f = G[k][c] / G[c][c];
            for (int j = c; j < n_basis; ++j) G[k][j] -= f * G[c][j];
            r[k] -= f * r[c];
        }
    }
    std::vector<double> coef(n_basis, 0.0);
    for (int c = n_basis - 1; c >= 0; --c) {
        double s = r[c];
        for (int j = c + 1; j < n_basis; ++j) s -= G[c][j] * coef[j];
        coef[c] = G[c][c] != 0.0 ? s / G[c][c] : 0.0;
    }
    double sse = 0.0;
    for (const auto& pt : pts) {
        double phi[3];
        basis(pt.x, phi);
        double fit = 0.0;
        for (int i = 0; i < n_basis; ++i) fit += coef[i] * phi[i];
        sse += (pt.y - fit) * (pt.y - fit);
    }
    return {sse, coef};
}

}  // namespace detail

/// Locates the knee of a sampled curve as the grid breakpoint of the
/// continuous two-segment linear fit with the smallest squared residual.
inline KneeFit detect_knee(std::span<const CurvePoint> curve, const KneeOptions& opts = {}) {
    const auto n = static_cast<int>(curve.size());
    if (n < 2 * opts.min_side + 1)
        throw Error(ErrorKind::NoKnee, "curve has " + std::to_string(n) + " points; need at least " +
                                           std::to_string(2 * opts.min_side + 1));
    for (int i = 1; i < n; ++i)
        if (!(curve[i].x > curve[i - 1].x))
            throw Error(ErrorKind::InvalidArgument, "curve abscissae must be strictly increasing");

    const auto line = detail::least_squares(
        curve, [](double x, double* phi) { phi[0] = 1.0; phi[1] = x; }, 2);

    KneeFit best;
    best.sse_one_line = line.first;
    best.sse_two_segment = std::numeric_limits<double>::infinity();
    for (int k = opts.min_side; k < n - opts.min_side; ++k) {
        const double xk = curve[k].x;
        const auto hinge = detail::least_squares(
            curve,
            [xk](double x, double* phi) {
                phi[0] = 1.0;
                phi[1] = std::min(x - xk, 0.0);
                phi[2] = std::max(x - xk, 0.0);
            },
            3);
        if (hinge.first < best.sse_two_segment) {
            best.sse_two_segment = hinge.first;
            best.index = static_cast<std::size_t>(k);
            best.breakpoint = xk;
            best.left_slope = hinge.second[1];
            best.right_slope = hinge.second[2];
        }
    }
    double spread = 0.0, mean = 0.0;
    for (const auto& c : curve) mean += c.y / n;
    for (const auto& c : curve) spread += (c.y - mean) * (c.y - mean);
    if (!(best.sse_one_line > 1e-24 * spread))
        throw Error(ErrorKind::NoKnee, "curve is exactly linear");
    best.improvement = (best.sse_one_line - best.sse_two_segment) / best.sse_one_line;
    if (best.improvement < opts.min_improvement)
        throw Error(ErrorKind::NoKnee, "two segments improve the residual by only " +
                                           std::to_string(100.0 * best.improvement) + "%");
    return best;
}

}  // namespace agingsim
