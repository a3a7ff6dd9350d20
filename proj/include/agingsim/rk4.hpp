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

#include <concepts>

namespace agingsim {

/// State types integrated by rk4_step form a real vector space.
template <class S>
concept VectorState = requires(S x, S y, double h) {
    { x + y } -> std::convertible_to<S>;
    { h * x } -> std::convertible_to<S>;
};

/// One classical fourth-order Runge-Kutta step of dx/dt = rhs(x).
template <VectorState S, class Rhs>
S rk4_step(const S& x, double dt, const Rhs& rhs) {
    const S k1 = rhs(x);
    const S k2 = rhs(x + (0.5 * dt) * k1);
    const S k3 = rhs(x + (0.5 * dt) * k2);
    const S k4 = rhs(x + dt * k3);
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace agingsim
