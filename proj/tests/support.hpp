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
#include <cstdint>
#include <random>

namespace testing {

/// Seeded generator for the hand-rolled property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    /// Classical-regime parameters with 2 g^2 N < J V.
    agingsim::SystemParams classical_params() {
        agingsim::SystemParams p;
        p.a = uniform(10.0, 150.0);
        p.b = uniform(10.0, 150.0);
        p.V = uniform(20.0, 600.0);
        p.J = uniform(20.0, 600.0);
        p.N = integer(10, 200);
        const double g_max = std::sqrt(0.45 * p.J * p.V / p.N);
        p.g = uniform(0.0, g_max);
        p.p = uniform(0.0, 1.0);
        return p;
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace testing
