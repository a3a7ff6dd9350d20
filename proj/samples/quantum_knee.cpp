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

// Normalized mean boson number Q_q(p) for the quantum preset, with the knee
// that marks the aging transition.

#include <agingsim/sweep.hpp>

#include <cstdio>

int main() {
    using namespace agingsim;
    sweep::SweepSpec spec;
    spec.regime = sweep::Regime::Quantum;
    spec.fixed = presets::quantum(0.03);
    spec.axis1 = {sweep::AxisName::p, sweep::linspace_step(0.0, 0.02, 0.6)};
    const auto result = sweep::run_sweep(spec);

    for (const auto& row : result.rows) std::printf("p=%.2f  Q=%.6f  n=%.6f\n", row.x1, row.Q, row.mean_boson);
    for (const auto& cp : result.critical_points)
        if (cp.kind == "knee" && cp.value) std::printf("knee at p=%.2f (improvement %.2f)\n", *cp.value, cp.confidence);
}
