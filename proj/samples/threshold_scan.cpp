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

// Closed-form threshold p_cmin against the coupling g, with the leading
// eigenvalue of the linearization at each threshold as a check.

#include <agingsim/stability.hpp>

#include <cstdio>

int main() {
    using namespace agingsim;
    std::printf("%6s %10s %14s\n", "g", "p_cmin", "max Re(lambda)");
    for (double g = 0.0; g <= 4.0 + 1e-9; g += 0.5) {
        const auto params = presets::classical(g);
        const double pc = stability::p_cmin(params);
        const auto report = stability::analyze(params.with_p(pc));
        std::printf("%6.2f %10.6f %14.3e\n", g, pc, report.max_real_part);
    }
}
