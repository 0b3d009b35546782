// Copyright 2026 The loopbs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "loopbs/loopbs.hpp"

namespace loopbs::testutil {

inline double uniform(std::mt19937_64 &rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double random_phase(std::mt19937_64 &rng) { return wrap_phase(uniform(rng, -std::numbers::pi, std::numbers::pi)); }

/// Random valid pass: interior theta uniform on [0, pi/2], all phases random,
/// boundary events reflective with random phases.
inline LoopPass random_pass(std::mt19937_64 &rng, size_t n) {
    std::vector<SwitchSetting> s;
    for (size_t t = 1; t <= n + 1; t++) {
        bool boundary = (t == 1 || t == n + 1);
        double theta = boundary ? 0.0 : uniform(rng, 0.0, std::numbers::pi / 2);
        s.emplace_back(static_cast<int>(t), theta, random_phase(rng), random_phase(rng));
    }
    return LoopPass(n, std::move(s));
}

inline ComplexMatrix random_matrix(std::mt19937_64 &rng, size_t rows, size_t cols) {
    ComplexMatrix m(rows, cols);
    for (size_t r = 0; r < rows; r++) {
        for (size_t c = 0; c < cols; c++) {
            m(r, c) = Complex(uniform(rng, -1, 1), uniform(rng, -1, 1));
        }
    }
    return m;
}

}  // namespace loopbs::testutil
