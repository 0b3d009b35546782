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

// Two photons on a single balanced coupler pass: the (1,1) outcome vanishes.

#include <cstdio>
#include <numbers>

#include "loopbs/loopbs.hpp"

int main() {
    using namespace loopbs;
    LoopPass pass = rotation_pass(2, 1, std::numbers::pi / 4);
    ProbabilityTable table = output_distribution(single_pass_unitary(pass), OccupationConfiguration({1, 1}));
    std::fputs(distribution_to_csv(table).c_str(), stdout);

    auto shots = sample(table, 10, 2024);
    std::fputs(samples_to_csv(shots).c_str(), stdout);
}
