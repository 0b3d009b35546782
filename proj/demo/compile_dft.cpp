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

// Compiles the 5-mode DFT into a loop schedule with both strategies and
// reports pass counts, reconstruction error and similarity.

#include <cstdio>

#include "loopbs/loopbs.hpp"

int main() {
    using namespace loopbs;
    UnitaryMatrix target = dft_matrix(5);
    for (auto strategy : {CompileStrategy::PerRotation, CompileStrategy::Packed}) {
        NestedLoopProgram prog = compile_unitary(target, strategy);
        UnitaryMatrix realized = program_unitary(prog);
        std::printf("%-12s passes=%2zu  error=%.3e  similarity=%.15f\n", to_string(strategy).c_str(), prog.size(),
                    max_abs_diff(realized, target), similarity(realized));
    }
}
