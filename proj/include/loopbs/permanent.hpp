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

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "loopbs/error.hpp"
#include "loopbs/matrix.hpp"

namespace loopbs {

inline constexpr size_t kRyserMaxSize = 30;
inline constexpr size_t kNaiveMaxSize = 8;

/// Ryser's inclusion-exclusion formula,
///   Per(A) = (-1)^k sum_{S subset of cols} (-1)^{|S|} prod_i sum_{j in S} A(i,j),
/// walking subsets in Gray-code order so each step adds or removes one column
/// from the running row sums. O(2^k k) time, O(k) extra space. The summation
/// order is fixed, so results are bit-reproducible.
inline Complex permanent_ryser(const ComplexMatrix &m) {
    if (!m.square()) {
        throw ValidationError("permanent needs a square matrix");
    }
    size_t k = m.rows();
    if (k > kRyserMaxSize) {
        throw ResourceError("permanent of a " + std::to_string(k) + "x" + std::to_string(k) +
                            " matrix exceeds the size cap of " + std::to_string(kRyserMaxSize));
    }
    std::vector<Complex> row_sums(k, 0.0);
    Complex total = 0.0;
    uint64_t gray = 0;
    uint64_t subsets = uint64_t{1} << k;
    for (uint64_t step = 1; step < subsets; step++) {
        size_t col = static_cast<size_t>(std::countr_zero(step));
        uint64_t bit = uint64_t{1} << col;
        gray ^= bit;
        if (gray & bit) {
            for (size_t i = 0; i < k; i++) {
                row_sums[i] += m(i, col);
            }
        } else {
            for (size_t i = 0; i < k; i++) {
                row_sums[i] -= m(i, col);
            }
        }
        Complex prod = row_sums[0];
        for (size_t i = 1; i < k; i++) {
            prod *= row_sums[i];
        }
        // (-1)^{k - |S|}
        if ((k - static_cast<size_t>(std::popcount(gray))) % 2 == 0) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    return total;
}

/// Sum over all k! permutations. Oracle only.
inline Complex permanent_naive(const ComplexMatrix &m) {
    if (!m.square()) {
        throw ValidationError("permanent needs a square matrix");
    }
    size_t k = m.rows();
    if (k > kNaiveMaxSize) {
        throw ResourceError("naive permanent is limited to k <= " + std::to_string(kNaiveMaxSize));
    }
    std::vector<size_t> perm(k);
    std::iota(perm.begin(), perm.end(), size_t{0});
    Complex total = 0.0;
    do {
        Complex prod = 1.0;
        for (size_t i = 0; i < k; i++) {
            prod *= m(i, perm[i]);
        }
        total += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

}  // namespace loopbs
