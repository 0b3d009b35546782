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

// Lowering of target unitaries onto loop passes.
//
// A pass whose only non-reflective event is q+1 acts as the coupler matrix
// gamma on bins (q, q+1) and as the identity elsewhere. Any unitary is a
// product of such adjacent SU(2) blocks followed by a diagonal of phases,
// which a fully reflective pass realizes through its event phases.

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "loopbs/error.hpp"
#include "loopbs/loop_model.hpp"
#include "loopbs/matrix.hpp"

namespace loopbs {

/// Adjacent rotation on 1-based bins (q, q+1), parameterized like a SwitchSetting.
struct GivensStep {
    size_t q;
    double theta;
    double phi;
    double lam;

    bool operator==(const GivensStep &other) const = default;
};

struct PhaseLayer {
    std::vector<double> deltas;

    bool operator==(const PhaseLayer &other) const = default;
};

struct Decomposition {
    std::vector<GivensStep> steps;  // application order
    PhaseLayer phases;
};

enum class CompileStrategy { PerRotation, Packed };

inline std::string to_string(CompileStrategy s) { return s == CompileStrategy::Packed ? "packed" : "per-rotation"; }

inline CompileStrategy parse_strategy(const std::string &s) {
    if (s == "per-rotation") {
        return CompileStrategy::PerRotation;
    }
    if (s == "packed") {
        return CompileStrategy::Packed;
    }
    throw ValidationError("unknown strategy '" + s + "' (expected per-rotation or packed)");
}

/// n x n identity with the 2x2 block of `step` on bins (q, q+1).
inline ComplexMatrix embed_step(size_t n, const GivensStep &step) {
    if (step.q < 1 || step.q + 1 > n) {
        throw ValidationError("rotation index q = " + std::to_string(step.q) + " outside 1.." + std::to_string(n - 1));
    }
    ComplexMatrix g = switch_unitary(SwitchSetting(2, step.theta, step.phi, step.lam));
    ComplexMatrix m = ComplexMatrix::identity(n);
    size_t a = step.q - 1;
    m(a, a) = g(0, 0);
    m(a, a + 1) = g(0, 1);
    m(a + 1, a) = g(1, 0);
    m(a + 1, a + 1) = g(1, 1);
    return m;
}

/// One pass carrying several adjacent rotations. Rotations must act on
/// disjoint pairs with at least one reflective event between them.
inline LoopPass layer_pass(size_t n, const std::vector<GivensStep> &steps) {
    std::vector<SwitchSetting> settings;
    settings.reserve(n + 1);
    for (size_t t = 1; t <= n + 1; t++) {
        settings.push_back(SwitchSetting::reflective(static_cast<int>(t)));
    }
    std::vector<bool> used(n + 2, false);
    for (const auto &s : steps) {
        if (s.q < 1 || s.q + 1 > n) {
            throw ValidationError("rotation index q = " + std::to_string(s.q) + " outside 1.." +
                                  std::to_string(n == 0 ? 0 : n - 1));
        }
        size_t event = s.q + 1;
        if (used[event] || used[event - 1] || used[event + 1]) {
            throw ValidationError("rotations sharing a pass must act on disjoint bin pairs");
        }
        used[event] = true;
        settings[event - 1] = SwitchSetting(static_cast<int>(event), s.theta, s.phi, s.lam);
    }
    return LoopPass(n, std::move(settings));
}

/// Pass that applies the coupler (theta, phi, lam) to bins (q, q+1) only.
inline LoopPass rotation_pass(size_t n, size_t q, double theta, double phi = 0.0, double lam = 0.0) {
    return layer_pass(n, {GivensStep{q, theta, phi, lam}});
}

/// Fully reflective pass realizing diag(exp(i delta_1), ..., exp(i delta_n)).
/// Event phases telescope: phi(1) = 0, phi(t+1) = delta_t + phi(t).
inline LoopPass phase_pass(size_t n, const PhaseLayer &layer) {
    if (layer.deltas.size() != n) {
        throw ValidationError("phase layer has " + std::to_string(layer.deltas.size()) + " entries, expected " +
                              std::to_string(n));
    }
    std::vector<SwitchSetting> settings;
    settings.reserve(n + 1);
    double phi = 0.0;
    settings.push_back(SwitchSetting::reflective(1, 0.0));
    for (size_t t = 1; t <= n; t++) {
        phi = wrap_phase(phi + layer.deltas[t - 1]);
        settings.push_back(SwitchSetting::reflective(static_cast<int>(t + 1), phi));
    }
    return LoopPass(n, std::move(settings));
}

namespace detail {

inline double canonical_arg(Complex z) { return wrap_phase(std::arg(z)); }

/// Step whose block is [[alpha, beta], [-conj(beta), conj(alpha)]].
inline GivensStep step_from_su2(size_t q, Complex alpha, Complex beta) {
    double theta = std::atan2(std::abs(beta), std::abs(alpha));
    theta = std::clamp(theta, 0.0, std::numbers::pi / 2);
    return GivensStep{q, theta, canonical_arg(alpha), canonical_arg(beta)};
}

/// SU(2) block entries (alpha, beta) of a step, in the same convention.
inline std::pair<Complex, Complex> su2_of(const GivensStep &s) {
    return {std::polar(std::cos(s.theta), s.phi), std::polar(std::sin(s.theta), s.lam)};
}

/// rows (r, r+1) <- A * rows, A = [[a00, a01], [a10, a11]].
inline void apply_left(ComplexMatrix &m, size_t r, Complex a00, Complex a01, Complex a10, Complex a11) {
    for (size_t c = 0; c < m.cols(); c++) {
        Complex x = m(r, c);
        Complex y = m(r + 1, c);
        m(r, c) = a00 * x + a01 * y;
        m(r + 1, c) = a10 * x + a11 * y;
    }
}

/// cols (c, c+1) <- cols * B, B = [[b00, b01], [b10, b11]].
inline void apply_right(ComplexMatrix &m, size_t c, Complex b00, Complex b01, Complex b10, Complex b11) {
    for (size_t r = 0; r < m.rows(); r++) {
        Complex x = m(r, c);
        Complex y = m(r, c + 1);
        m(r, c) = x * b00 + y * b10;
        m(r, c + 1) = x * b01 + y * b11;
    }
}

/// Zeroes m(r+1, c) by mixing rows (r, r+1). Returns the block B such that the
/// original rows equal B applied to the new rows, or nullopt if already zero.
inline std::optional<std::pair<Complex, Complex>> null_from_left(ComplexMatrix &m, size_t r, size_t c) {
    Complex x = m(r, c);
    Complex y = m(r + 1, c);
    if (y == Complex(0.0)) {
        return std::nullopt;
    }
    double norm = std::hypot(std::abs(x), std::abs(y));
    Complex alpha = -x / norm;
    Complex beta = std::conj(y) / norm;
    // A = B^dagger = [[conj(alpha), -beta], [conj(beta), alpha]]
    apply_left(m, r, std::conj(alpha), -beta, std::conj(beta), alpha);
    m(r + 1, c) = 0.0;
    return std::make_pair(alpha, beta);
}

/// Zeroes m(r, c) by mixing columns (c, c+1) with R = [[a, b], [-conj(b), conj(a)]].
/// Returns (a, b) or nullopt if already zero.
inline std::optional<std::pair<Complex, Complex>> null_from_right(ComplexMatrix &m, size_t r, size_t c) {
    Complex x = m(r, c);
    Complex y = m(r, c + 1);
    if (x == Complex(0.0)) {
        return std::nullopt;
    }
    double norm = std::hypot(std::abs(x), std::abs(y));
    Complex a = y / norm;
    Complex b = std::conj(x) / norm;
    apply_right(m, c, a, b, -std::conj(b), std::conj(a));
    m(r, c) = 0.0;
    return std::make_pair(a, b);
}

inline void require_unitary_target(const ComplexMatrix &u) {
    if (!u.square()) {
        throw ValidationError("target must be square");
    }
    double residual = unitarity_residual(u);
    if (!(residual <= kInputUnitaryTol)) {
        throw NumericalError("target is not unitary: max|U^dagger U - I| = " + std::to_string(residual));
    }
}

inline PhaseLayer diagonal_phases(const ComplexMatrix &m) {
    PhaseLayer layer;
    layer.deltas.reserve(m.rows());
    for (size_t k = 0; k < m.rows(); k++) {
        layer.deltas.push_back(canonical_arg(m(k, k)));
    }
    return layer;
}

}  // namespace detail

/// Triangular nulling with adjacent rotations only. Columns are processed left
/// to right; within a column, entries are nulled bottom-up with rotations on
/// rows (row-1, row). The result satisfies
///   U = embed(steps[0]) * embed(steps[1]) * ... * diag(exp(i deltas)).
inline Decomposition decompose_adjacent_givens(const ComplexMatrix &target) {
    detail::require_unitary_target(target);
    size_t n = target.rows();
    ComplexMatrix m = target;
    Decomposition out;
    for (size_t c = 0; c + 1 < n; c++) {
        for (size_t r = n - 1; r > c; r--) {
            auto block = detail::null_from_left(m, r - 1, c);
            if (block) {
                out.steps.push_back(detail::step_from_su2(r, block->first, block->second));
            }
        }
    }
    out.phases = detail::diagonal_phases(m);
    return out;
}

/// Rectangular (depth-n) variant: alternating row and column nulling, with the
/// column-side blocks moved past the diagonal. Same reconstruction contract as
/// decompose_adjacent_givens; steps come out in an order whose dependency
/// depth is at most n.
inline Decomposition decompose_rectangular(const ComplexMatrix &target) {
    detail::require_unitary_target(target);
    size_t n = target.rows();
    ComplexMatrix m = target;

    struct Block {
        size_t q;
        Complex alpha;
        Complex beta;
    };
    std::vector<Block> left;   // U = B_left... * D * ...
    std::vector<Block> right;  // ... * D * B_right (reverse nulling order)

    for (size_t i = 1; i < n; i++) {
        if (i % 2 == 1) {
            for (size_t j = 0; j < i; j++) {
                size_t r = n - 1 - j;
                size_t c = i - 1 - j;
                auto ab = detail::null_from_right(m, r, c);
                if (ab) {
                    // R^dagger = [[conj(a), -b], [conj(b), a]]: alpha = conj(a), beta = -b.
                    right.push_back(Block{c + 1, std::conj(ab->first), -ab->second});
                }
            }
        } else {
            for (size_t j = 1; j <= i; j++) {
                size_t r = n + j - i - 1;
                auto ab = detail::null_from_left(m, r - 1, j - 1);
                if (ab) {
                    left.push_back(Block{r, ab->first, ab->second});
                }
            }
        }
    }

    // U = L_1 ... L_a * D * R_b ... R_1. Push D to the far right by
    // conjugating each trailing block: D * B = (D_blk B D_blk^-1) * D.
    std::vector<Complex> diag(n);
    for (size_t k = 0; k < n; k++) {
        diag[k] = m(k, k) / std::abs(m(k, k));
    }
    Decomposition out;
    for (const auto &b : left) {
        out.steps.push_back(detail::step_from_su2(b.q, b.alpha, b.beta));
    }
    for (auto it = right.rbegin(); it != right.rend(); ++it) {
        size_t a = it->q - 1;
        Complex d0 = diag[a];
        Complex d1 = diag[a + 1];
        // (D B D^-1)(0,0) = alpha, (0,1) = beta * d0 / d1.
        out.steps.push_back(detail::step_from_su2(it->q, it->alpha, it->beta * d0 / d1));
    }
    out.phases = detail::diagonal_phases(m);
    return out;
}

/// Product of the embedded steps followed by the phase diagonal.
inline ComplexMatrix reconstruct(size_t n, const Decomposition &d) {
    ComplexMatrix total = ComplexMatrix::identity(n);
    for (const auto &s : d.steps) {
        total = matmul(total, embed_step(n, s));
    }
    for (size_t c = 0; c < n; c++) {
        Complex ph = std::polar(1.0, d.phases.deltas.at(c));
        for (size_t r = 0; r < n; r++) {
            total(r, c) *= ph;
        }
    }
    return total;
}

/// As-soon-as-possible layering: each step lands one layer after the last
/// step touching either of its bins.
inline std::vector<std::vector<GivensStep>> schedule_layers(const std::vector<GivensStep> &steps, size_t n) {
    std::vector<size_t> ready(n + 2, 0);
    std::vector<std::vector<GivensStep>> layers;
    for (const auto &s : steps) {
        size_t layer = std::max(ready[s.q], ready[s.q + 1]);
        if (layer >= layers.size()) {
            layers.resize(layer + 1);
        }
        layers[layer].push_back(s);
        ready[s.q] = ready[s.q + 1] = layer + 1;
    }
    return layers;
}

inline bool is_trivial(const PhaseLayer &layer) {
    return std::all_of(layer.deltas.begin(), layer.deltas.end(), [](double d) { return d == 0.0; });
}

/// Lowers a unitary to a loop program reproducing it.
///   per-rotation: one pass per adjacent rotation, then one phase pass
///                 (at most n(n-1)/2 + 1 passes).
///   packed:       rectangular decomposition scheduled into shared passes
///                 (at most n + 1 passes).
/// The phase pass is omitted when every phase is exactly zero.
inline NestedLoopProgram compile_unitary(const ComplexMatrix &target,
                                         CompileStrategy strategy = CompileStrategy::PerRotation,
                                         std::optional<double> tau_seconds = std::nullopt) {
    size_t n = target.rows();
    std::vector<LoopPass> passes;
    Decomposition d;
    if (strategy == CompileStrategy::PerRotation) {
        d = decompose_adjacent_givens(target);
        for (const auto &s : d.steps) {
            passes.push_back(layer_pass(n, {s}));
        }
    } else {
        d = decompose_rectangular(target);
        for (const auto &layer : schedule_layers(d.steps, n)) {
            passes.push_back(layer_pass(n, layer));
        }
    }
    if (!is_trivial(d.phases)) {
        passes.push_back(phase_pass(n, d.phases));
    }
    return NestedLoopProgram(n, std::move(passes), tau_seconds);
}

/// n x n identity with the coupler (theta, phi, lam) embedded on 1-based bins a < b.
inline ComplexMatrix embedded_pair_target(size_t n, size_t a, size_t b, double theta, double phi, double lam) {
    ComplexMatrix g = switch_unitary(SwitchSetting(2, theta, phi, lam));
    ComplexMatrix m = ComplexMatrix::identity(n);
    m(a - 1, a - 1) = g(0, 0);
    m(a - 1, b - 1) = g(0, 1);
    m(b - 1, a - 1) = g(1, 0);
    m(b - 1, b - 1) = g(1, 1);
    return m;
}

/// Coupler between arbitrary 1-based bins a < b. Bin b is swap-routed down to
/// a+1 with full couplers, the rotation is applied on (a, a+1), and the routing
/// is undone. The routing leaves sign flips on the rows of bins a+1..b, which a
/// leading phase pass cancels.
inline NestedLoopProgram pairwise_bs_program(size_t n, size_t a, size_t b, double theta, double phi = 0.0,
                                             double lam = 0.0) {
    if (!(a >= 1 && a < b && b <= n)) {
        throw ValidationError("pairwise coupler needs 1 <= a < b <= n, got a = " + std::to_string(a) +
                              ", b = " + std::to_string(b) + ", n = " + std::to_string(n));
    }
    std::vector<LoopPass> passes;
    if (b == a + 1) {
        passes.push_back(rotation_pass(n, a, theta, phi, lam));
        return NestedLoopProgram(n, std::move(passes));
    }
    // Swap block [[0, 1], [-1, 0]]: routing down multiplies bin b by -1 per
    // hop; routing back flips each bin in between once.
    PhaseLayer fix{std::vector<double>(n, 0.0)};
    size_t hops = b - a - 1;
    for (size_t k = a + 1; k < b; k++) {
        fix.deltas[k - 1] = std::numbers::pi;
    }
    fix.deltas[b - 1] = (hops % 2 == 1) ? std::numbers::pi : 0.0;
    passes.push_back(phase_pass(n, fix));
    for (size_t q = b - 1; q > a; q--) {
        passes.push_back(rotation_pass(n, q, std::numbers::pi / 2));
    }
    passes.push_back(rotation_pass(n, a, theta, phi, lam));
    for (size_t q = a + 1; q < b; q++) {
        passes.push_back(rotation_pass(n, q, std::numbers::pi / 2));
    }
    return NestedLoopProgram(n, std::move(passes));
}

}  // namespace loopbs
