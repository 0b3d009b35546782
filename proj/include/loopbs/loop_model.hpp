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

// Time-bin loop model.
//
// A pulse train of n time bins passes through a fiber loop of length tau whose
// coupler is re-set before every bin arrives. Switch event t (1-based,
// t = 1..n+1) is the coupler state when bin t arrives; event n+1 flushes the
// loop. The coupler is a 2x2 unitary gamma with
//
//   input ports:  1 = loop, 2 = external line
//   output ports: 1 = external line, 2 = loop
//
// so gamma(1,1) = exit, gamma(1,2) = circulate, gamma(2,1) = bypass,
// gamma(2,2) = enter. Field emitted at event t is labelled output bin t-1.
// Events 1 and n+1 must be completely reflective (theta = 0) so that every
// photon stays inside the n-bin window.
//
// Matrices use the row convention a_i^dagger -> sum_j U(i,j) a_j^dagger,
// i = input bin, j = output bin, so consecutive passes compose as
// U = U_1 * U_2 * ... * U_m.

#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "loopbs/error.hpp"
#include "loopbs/matrix.hpp"

namespace loopbs {

/// One coupler event. `t` is the 1-based event index.
class SwitchSetting {
   public:
    SwitchSetting(int t, double theta, double phi = 0.0, double lam = 0.0)
        : t_(t), theta_(theta), phi_(phi), lam_(lam) {
        if (t < 1) {
            throw ValidationError("switch event index must be >= 1, got " + std::to_string(t));
        }
        if (!(theta >= 0.0 && theta <= std::numbers::pi / 2)) {
            throw ValidationError("switch theta must lie in [0, pi/2], got " + std::to_string(theta));
        }
        check_phase(phi, "phi");
        check_phase(lam, "lambda");
    }

    static SwitchSetting reflective(int t, double phi = 0.0) { return SwitchSetting(t, 0.0, phi, 0.0); }

    int t() const { return t_; }
    double theta() const { return theta_; }
    double phi() const { return phi_; }
    double lam() const { return lam_; }
    bool is_reflective() const { return theta_ == 0.0; }

    Complex exit() const { return std::polar(std::cos(theta_), phi_); }
    Complex circulate() const { return std::polar(std::sin(theta_), lam_); }
    Complex bypass() const { return -std::polar(std::sin(theta_), -lam_); }
    Complex enter() const { return std::polar(std::cos(theta_), -phi_); }

    bool operator==(const SwitchSetting &other) const = default;

   private:
    static void check_phase(double x, const char *name) {
        if (!(x > -std::numbers::pi && x <= std::numbers::pi)) {
            throw ValidationError(std::string("switch ") + name + " must lie in (-pi, pi], got " + std::to_string(x));
        }
    }

    int t_;
    double theta_;
    double phi_;
    double lam_;
};

/// The 2x2 coupler matrix gamma, indexed [input port][output port] (zero-based here).
inline ComplexMatrix switch_unitary(const SwitchSetting &s) {
    ComplexMatrix g(2, 2);
    g(0, 0) = s.exit();
    g(0, 1) = s.circulate();
    g(1, 0) = s.bypass();
    g(1, 1) = s.enter();
    return g;
}

/// One traversal of the inner loop: n+1 settings for events 1..n+1.
class LoopPass {
   public:
    LoopPass(size_t n, std::vector<SwitchSetting> settings) : n_(n), settings_(std::move(settings)) {
        if (n == 0) {
            throw ValidationError("loop pass needs at least one time bin");
        }
        if (settings_.size() != n + 1) {
            throw ValidationError("loop pass over " + std::to_string(n) + " bins needs " + std::to_string(n + 1) +
                                  " switch settings, got " + std::to_string(settings_.size()));
        }
        for (size_t k = 0; k < settings_.size(); k++) {
            if (settings_[k].t() != static_cast<int>(k + 1)) {
                throw ValidationError("switch settings must cover events 1..n+1 in order; position " +
                                      std::to_string(k + 1) + " holds event " + std::to_string(settings_[k].t()));
            }
        }
        if (!settings_.front().is_reflective() || !settings_.back().is_reflective()) {
            throw ValidationError("boundary events 1 and n+1 must be completely reflective (theta = 0)");
        }
    }

    /// Pass with every event reflective and all phases zero (the identity).
    static LoopPass reflective(size_t n) {
        std::vector<SwitchSetting> s;
        s.reserve(n + 1);
        for (size_t t = 1; t <= n + 1; t++) {
            s.push_back(SwitchSetting::reflective(static_cast<int>(t)));
        }
        return LoopPass(n, std::move(s));
    }

    size_t n() const { return n_; }
    const std::vector<SwitchSetting> &settings() const { return settings_; }
    /// Setting of 1-based event t.
    const SwitchSetting &at(size_t t) const { return settings_.at(t - 1); }

    bool operator==(const LoopPass &other) const = default;

   private:
    size_t n_;
    std::vector<SwitchSetting> settings_;
};

/// Ordered outer-loop round trips. Zero passes is the identity program.
class NestedLoopProgram {
   public:
    explicit NestedLoopProgram(size_t n, std::vector<LoopPass> passes = {},
                               std::optional<double> tau_seconds = std::nullopt)
        : n_(n), passes_(std::move(passes)), tau_seconds_(tau_seconds) {
        if (n == 0) {
            throw ValidationError("program needs at least one time bin");
        }
        for (size_t k = 0; k < passes_.size(); k++) {
            if (passes_[k].n() != n) {
                throw ValidationError("pass " + std::to_string(k) + " has n = " + std::to_string(passes_[k].n()) +
                                      " but the program has n = " + std::to_string(n));
            }
        }
        if (tau_seconds_ && !(*tau_seconds_ > 0 && std::isfinite(*tau_seconds_))) {
            throw ValidationError("tau_seconds must be positive");
        }
    }

    size_t n() const { return n_; }
    size_t size() const { return passes_.size(); }
    const std::vector<LoopPass> &passes() const { return passes_; }
    const std::optional<double> &tau_seconds() const { return tau_seconds_; }

    bool operator==(const NestedLoopProgram &other) const = default;

   private:
    size_t n_;
    std::vector<LoopPass> passes_;
    std::optional<double> tau_seconds_;
};

/// Closed-form transfer matrix of a single pass (1-based i input, j output):
///   U(i,j) = 0                                            i > j+1
///   U(i,j) = bypass(i)                                    i = j+1
///   U(i,j) = enter(i) exit(j+1) prod_{k=i+1..j} circ(k)   i <= j
/// Entries below the first subdiagonal are exact zeros.
inline ComplexMatrix single_pass_matrix(const LoopPass &pass) {
    size_t n = pass.n();
    ComplexMatrix u(n, n);
    for (size_t i = 1; i <= n; i++) {
        if (i >= 2) {
            u(i - 1, i - 2) = pass.at(i).bypass();
        }
        Complex enter = pass.at(i).enter();
        Complex circ = 1.0;
        for (size_t j = i; j <= n; j++) {
            if (j > i) {
                circ *= pass.at(j).circulate();
            }
            u(i - 1, j - 1) = enter * pass.at(j + 1).exit() * circ;
        }
    }
    return u;
}

inline UnitaryMatrix single_pass_unitary(const LoopPass &pass) { return UnitaryMatrix(single_pass_matrix(pass)); }

/// U_pass1 * U_pass2 * ... ; identity for an empty program.
inline UnitaryMatrix program_unitary(const NestedLoopProgram &prog) {
    if (prog.passes().empty()) {
        return UnitaryMatrix::identity(prog.n());
    }
    ComplexMatrix total = single_pass_matrix(prog.passes().front());
    for (size_t k = 1; k < prog.size(); k++) {
        total = matmul(total, single_pass_matrix(prog.passes()[k]));
    }
    return UnitaryMatrix(std::move(total), kProductTol);
}

/// Event-by-event simulation of one photon injected in 1-based `input_bin`.
/// Returns the amplitude in each output bin (index 0 = output bin 1).
inline std::vector<Complex> propagate_single_photon(const LoopPass &pass, size_t input_bin) {
    size_t n = pass.n();
    if (input_bin < 1 || input_bin > n) {
        throw ValidationError("input bin " + std::to_string(input_bin) + " outside 1.." + std::to_string(n));
    }
    std::vector<Complex> out(n);
    Complex loop = 0.0;
    for (size_t t = 1; t <= n + 1; t++) {
        Complex line = (t == input_bin) ? Complex(1.0) : Complex(0.0);
        const SwitchSetting &s = pass.at(t);
        Complex emitted = loop * s.exit() + line * s.bypass();
        loop = loop * s.circulate() + line * s.enter();
        if (t >= 2) {
            out[t - 2] = emitted;
        } else if (emitted != Complex(0.0)) {
            throw NumericalError("field emitted before the window opened");
        }
    }
    if (std::abs(loop) > 1e-12) {
        throw NumericalError("field left in the loop after the window closed");
    }
    return out;
}

}  // namespace loopbs
