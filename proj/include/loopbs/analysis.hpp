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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "loopbs/error.hpp"
#include "loopbs/loop_model.hpp"
#include "loopbs/matrix.hpp"
#include "loopbs/rng.hpp"

namespace loopbs {

// ---------------------------------------------------------------------------
// Similarity to a balanced unitary

/// (1/n^3) (sum_{i,j} |U(i,j)|)^2. Equals 1 iff every |U(i,j)|^2 = 1/n.
inline double similarity(const ComplexMatrix &u) {
    if (!u.square()) {
        throw ValidationError("similarity needs a square matrix");
    }
    double residual = unitarity_residual(u);
    if (!(residual <= kInputUnitaryTol)) {
        throw ValidationError("similarity needs a unitary (residual " + std::to_string(residual) + ")");
    }
    double n = static_cast<double>(u.rows());
    double s = 0;
    for (const auto &z : u.data()) {
        s += std::abs(z);
    }
    return s * s / (n * n * n);
}

/// Normalized overlap (sum sqrt(|U|^2 |V|^2))^2 / (sum |U|^2 * sum |V|^2).
/// Works for any pair of equally shaped matrices.
inline double similarity_overlap(const ComplexMatrix &u, const ComplexMatrix &reference) {
    if (u.rows() != reference.rows() || u.cols() != reference.cols()) {
        throw ValidationError("similarity_overlap: shape mismatch");
    }
    double cross = 0, nu = 0, nv = 0;
    for (size_t k = 0; k < u.data().size(); k++) {
        double a = std::norm(u.data()[k]);
        double b = std::norm(reference.data()[k]);
        cross += std::sqrt(a * b);
        nu += a;
        nv += b;
    }
    return cross * cross / (nu * nv);
}

// ---------------------------------------------------------------------------
// Fixed-ratio loops

/// Boundary events reflective, events 2..n all real couplers of angle theta.
inline LoopPass fixed_ratio_pass(size_t n, double theta) {
    if (!(theta > 0.0 && theta < std::numbers::pi / 2)) {
        throw ValidationError("fixed-ratio theta must lie strictly inside (0, pi/2)");
    }
    if (n == 0) {
        throw ValidationError("fixed-ratio pass needs n >= 1");
    }
    std::vector<SwitchSetting> s;
    s.reserve(n + 1);
    s.push_back(SwitchSetting::reflective(1));
    for (size_t t = 2; t <= n; t++) {
        s.emplace_back(static_cast<int>(t), theta);
    }
    s.push_back(SwitchSetting::reflective(static_cast<int>(n + 1)));
    return LoopPass(n, std::move(s));
}

inline NestedLoopProgram fixed_ratio_program(size_t n, const std::vector<double> &thetas) {
    std::vector<LoopPass> passes;
    passes.reserve(thetas.size());
    for (double th : thetas) {
        passes.push_back(fixed_ratio_pass(n, th));
    }
    return NestedLoopProgram(n, std::move(passes));
}

struct SimilarityStudyResult {
    size_t n;
    size_t m;
    size_t trials;
    double best_s;
    std::vector<double> best_thetas;
    uint64_t seed;
};

inline constexpr double kMonteCarloThetaMin = 0.01;

/// Random search over per-loop coupler angles, theta ~ U(0.01, pi/2 - 0.01)
/// independently for every loop. Trial k draws from its own substream of
/// `seed`, and ties resolve to the lowest trial index, so the result does not
/// depend on `workers` (0 = hardware concurrency).
inline SimilarityStudyResult monte_carlo_max_similarity(size_t n, size_t m, size_t trials, uint64_t seed,
                                                        unsigned workers = 0) {
    if (n < 1) {
        throw ValidationError("monte carlo study needs n >= 1");
    }
    if (m < 1) {
        throw ValidationError("monte carlo study needs m >= 1 loops");
    }
    if (trials < 1) {
        throw ValidationError("monte carlo study needs at least one trial");
    }
    const double lo = kMonteCarloThetaMin;
    const double hi = std::numbers::pi / 2 - kMonteCarloThetaMin;

    auto draw = [&](size_t trial) {
        std::mt19937_64 rng(derive_seed(seed, trial));
        std::vector<double> thetas(m);
        for (auto &th : thetas) {
            th = lo + (hi - lo) * uniform01(rng);
        }
        return thetas;
    };

    std::vector<double> scores(trials);
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (size_t k = next++; k < trials; k = next++) {
            scores[k] = similarity(program_unitary(fixed_ratio_program(n, draw(k))));
        }
    };
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    workers = static_cast<unsigned>(std::min<size_t>(workers, trials));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; w++) {
            pool.emplace_back(worker);
        }
    }

    size_t best = 0;
    for (size_t k = 1; k < trials; k++) {
        if (scores[k] > scores[best]) {
            best = k;
        }
    }
    return SimilarityStudyResult{n, m, trials, scores[best], draw(best), seed};
}

// ---------------------------------------------------------------------------
// Loss

struct LossParams {
    double eta_inner;
    double eta_outer;

    void validate() const {
        if (!(eta_inner >= 0 && eta_inner <= 1) || !(eta_outer >= 0 && eta_outer <= 1)) {
            throw ValidationError("efficiencies must lie in [0, 1]");
        }
    }
};

/// Worst-case survival probability (eta_inner^n eta_outer)^roundtrips.
inline double net_efficiency(const LossParams &loss, size_t n, size_t roundtrips) {
    loss.validate();
    double per_trip = std::pow(loss.eta_inner, static_cast<double>(n)) * loss.eta_outer;
    return std::pow(per_trip, static_cast<double>(roundtrips));
}

/// Transfer matrix of one pass with inner-loop loss. Each path's amplitude is
/// attenuated by sqrt(eta_inner) per circulation: zero for the bypass term,
/// j - i + 1 for a photon entering at event i and leaving at event j+1.
inline ComplexMatrix lossy_pass_matrix(const LoopPass &pass, const LossParams &loss) {
    loss.validate();
    ComplexMatrix u = single_pass_unitary(pass).matrix();
    if (loss.eta_inner == 1.0) {
        return u;
    }
    double amp = std::sqrt(loss.eta_inner);
    size_t n = pass.n();
    for (size_t i = 0; i < n; i++) {
        double atten = amp;
        for (size_t j = i; j < n; j++) {
            u(i, j) *= atten;
            atten *= amp;
        }
    }
    return u;
}

/// Product of lossy passes, each also attenuated by sqrt(eta_outer) for its outer round trip.
inline ComplexMatrix lossy_program_matrix(const NestedLoopProgram &prog, const LossParams &loss) {
    loss.validate();
    ComplexMatrix total = ComplexMatrix::identity(prog.n());
    double outer = std::sqrt(loss.eta_outer);
    for (const auto &pass : prog.passes()) {
        ComplexMatrix step = lossy_pass_matrix(pass, loss);
        for (size_t r = 0; r < step.rows(); r++) {
            for (size_t c = 0; c < step.cols(); c++) {
                step(r, c) *= outer;
            }
        }
        total = matmul(total, step);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Timing

struct TimingParams {
    double tau;
    double delta;
    double sigma;

    void validate() const {
        if (!(tau > 0 && std::isfinite(tau))) {
            throw ValidationError("tau must be positive");
        }
        if (!(delta >= 0 && std::isfinite(delta))) {
            throw ValidationError("delta must be nonnegative");
        }
        if (!(sigma > 0 && std::isfinite(sigma))) {
            throw ValidationError("sigma must be positive");
        }
    }
};

struct FeasibilityReport {
    bool bin_ok;
    bool dephasing_ok;
    int64_t n_max_bins;      // largest n with n*delta < tau; -1 when delta = 0 (unbounded)
    double dephasing_ratio;  // n*delta/sigma
    double bin_margin;       // tau - n*delta
    double dephasing_margin; // ratio_max - n*delta/sigma
};

namespace detail {

/// n*delta < tau, with products within a few ulps of tau counted as equal.
inline bool bins_distinguishable(double n, double delta, double tau) {
    double drift = n * delta;
    if (std::abs(drift - tau) <= 8 * std::numeric_limits<double>::epsilon() * tau) {
        return false;
    }
    return drift < tau;
}

}  // namespace detail

/// Worst-case accumulated mismatch n*delta against the bin spacing tau
/// (time-bin ambiguity once n*delta >= tau) and against the wavepacket width
/// sigma (dephasing; "much less than" taken as ratio <= dephasing_ratio_max).
inline FeasibilityReport timing_feasibility(size_t n, const TimingParams &t, double dephasing_ratio_max = 0.1) {
    t.validate();
    if (!(dephasing_ratio_max > 0)) {
        throw ValidationError("dephasing ratio threshold must be positive");
    }
    double nd = static_cast<double>(n);
    FeasibilityReport r{};
    r.bin_ok = detail::bins_distinguishable(nd, t.delta, t.tau);
    r.dephasing_ratio = nd * t.delta / t.sigma;
    r.dephasing_ok = r.dephasing_ratio <= dephasing_ratio_max;
    r.bin_margin = t.tau - nd * t.delta;
    r.dephasing_margin = dephasing_ratio_max - r.dephasing_ratio;
    if (t.delta == 0) {
        r.n_max_bins = -1;
    } else {
        double guess = std::floor(t.tau / t.delta);
        if (guess > 9e15) {
            r.n_max_bins = std::numeric_limits<int64_t>::max();
        } else {
            auto k = static_cast<int64_t>(guess) + 1;
            while (k > 0 && !detail::bins_distinguishable(static_cast<double>(k), t.delta, t.tau)) {
                k--;
            }
            r.n_max_bins = k;
        }
    }
    return r;
}

}  // namespace loopbs
