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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "cli_harness.hpp"
#include "loopbs/loopbs.hpp"
#include "test_util.hpp"

using namespace loopbs;
using loopbs::testutil::random_matrix;
using loopbs::testutil::random_pass;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string &what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

Outcome single_pass_closed_form() {
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(101);
    double worst_row = 0.0;
    double worst_unitarity = 0.0;
    for (int trial = 0; trial < 1000; trial++) {
        size_t n = 2 + trial % 15;
        LoopPass pass = random_pass(rng, n);
        ComplexMatrix u = single_pass_matrix(pass);
        for (size_t i = 0; i < n; i++) {
            auto row = propagate_single_photon(pass, i + 1);
            for (size_t j = 0; j < n; j++) {
                worst_row = std::max(worst_row, std::abs(u(i, j) - row[j]));
                if (i > j + 1) {
                    o.require(u(i, j) == Complex(0.0, 0.0), "nonzero entry below the subdiagonal");
                }
            }
        }
        worst_unitarity = std::max(worst_unitarity, unitarity_residual(u));
    }
    double elapsed = seconds_since(start);
    o.require(worst_row <= 1e-12, "row mismatch " + fmt(worst_row));
    o.require(worst_unitarity <= 1e-10, "unitarity residual " + fmt(worst_unitarity));
    o.require(elapsed < 10.0, "runtime " + fmt(elapsed) + " s");
    if (o.ok) {
        o.detail = "max row diff " + fmt(worst_row) + ", max residual " + fmt(worst_unitarity) + ", " +
                   fmt(elapsed) + " s";
    }
    return o;
}

Outcome compiler_round_trip() {
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int trial = 0; trial < 200; trial++) {
        size_t n = 2 + trial % 7;
        UnitaryMatrix target = haar_random_unitary(n, 5000 + trial);
        for (auto strategy : {CompileStrategy::PerRotation, CompileStrategy::Packed}) {
            NestedLoopProgram prog = compile_unitary(target, strategy);
            worst = std::max(worst, max_abs_diff(program_unitary(prog), target));
            o.require(prog.size() <= n * (n - 1) / 2 + 1,
                      to_string(strategy) + " used " + std::to_string(prog.size()) + " passes at n = " +
                          std::to_string(n));
        }
    }
    double elapsed = seconds_since(start);
    o.require(worst < 1e-8, "reconstruction error " + fmt(worst));
    o.require(elapsed < 30.0, "runtime " + fmt(elapsed) + " s");
    if (o.ok) {
        o.detail = "max error " + fmt(worst) + ", " + fmt(elapsed) + " s";
    }
    return o;
}

Outcome pairwise_coverage() {
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(202);
    double worst = 0.0;
    size_t pairs = 0;
    for (size_t n = 2; n <= 10; n++) {
        for (size_t a = 1; a <= n; a++) {
            for (size_t b = a + 1; b <= n; b++) {
                double theta = loopbs::testutil::uniform(rng, 0.0, std::numbers::pi / 2);
                double phi = loopbs::testutil::random_phase(rng);
                double lam = loopbs::testutil::random_phase(rng);
                NestedLoopProgram prog = pairwise_bs_program(n, a, b, theta, phi, lam);
                worst = std::max(worst,
                                 max_abs_diff(program_unitary(prog), embedded_pair_target(n, a, b, theta, phi, lam)));
                pairs++;
            }
        }
    }
    double elapsed = seconds_since(start);
    o.require(worst <= 1e-10, "pair mismatch " + fmt(worst));
    o.require(elapsed < 10.0, "runtime " + fmt(elapsed) + " s");
    if (o.ok) {
        o.detail = std::to_string(pairs) + " pairs, max error " + fmt(worst) + ", " + fmt(elapsed) + " s";
    }
    return o;
}

Outcome permanent_kernel() {
    Outcome o;
    std::mt19937_64 rng(303);
    double worst = 0.0;
    for (int trial = 0; trial < 500; trial++) {
        size_t k = 1 + trial % 7;
        ComplexMatrix m = random_matrix(rng, k, k);
        Complex naive = permanent_naive(m);
        double rel = std::abs(permanent_ryser(m) - naive) / std::abs(naive);
        worst = std::max(worst, rel);
    }
    ComplexMatrix big = random_matrix(rng, 20, 20);
    auto start = std::chrono::steady_clock::now();
    Complex per = permanent_ryser(big);
    double elapsed = seconds_since(start);
    o.require(worst <= 1e-10, "relative mismatch " + fmt(worst));
    o.require(std::isfinite(per.real()) && std::isfinite(per.imag()), "20x20 permanent not finite");
    o.require(elapsed < 2.0, "20x20 runtime " + fmt(elapsed) + " s");
    if (o.ok) {
        o.detail = "max relative diff " + fmt(worst) + ", 20x20 in " + fmt(elapsed) + " s";
    }
    return o;
}

Outcome statistics_oracle() {
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    double worst_tv = 0.0;
    double worst_sum = 0.0;
    size_t cases = 0;
    for (size_t n = 1; n <= 5; n++) {
        for (size_t p = 1; p <= 3; p++) {
            UnitaryMatrix u = haar_random_unitary(n, 100 * n + p);
            for (const auto &in : enumerate_configurations(n, p)) {
                ProbabilityTable exact = output_distribution(u, in);
                ProbabilityTable oracle = fock_oracle_distribution(u, in);
                worst_tv = std::max(worst_tv, total_variation(exact, oracle));
                worst_sum = std::max({worst_sum, std::abs(exact.total() - 1.0), std::abs(oracle.total() - 1.0)});
                cases++;
            }
        }
    }
    UnitaryMatrix hom = single_pass_unitary(rotation_pass(2, 1, std::numbers::pi / 4));
    double coincidence = 1.0;
    for (const auto &e : output_distribution(hom, OccupationConfiguration({1, 1})).entries) {
        if (e.config == OccupationConfiguration({1, 1})) {
            coincidence = e.probability;
        }
    }
    double elapsed = seconds_since(start);
    o.require(worst_tv < 1e-9, "total variation " + fmt(worst_tv));
    o.require(worst_sum <= 1e-9, "probability sum off by " + fmt(worst_sum));
    o.require(coincidence < 1e-12, "HOM coincidence " + fmt(coincidence));
    o.require(elapsed < 60.0, "runtime " + fmt(elapsed) + " s");
    if (o.ok) {
        o.detail = std::to_string(cases) + " inputs, max TV " + fmt(worst_tv) + ", HOM Pr(1,1) " + fmt(coincidence) +
                   ", " + fmt(elapsed) + " s";
    }
    return o;
}

Outcome similarity_identities() {
    Outcome o;
    double worst = 0.0;
    for (size_t n = 2; n <= 16; n++) {
        UnitaryMatrix dft = dft_matrix(n);
        ComplexMatrix id = ComplexMatrix::identity(n);
        double s_dft = similarity(dft);
        double s_id = similarity(id);
        worst = std::max({worst, std::abs(s_dft - 1.0), std::abs(s_id - 1.0 / static_cast<double>(n))});
        o.require(std::abs(s_dft - 1.0) <= 1e-12, "S(DFT_" + std::to_string(n) + ") = " + format_double(s_dft));
        o.require(std::abs(s_id - 1.0 / static_cast<double>(n)) <= 1e-12,
                  "S(I_" + std::to_string(n) + ") = " + format_double(s_id));
        ComplexMatrix balanced(n, n);
        for (size_t i = 0; i < n; i++) {
            for (size_t j = 0; j < n; j++) {
                balanced(i, j) = 1.0 / std::sqrt(static_cast<double>(n));
            }
        }
        for (uint64_t seed : {1u, 2u, 3u}) {
            UnitaryMatrix h = haar_random_unitary(n, seed * 31 + n);
            double gap = std::abs(similarity(h) - similarity_overlap(h, balanced));
            worst = std::max(worst, gap);
            o.require(gap <= 1e-12, "overlap form disagrees by " + fmt(gap));
        }
    }
    if (o.ok) {
        o.detail = "max deviation " + fmt(worst);
    }
    return o;
}

Outcome similarity_trends() {
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    const uint64_t seed = 12345;
    double s41 = monte_carlo_max_similarity(4, 1, 1000, seed).best_s;
    double s48 = monte_carlo_max_similarity(4, 8, 1000, seed).best_s;
    double s412 = monte_carlo_max_similarity(4, 12, 1000, seed).best_s;
    double s38 = monte_carlo_max_similarity(3, 8, 1000, seed).best_s;
    double s78 = monte_carlo_max_similarity(7, 8, 1000, seed).best_s;
    double elapsed = seconds_since(start);
    o.require(s48 > s41, "best_s(4,8) = " + fmt(s48) + " not above best_s(4,1) = " + fmt(s41));
    o.require(s38 >= s78, "best_s(3,8) = " + fmt(s38) + " below best_s(7,8) = " + fmt(s78));
    o.require(s412 >= 0.9 * s48, "best_s(4,12) = " + fmt(s412) + " below 0.9 * best_s(4,8)");
    o.require(elapsed < 120.0, "runtime " + fmt(elapsed) + " s");
    if (o.ok) {
        o.detail = "S(4,1)=" + fmt(s41) + " S(4,8)=" + fmt(s48) + " S(4,12)=" + fmt(s412) + " S(3,8)=" + fmt(s38) +
                   " S(7,8)=" + fmt(s78) + ", " + fmt(elapsed) + " s";
    }
    return o;
}

Outcome loss_budget() {
    Outcome o;
    LossParams loss{0.99, 0.9};
    double eta = net_efficiency(loss, 4, 16);
    o.require(std::abs(eta - 0.0974) <= 2e-4, "net efficiency " + format_double(eta));
    double per_trip = std::log(net_efficiency(loss, 4, 1));
    double worst = 0.0;
    for (size_t r = 0; r <= 64; r++) {
        double gap = std::abs(std::log(net_efficiency(loss, 4, r)) - static_cast<double>(r) * per_trip);
        worst = std::max(worst, gap);
    }
    o.require(worst <= 1e-12, "log-linearity gap " + fmt(worst));
    if (o.ok) {
        o.detail = "eta = " + format_double(eta) + ", log gap " + fmt(worst);
    }
    return o;
}

Outcome timing_examples() {
    Outcome o;
    auto zero = timing_feasibility(1000, TimingParams{100e-9, 0.0, 50e-9});
    o.require(zero.bin_ok && zero.dephasing_ok, "zero mismatch should pass both checks");
    auto typical = timing_feasibility(10, TimingParams{100e-9, 1e-9, 50e-9});
    o.require(typical.bin_ok && !typical.dephasing_ok, "n = 10 example should give bin_ok true, dephasing_ok false");
    auto boundary = timing_feasibility(100, TimingParams{100e-9, 1e-9, 50e-9});
    o.require(!boundary.bin_ok, "n = tau / delta must not be bin_ok");
    if (o.ok) {
        o.detail = "zero mismatch, n = 10, boundary n = 100";
    }
    return o;
}

Outcome cli_determinism() {
    Outcome o;
    auto dir = loopbs::testutil::fresh_dir("acceptance_determinism");
    auto path = [&](const std::string &name) { return (dir / name).string(); };
    auto run = [&](const std::string &args) { return loopbs::testutil::run_cli(LOOPBS_CLI, args, dir); };
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"haar", "gen-unitary haar --n 5 --seed 99"},
        {"compile", "compile --unitary " + path("u.json") + " --strategy packed"},
        {"dist", "dist --unitary " + path("u.json") + " --input '1 1 0 0 0'"},
        {"sample", "sample --unitary " + path("u.json") + " --input '1 1 0 0 0' --shots 500 --seed 4"},
        {"mc", "mc-similarity --n 4 --m 4 --trials 200 --seed 8"},
    };
    if (run("gen-unitary haar --n 5 --seed 99 --out " + path("u.json")) != 0) {
        o.require(false, "gen-unitary failed");
        return o;
    }
    for (const auto &[name, args] : commands) {
        int first = run(args + " --out " + path(name + "_1.out"));
        int second = run(args + " --out " + path(name + "_2.out"));
        o.require(first == 0 && second == 0, name + " exited nonzero");
        if (first == 0 && second == 0) {
            o.require(read_file(path(name + "_1.out")) == read_file(path(name + "_2.out")),
                      name + " output differs between runs");
        }
    }
    if (o.ok) {
        o.detail = std::to_string(commands.size()) + " seeded commands byte-identical";
    }
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria = {
        {"AC1  single-pass closed form", single_pass_closed_form},
        {"AC2  compiler round trip", compiler_round_trip},
        {"AC3  pairwise beamsplitter coverage", pairwise_coverage},
        {"AC4  permanent kernel", permanent_kernel},
        {"AC5  statistics oracle", statistics_oracle},
        {"AC6  similarity identities", similarity_identities},
        {"AC7  similarity trends", similarity_trends},
        {"AC8  loss budget", loss_budget},
        {"AC9  timing inequalities", timing_examples},
        {"AC10 determinism", cli_determinism},
    };
    int failures = 0;
    for (const auto &[name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception &e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::printf("%s %s: %s\n", o.ok ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
        failures += o.ok ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
