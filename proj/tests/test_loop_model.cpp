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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "loopbs/loop_model.hpp"
#include "test_util.hpp"

using namespace loopbs;

namespace {

constexpr double kPi = std::numbers::pi;
const double kH = 1 / std::sqrt(2.0);

LoopPass coupler_pass(size_t n, size_t event, double theta, double phi = 0, double lam = 0) {
    std::vector<SwitchSetting> s;
    for (size_t t = 1; t <= n + 1; t++) {
        s.push_back(t == event ? SwitchSetting(static_cast<int>(t), theta, phi, lam)
                               : SwitchSetting::reflective(static_cast<int>(t)));
    }
    return LoopPass(n, std::move(s));
}

}  // namespace

TEST(SwitchUnitary, ReflectiveIsIdentityLayout) {
    auto g = switch_unitary(SwitchSetting(1, 0.0));
    EXPECT_EQ(g, ComplexMatrix::identity(2));
}

TEST(SwitchUnitary, BalancedCoupler) {
    auto g = switch_unitary(SwitchSetting(3, kPi / 4));
    for (const auto &z : g.data()) {
        EXPECT_NEAR(std::abs(z), kH, 1e-15);
    }
    EXPECT_LT(g(1, 0).real(), 0.0);
    EXPECT_GT(g(0, 1).real(), 0.0);
}

TEST(SwitchUnitary, AlwaysUnitary) {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 500; k++) {
        SwitchSetting s(2, testutil::uniform(rng, 0, kPi / 2), testutil::random_phase(rng), testutil::random_phase(rng));
        EXPECT_TRUE(is_unitary(switch_unitary(s), 1e-14));
    }
}

TEST(SwitchSetting, RejectsOutOfRange) {
    EXPECT_THROW(SwitchSetting(0, 0.0), ValidationError);
    EXPECT_THROW(SwitchSetting(1, -0.1), ValidationError);
    EXPECT_THROW(SwitchSetting(1, kPi / 2 + 1e-9), ValidationError);
    EXPECT_THROW(SwitchSetting(1, 0.0, -kPi), ValidationError);
    EXPECT_THROW(SwitchSetting(1, 0.0, 0.0, 4.0), ValidationError);
    EXPECT_THROW(SwitchSetting(1, NAN), ValidationError);
    EXPECT_NO_THROW(SwitchSetting(1, kPi / 2, kPi, kPi));
}

TEST(LoopPass, RejectsBrokenSchedules) {
    // open boundary at t = 1
    std::vector<SwitchSetting> s{SwitchSetting(1, 0.3), SwitchSetting(2, 0.0), SwitchSetting(3, 0.0)};
    EXPECT_THROW(LoopPass(2, s), ValidationError);
    // open boundary at t = n+1
    s = {SwitchSetting(1, 0.0), SwitchSetting(2, 0.0), SwitchSetting(3, 0.2)};
    EXPECT_THROW(LoopPass(2, s), ValidationError);
    // gap
    s = {SwitchSetting(1, 0.0), SwitchSetting(3, 0.0), SwitchSetting(4, 0.0)};
    EXPECT_THROW(LoopPass(2, s), ValidationError);
    // wrong count
    s = {SwitchSetting(1, 0.0), SwitchSetting(2, 0.0)};
    EXPECT_THROW(LoopPass(2, s), ValidationError);
    EXPECT_THROW(LoopPass::reflective(0), ValidationError);
    // boundary phases are allowed
    s = {SwitchSetting(1, 0.0, 1.0), SwitchSetting(2, 0.5), SwitchSetting(3, 0.0, -2.0)};
    EXPECT_NO_THROW(LoopPass(2, s));
}

TEST(SinglePass, AllReflectiveIsExactIdentity) {
    EXPECT_EQ(single_pass_unitary(LoopPass::reflective(3)).matrix(), ComplexMatrix::identity(3));
    EXPECT_EQ(single_pass_unitary(LoopPass::reflective(1)).matrix(), ComplexMatrix::identity(1));
}

TEST(SinglePass, BalancedCouplerTwoBins) {
    // Hand evaluation of the closed form: U11 = enter(1) exit(2), U12 = enter(1) circ(2) exit(3),
    // U21 = bypass(2), U22 = enter(2) exit(3).
    auto u = single_pass_unitary(coupler_pass(2, 2, kPi / 4));
    ComplexMatrix expected(2, 2, {kH, kH, -kH, kH});
    EXPECT_LT(max_abs_diff(u, expected), 1e-15);
    for (size_t bin = 1; bin <= 2; bin++) {
        auto row = propagate_single_photon(coupler_pass(2, 2, kPi / 4), bin);
        for (size_t j = 0; j < 2; j++) {
            EXPECT_NEAR(std::abs(row[j] - expected(bin - 1, j)), 0, 1e-15);
        }
    }
}

TEST(SinglePass, ZeroStructureIsExact) {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 50; k++) {
        auto u = single_pass_unitary(testutil::random_pass(rng, 5));
        for (size_t i = 0; i < 5; i++) {
            for (size_t j = 0; j + 1 < i; j++) {
                EXPECT_EQ(u(i, j), Complex(0.0));
            }
        }
    }
}

TEST(SinglePass, UnitarityOverRandomPasses) {
    std::mt19937_64 rng(4);
    for (int k = 0; k < 300; k++) {
        size_t n = 1 + rng() % 20;
        EXPECT_LE(unitarity_residual(single_pass_matrix(testutil::random_pass(rng, n))), 1e-10);
    }
}

TEST(SinglePass, ExponentialDecayClosedForm) {
    for (double theta : {0.2, 0.7, 1.3}) {
        size_t n = 9;
        std::vector<SwitchSetting> s{SwitchSetting::reflective(1)};
        for (size_t t = 2; t <= n; t++) {
            s.emplace_back(static_cast<int>(t), theta);
        }
        s.push_back(SwitchSetting::reflective(static_cast<int>(n + 1)));
        auto u = single_pass_unitary(LoopPass(n, s));
        double c = std::cos(theta), sn = std::sin(theta);
        for (size_t i = 2; i < n; i++) {
            for (size_t j = i; j < n; j++) {
                double expected = c * c * std::pow(sn, static_cast<double>(j - i));
                EXPECT_NEAR(std::abs(u(i - 1, j - 1)), expected, 1e-14) << i << "," << j;
            }
        }
    }
}

TEST(PropagateSinglePhoton, Examples) {
    auto id = propagate_single_photon(LoopPass::reflective(4), 2);
    EXPECT_EQ(id, (std::vector<Complex>{0.0, 1.0, 0.0, 0.0}));

    auto row = propagate_single_photon(coupler_pass(2, 2, kPi / 4), 1);
    EXPECT_NEAR(std::abs(row[0] - kH), 0, 1e-15);
    EXPECT_NEAR(std::abs(row[1] - kH), 0, 1e-15);

    EXPECT_THROW(propagate_single_photon(LoopPass::reflective(3), 0), ValidationError);
    EXPECT_THROW(propagate_single_photon(LoopPass::reflective(3), 4), ValidationError);
}

TEST(PropagateSinglePhoton, MatchesClosedFormRows) {
    std::mt19937_64 rng(8);
    for (int k = 0; k < 1000; k++) {
        size_t n = 1 + rng() % 16;
        auto pass = testutil::random_pass(rng, n);
        auto u = single_pass_unitary(pass);
        for (size_t bin = 1; bin <= n; bin++) {
            auto row = propagate_single_photon(pass, bin);
            for (size_t j = 0; j < n; j++) {
                ASSERT_LE(std::abs(row[j] - u(bin - 1, j)), 1e-12);
            }
        }
    }
}

TEST(ProgramUnitary, EmptyAndReflective) {
    EXPECT_EQ(program_unitary(NestedLoopProgram(3)).matrix(), ComplexMatrix::identity(3));
    NestedLoopProgram two(3, {LoopPass::reflective(3), LoopPass::reflective(3)});
    EXPECT_EQ(program_unitary(two).matrix(), ComplexMatrix::identity(3));
}

TEST(ProgramUnitary, AngleAddition) {
    double t1 = 0.3, t2 = 0.9;
    NestedLoopProgram prog(2, {coupler_pass(2, 2, t1), coupler_pass(2, 2, t2)});
    double c = std::cos(t1 + t2), s = std::sin(t1 + t2);
    ComplexMatrix expected(2, 2, {c, s, -s, c});
    EXPECT_LT(max_abs_diff(program_unitary(prog), expected), 1e-15);
}

TEST(ProgramUnitary, CompositionIsLeftToRightProduct) {
    std::mt19937_64 rng(21);
    for (int k = 0; k < 50; k++) {
        size_t n = 2 + rng() % 8;
        auto p1 = testutil::random_pass(rng, n);
        auto p2 = testutil::random_pass(rng, n);
        auto composed = program_unitary(NestedLoopProgram(n, {p1, p2}));
        EXPECT_EQ(composed.matrix(), matmul(single_pass_unitary(p1), single_pass_unitary(p2)));
    }
}

TEST(ProgramUnitary, RandomProgramsStayUnitary) {
    std::mt19937_64 rng(22);
    for (int k = 0; k < 50; k++) {
        size_t n = 1 + rng() % 10;
        std::vector<LoopPass> passes;
        size_t m = rng() % 30;
        for (size_t p = 0; p < m; p++) {
            passes.push_back(testutil::random_pass(rng, n));
        }
        EXPECT_TRUE(is_unitary(program_unitary(NestedLoopProgram(n, passes)), kProductTol));
    }
}

TEST(ProgramUnitary, RejectsMixedSizes) {
    EXPECT_THROW(NestedLoopProgram(3, {LoopPass::reflective(3), LoopPass::reflective(2)}), ValidationError);
    EXPECT_THROW(NestedLoopProgram(0), ValidationError);
    EXPECT_THROW(NestedLoopProgram(2, {}, -1.0), ValidationError);
}
