// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "onebit/montecarlo.hpp"
#include "onebit/scene.hpp"
#include "onebit/theory.hpp"

namespace onebit {
namespace {

TrialPlan null_plan(std::size_t trials, std::uint64_t seed = 1) {
    TrialPlan plan;
    plan.scene = SceneConfig{.m = 4, .p = 4, .n = 32};
    plan.hypothesis = Hypothesis::H0;
    plan.trials = trials;
    plan.master_seed = seed;
    plan.detectors = {Detector::Rao, Detector::GlrtWilks};
    plan.workers = 1;
    return plan;
}

TEST(RunTrials, ZeroTrialsIsEmpty) {
    const auto res = run_trials(null_plan(0));
    EXPECT_TRUE(res.rao.empty());
    EXPECT_TRUE(res.glrt_wilks.empty());
    EXPECT_EQ(res.completed, 0U);
}

TEST(RunTrials, DeterministicAndWorkerIndependent) {
    auto plan = null_plan(3000, 77);
    plan.hypothesis = Hypothesis::H1;
    plan.scene.beta = Complex(0.2, 0.1);
    plan.detectors = {Detector::Rao, Detector::GlrtWilks, Detector::LrtKnownBeta};
    const auto a = run_trials(plan);
    const auto b = run_trials(plan);
    plan.workers = 3;
    const auto c = run_trials(plan);
    EXPECT_EQ(a.rao, b.rao);
    EXPECT_EQ(a.rao, c.rao);
    EXPECT_EQ(a.glrt_wilks, c.glrt_wilks);
    EXPECT_EQ(a.lrt, c.lrt);
    EXPECT_EQ(a.scene_digest, c.scene_digest);
    EXPECT_EQ(c.completed, 3000U);
}

TEST(RunTrials, UnselectedDetectorsStayEmpty) {
    auto plan = null_plan(10);
    plan.detectors = {Detector::GlrtWilks};
    const auto res = run_trials(plan);
    EXPECT_TRUE(res.rao.empty());
    EXPECT_EQ(res.glrt_wilks.size(), 10U);
    EXPECT_EQ(&res.samples(Detector::GlrtWilks), &res.glrt_wilks);
}

TEST(RunTrials, SeedChangesSamples) {
    EXPECT_NE(run_trials(null_plan(100, 1)).rao, run_trials(null_plan(100, 2)).rao);
}

TEST(RunTrials, NullRaoMeanIsTwo) {
    const auto res = run_trials(null_plan(100'000, 5));
    double sum = 0.0;
    for (const double s : res.rao) sum += s;
    // chi2_2 has variance 4.
    EXPECT_NEAR(sum / 1e5, 2.0, 3.0 * std::sqrt(4.0 / 1e5));
}

TEST(RunTrials, NullFalseAlarmRates) {
    const auto res = run_trials(null_plan(100'000, 6));
    for (const double p : {1e-1, 1e-2}) {
        const double tol = 3.0 * std::sqrt(p * (1.0 - p) / 1e5);
        EXPECT_NEAR(empirical_pd(res.rao, rao_threshold(p)), p, tol) << p;
        EXPECT_NEAR(empirical_pd(res.glrt_wilks, rao_threshold(p)), p, tol) << p;
    }
    auto big_plan = null_plan(1'000'000, 7);
    big_plan.detectors = {Detector::GlrtWilks};
    const auto big = run_trials(big_plan);
    const double tol = 3.0 * std::sqrt(1e-3 * (1.0 - 1e-3) / 1e6);
    EXPECT_NEAR(empirical_pd(big.glrt_wilks, rao_threshold(1e-3)), 1e-3, tol);
}

TEST(RunTrials, RaoNullTailAtOnePerMille) {
    // 128 sign samples: the bounded score sum has a lighter tail than chi2_2
    // (about 0.80e-3 at the 1e-3 threshold). The gap closes as N grows.
    auto small = null_plan(1'000'000, 8);
    small.detectors = {Detector::Rao};
    const double p = 1e-3;
    const double gamma = rao_threshold(p);
    const double se_small = std::sqrt(p * (1.0 - p) / 1e6);
    EXPECT_LT(empirical_pd(run_trials(small).rao, gamma), p - 3.0 * se_small);

    auto large = small;
    large.scene.n = 256;
    large.trials = 100'000;
    const double se_large = std::sqrt(p * (1.0 - p) / 1e5);
    EXPECT_NEAR(empirical_pd(run_trials(large).rao, gamma), p, 3.0 * se_large);
}

TEST(TrialBeta, Modes) {
    auto plan = null_plan(1);
    plan.scene.beta = std::polar(0.5, 0.3);
    plan.random_phase = false;
    EXPECT_EQ(trial_beta(plan, 12), plan.scene.beta);
    plan.random_phase = true;
    EXPECT_NEAR(std::abs(trial_beta(plan, 12)), 0.5, 1e-15);
    EXPECT_NE(trial_beta(plan, 12), trial_beta(plan, 13));
    plan.beta_mode = BetaMode::Gaussian;
    double power = 0.0;
    const int draws = 20000;
    for (int t = 0; t < draws; ++t) power += std::norm(trial_beta(plan, static_cast<std::uint64_t>(t)));
    // |beta|^2 is exponential with mean 0.25.
    EXPECT_NEAR(power / draws, 0.25, 4.0 * 0.25 / std::sqrt(static_cast<double>(draws)));
}

TEST(EmpiricalCcdf, Examples) {
    const std::vector<double> s = {1.0, 2.0, 3.0};
    EXPECT_EQ(empirical_ccdf(s, 0.0), 1.0);
    EXPECT_EQ(empirical_ccdf(s, 3.5), 0.0);
    EXPECT_DOUBLE_EQ(empirical_ccdf(s, 2.0), 1.0 / 3.0);
    EXPECT_THROW((void)empirical_ccdf(std::vector<double>{}, 1.0), std::invalid_argument);
    const EmpiricalCdf cdf(s);
    EXPECT_DOUBLE_EQ(cdf.cdf(2.0), 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(cdf.ccdf(2.0), 1.0 / 3.0);
    EXPECT_EQ(cdf.cdf(0.5), 0.0);
    EXPECT_EQ(cdf.cdf(3.0), 1.0);
}

TEST(EmpiricalCdf, ThinnedOrderStatistics) {
    std::vector<double> s(10);
    for (int i = 0; i < 10; ++i) s[static_cast<std::size_t>(i)] = 10.0 - i;
    const EmpiricalCdf cdf(s);
    EXPECT_EQ(cdf.thinned_order_statistics(5), (std::vector<double>{2, 4, 6, 8, 10}));
    EXPECT_EQ(cdf.thinned_order_statistics(20).size(), 10U);
    EXPECT_EQ(cdf.thinned_order_statistics(3), (std::vector<double>{4, 7, 10}));
}

TEST(EmpiricalCdf, UpperQuantile) {
    std::vector<double> s(1000);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<double>(i);
    const EmpiricalCdf cdf(s);
    const double thr = cdf.upper_quantile(0.01);
    EXPECT_EQ(thr, 989.0);
    EXPECT_LE(empirical_ccdf(s, thr), 0.01);
    EXPECT_GT(empirical_ccdf(s, thr - 1.0), 0.01);
}

TEST(Cvm, Extremes) {
    const EmpiricalCdf cdf(std::vector<double>{1.0, 2.0, 3.0, 4.0});
    const auto self = [&](double x) { return cdf.cdf(x); };
    EXPECT_EQ(cvm_error(cdf, self), 0.0);
    const std::vector<double> grid = {-3.0, -2.0, -1.0};
    EXPECT_EQ(cvm_error(cdf, [](double) { return 1.0; }, grid), 1.0);
    EXPECT_THROW((void)cvm_error(cdf, self, std::vector<double>{}), std::invalid_argument);
}

TEST(Enumerate, SingleSampleNull) {
    ComplexMatrix z(1, 1);
    z << 1.0;
    const auto exact = enumerate_exact(z, Complex(0.0, 0.0));
    ASSERT_EQ(exact.atoms.size(), 4U);
    for (const auto& a : exact.atoms) EXPECT_DOUBLE_EQ(a.probability, 0.25);
    EXPECT_LT(exact.mean.norm(), 1e-15);
    EXPECT_LT((exact.covariance - Eigen::Matrix2d::Identity()).norm(), 1e-15);
}

TEST(Enumerate, UnitMass) {
    const auto z = scene_signature(SceneConfig{.m = 2, .p = 1, .n = 3, .phi = 0.4});
    for (const Complex beta : {Complex(0.0, 0.0), Complex(0.3, 0.2), Complex(-2.0, 1.5), Complex(0.0, 7.0)}) {
        EXPECT_NEAR(enumerate_exact(z, beta).total_mass, 1.0, 1e-12);
    }
}

TEST(Enumerate, StatisticMatchesRao) {
    const auto z = scene_signature(SceneConfig{.m = 1, .p = 1, .n = 2});
    const auto exact = enumerate_exact(z, Complex(0.1, 0.0));
    // Rebuild every pattern and compare its statistic.
    for (std::size_t code = 0; code < exact.atoms.size(); ++code) {
        ComplexMatrix y(1, 2);
        for (int i = 0; i < 2; ++i) {
            y(0, i) = Complex((code >> (2 * i)) & 1U ? 1.0 : -1.0, (code >> (2 * i + 1)) & 1U ? 1.0 : -1.0);
        }
        EXPECT_NEAR(exact.atoms[code].statistic, std::norm((z.adjoint() * y).trace()) / z.squaredNorm(), 1e-12);
    }
}

TEST(Enumerate, RefusesLargeScenes) {
    EXPECT_THROW((void)enumerate_exact(ComplexMatrix::Ones(1, 11), Complex(0.1, 0.0)), std::invalid_argument);
}

}  // namespace
}  // namespace onebit
