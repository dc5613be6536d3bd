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
#include <limits>
#include <random>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <gtest/gtest.h>

#include "onebit/chi_square.hpp"

namespace onebit {
namespace {

// Pr{chi2_k(lambda) > x} by integrating the Bessel-form density over [x, inf).
double density_quadrature_ccdf(int k, double lambda, double x) {
    const double nu = 0.5 * k - 1.0;
    auto density = [&](double t) {
        if (t <= 0.0) return 0.0;
        if (lambda == 0.0) {
            return std::exp((0.5 * k - 1.0) * std::log(t) - 0.5 * t - 0.5 * k * std::log(2.0) -
                            std::lgamma(0.5 * k));
        }
        const double z = std::sqrt(lambda * t);
        if (z > 700.0) return 0.0;  // far tail, beyond double range of I_nu
        const double log_pre = -0.5 * (t + lambda) + 0.5 * nu * std::log(t / lambda) - std::log(2.0);
        return std::exp(log_pre) * boost::math::cyl_bessel_i(nu, z);
    };
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate([&](double s) { return density(x + s); }, 1e-15);
}

TEST(CentralChi2, Exponential) {
    EXPECT_NEAR(central_chi2_ccdf(2, 2.0), std::exp(-1.0), 1e-16);
    EXPECT_EQ(central_chi2_ccdf(3, 0.0), 1.0);
    EXPECT_NEAR(central_chi2_ccdf(1, 3.841458820694124), 0.05, 1e-12);
}

TEST(NoncentralChi2, CentralCase) {
    EXPECT_NEAR(noncentral_chi2_ccdf(2, 0.0, -2.0 * std::log(1e-3)), 1e-3, 1e-12);
    EXPECT_NEAR(noncentral_chi2_ccdf(2, 0.0, 13.815511), 1e-3, 1e-9);
}

TEST(NoncentralChi2, AtZeroIsOne) {
    EXPECT_EQ(noncentral_chi2_ccdf(2, 5.0, 0.0), 1.0);
    EXPECT_EQ(noncentral_chi2_ccdf(1, 0.3, 0.0), 1.0);
}

TEST(NoncentralChi2, MatchesDensityQuadrature) {
    EXPECT_NEAR(noncentral_chi2_ccdf(2, 5.0, 7.0), density_quadrature_ccdf(2, 5.0, 7.0), 1e-10);
    for (const int k : {1, 2, 3, 4, 7}) {
        for (const double lambda : {0.0, 0.5, 5.0, 30.0, 120.0}) {
            for (const double x : {0.05, 1.0, 4.0, 13.8, 40.0, 150.0}) {
                EXPECT_NEAR(noncentral_chi2_ccdf(k, lambda, x), density_quadrature_ccdf(k, lambda, x),
                            1e-10)
                    << "k=" << k << " lambda=" << lambda << " x=" << x;
            }
        }
    }
}

TEST(NoncentralChi2, MatchesBoostDistribution) {
    for (const double lambda : {1e-3, 2.0, 60.0, 400.0}) {
        boost::math::non_central_chi_squared dist(2.0, lambda);
        for (const double x : {0.5, 10.0, 80.0, 450.0}) {
            EXPECT_NEAR(noncentral_chi2_ccdf(2, lambda, x), boost::math::cdf(boost::math::complement(dist, x)),
                        1e-12);
        }
    }
}

TEST(NoncentralChi2, InvalidArguments) {
    EXPECT_THROW((void)noncentral_chi2_ccdf(0, 1.0, 1.0), std::invalid_argument);
    EXPECT_THROW((void)noncentral_chi2_ccdf(2, -1.0, 1.0), std::invalid_argument);
    EXPECT_THROW((void)noncentral_chi2_ccdf(2, 1.0, std::nan("")), std::invalid_argument);
}

TEST(Imhof, SingleChi2TwoReducesToExponential) {
    const WeightedChiSquareSpec spec{{{1.0, 2, 0.0}}};
    EXPECT_NEAR(imhof_ccdf(spec, 2.0), std::exp(-1.0), 1e-8);
}

struct ReductionCase {
    int dof;
    double delta2;
};

class ImhofReduction : public ::testing::TestWithParam<ReductionCase> {};

TEST_P(ImhofReduction, SingleTermMatchesNoncentral) {
    const auto [dof, delta2] = GetParam();
    const WeightedChiSquareSpec spec{{{1.0, dof, delta2}}};
    for (int i = 0; i < 100; ++i) {
        const double x = 0.3 * i;
        EXPECT_NEAR(imhof_ccdf(spec, x), noncentral_chi2_ccdf(dof, delta2, x), 1e-8) << "x=" << x;
    }
}

INSTANTIATE_TEST_SUITE_P(Grid, ImhofReduction,
                         ::testing::Values(ReductionCase{1, 0.0}, ReductionCase{1, 1.0},
                                           ReductionCase{1, 10.0}, ReductionCase{2, 0.0},
                                           ReductionCase{2, 1.0}, ReductionCase{2, 10.0},
                                           ReductionCase{4, 0.0}, ReductionCase{4, 1.0},
                                           ReductionCase{4, 10.0}));

TEST(Imhof, SplitChi2TwoMatchesNoncentral) {
    // chi2_1(delta2) + chi2_1(0) has the chi2_2(delta2) law.
    const WeightedChiSquareSpec spec{{{1.0, 1, 7.5}, {1.0, 1, 0.0}}};
    for (const double x : {0.1, 2.0, 9.0, 20.0, 35.0}) {
        EXPECT_NEAR(imhof_ccdf(spec, x), noncentral_chi2_ccdf(2, 7.5, x), 1e-8);
    }
}

TEST(Imhof, TwoTermMatchesSampler) {
    const WeightedChiSquareSpec spec{{{1.5, 1, 1.0}, {0.5, 1, 4.0}}};
    const double x = 5.0;
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> g;
    const int draws = 1'000'000;
    int above = 0;
    for (int i = 0; i < draws; ++i) {
        const double a = g(rng) + 1.0;
        const double b = g(rng) + 2.0;
        above += (1.5 * a * a + 0.5 * b * b > x) ? 1 : 0;
    }
    const double p = static_cast<double>(above) / draws;
    const double se = std::sqrt(p * (1.0 - p) / draws);
    EXPECT_NEAR(imhof_ccdf(spec, x), p, 3.0 * se);
}

TEST(Imhof, ProbabilityShape) {
    const std::vector<WeightedChiSquareSpec> specs = {
        {{{0.95, 1, 3.0}, {0.7, 1, 0.2}}},
        {{{0.2, 1, 0.0}, {0.01, 1, 50.0}}},
        {{{2.0, 3, 1.0}}},
    };
    for (const auto& spec : specs) {
        double prev = 1.0;
        EXPECT_NEAR(imhof_ccdf(spec, 1e-9), 1.0, 1e-6);
        for (int i = 0; i <= 80; ++i) {
            const double v = imhof_ccdf(spec, 0.5 * i);
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
            EXPECT_LE(v, prev + 1e-9);
            prev = v;
        }
        EXPECT_LT(imhof_ccdf(spec, 500.0), 1e-9);
    }
}

TEST(Imhof, InvalidSpecs) {
    EXPECT_THROW((void)imhof_ccdf(WeightedChiSquareSpec{}, 1.0), std::invalid_argument);
    EXPECT_THROW((void)imhof_ccdf(WeightedChiSquareSpec{{{-1.0, 1, 0.0}}}, 1.0), std::invalid_argument);
    EXPECT_THROW((void)imhof_ccdf(WeightedChiSquareSpec{{{1.0, 0, 0.0}}}, 1.0), std::invalid_argument);
    EXPECT_THROW((void)imhof_ccdf(WeightedChiSquareSpec{{{1.0, 1, -2.0}}}, 1.0), std::invalid_argument);
    EXPECT_THROW((void)imhof_ccdf(WeightedChiSquareSpec{{{1.0, 1, 0.0}}}, -1.0), std::invalid_argument);
}

}  // namespace
}  // namespace onebit
