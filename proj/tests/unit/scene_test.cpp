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
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "onebit/random.hpp"
#include "onebit/scene.hpp"

namespace onebit {
namespace {

using namespace std::complex_literals;

TEST(SteeringVector, FirstEntryIsOne) {
    const auto a = make_steering_vector(1, 0.7);
    ASSERT_EQ(a.size(), 1);
    EXPECT_EQ(a[0], Complex(1.0, 0.0));
}

TEST(SteeringVector, BroadsideIsAllOnes) {
    const auto a = make_steering_vector(4, 0.0);
    for (Eigen::Index k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(a[k] - 1.0), 0.0, 1e-15);
}

TEST(SteeringVector, MinusPiOverThree) {
    const auto a = make_steering_vector(4, -std::numbers::pi / 3.0);
    for (Eigen::Index k = 0; k < 4; ++k) {
        const Complex expected = std::exp(1i * std::numbers::pi * static_cast<double>(k) *
                                          std::sqrt(3.0) / 2.0);
        EXPECT_NEAR(std::abs(a[k] - expected), 0.0, 1e-14);
        EXPECT_NEAR(std::abs(a[k]), 1.0, 1e-15);
    }
    EXPECT_NEAR(a.squaredNorm(), 4.0, 1e-14);
}

TEST(SteeringVector, ZeroCountRejected) {
    EXPECT_THROW((void)make_steering_vector(0, 0.1), std::invalid_argument);
}

TEST(LfmWaveform, SingleEntry) {
    const auto s = make_lfm_waveform(1, 1);
    EXPECT_NEAR(std::abs(s(0, 0) - 1.0), 0.0, 1e-15);
}

TEST(LfmWaveform, RowsOrthogonalWithEnergyNOverP) {
    const auto s = make_lfm_waveform(4, 32);
    const ComplexMatrix gram = s * s.adjoint();
    EXPECT_NEAR(gram.trace().real(), 32.0, 1e-12);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            EXPECT_NEAR(std::abs(gram(i, j)), i == j ? 8.0 : 0.0, 1e-12) << i << "," << j;
        }
    }
}

TEST(LfmWaveform, EntriesMatchDirectFormula) {
    const std::size_t p = 2, n = 8;
    const auto s = make_lfm_waveform(p, n);
    ASSERT_EQ(s.rows(), 2);
    ASSERT_EQ(s.cols(), 8);
    for (std::size_t k = 1; k <= p; ++k) {
        for (std::size_t l = 1; l <= n; ++l) {
            const double kk = static_cast<double>(k), ll = static_cast<double>(l - 1);
            const Complex direct =
                std::exp(1i * (2.0 * std::numbers::pi * kk * ll / 8.0 + std::numbers::pi * ll * ll / 8.0)) /
                std::sqrt(2.0);
            EXPECT_NEAR(std::abs(s(k - 1, l - 1) - direct), 0.0, 1e-13);
            EXPECT_NEAR(std::abs(s(k - 1, l - 1)), 1.0 / std::sqrt(2.0), 1e-15);
        }
    }
}

TEST(LfmWaveform, ZeroDimensionsRejected) {
    EXPECT_THROW((void)make_lfm_waveform(0, 4), std::invalid_argument);
    EXPECT_THROW((void)make_lfm_waveform(4, 0), std::invalid_argument);
}

TEST(SpatialSignature, SingleElement) {
    SceneConfig c{.m = 1, .p = 1, .n = 1, .phi = 0.0};
    ComplexMatrix s(1, 1);
    s(0, 0) = 1.0;
    const auto z = spatial_signature(c, s);
    EXPECT_NEAR(std::abs(z(0, 0) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(z.squaredNorm(), 1.0, 1e-15);
}

TEST(SpatialSignature, MatchesDenseOuterProduct) {
    SceneConfig c{.m = 2, .p = 2, .n = 2, .phi = -std::numbers::pi / 3.0};
    ComplexMatrix s(2, 2);
    s << Complex(0.5, 0.1), Complex(-0.2, 0.7),
         Complex(0.3, -0.4), Complex(0.9, 0.0);
    const auto z = spatial_signature(c, s);
    // Z(i, l) = sum_k a_r[i] conj(a_t[k]) S(k, l), written out by hand.
    const double w = std::numbers::pi * std::sin(-std::numbers::pi / 3.0);
    const Complex a[2] = {1.0, std::exp(-1i * w)};
    for (int i = 0; i < 2; ++i) {
        for (int l = 0; l < 2; ++l) {
            const Complex expected = a[i] * std::conj(a[0]) * s(0, l) + a[i] * std::conj(a[1]) * s(1, l);
            EXPECT_NEAR(std::abs(z(i, l) - expected), 0.0, 1e-14);
        }
    }
}

TEST(SpatialSignature, ShapeMismatchRejected) {
    SceneConfig c{.m = 2, .p = 2, .n = 4};
    EXPECT_THROW((void)spatial_signature(c, ComplexMatrix::Ones(3, 4)), std::invalid_argument);
    EXPECT_THROW((void)spatial_signature(c, ComplexMatrix::Ones(2, 5)), std::invalid_argument);
}

class SignatureEnergy : public ::testing::TestWithParam<std::tuple<int, int, int, double>> {};

TEST_P(SignatureEnergy, EqualsSampleCount) {
    const auto [m, p, n, phi] = GetParam();
    SceneConfig c{.m = static_cast<std::size_t>(m), .p = static_cast<std::size_t>(p),
                  .n = static_cast<std::size_t>(n), .phi = phi};
    const double total = static_cast<double>(c.total_samples());
    EXPECT_NEAR(scene_signature(c).squaredNorm(), total, 1e-9 * total);
}

INSTANTIATE_TEST_SUITE_P(Scenes, SignatureEnergy,
                         ::testing::Values(std::tuple{4, 4, 32, -std::numbers::pi / 3.0},
                                           std::tuple{4, 4, 256, -std::numbers::pi / 3.0},
                                           std::tuple{1, 1, 3, 0.2},
                                           std::tuple{2, 3, 17, 1.1},
                                           std::tuple{8, 8, 2048, -0.4},
                                           std::tuple{3, 1, 5, 0.0}));

TEST(Quantize, SignConvention) {
    EXPECT_EQ(quantize(Complex(0.3, -2.0)), Complex(1.0, -1.0));
    EXPECT_EQ(quantize(Complex(0.0, 0.0)), Complex(1.0, 1.0));
    EXPECT_EQ(quantize(Complex(-1e-300, 5.0)), Complex(-1.0, 1.0));
}

TEST(Quantize, MatrixEntriesAreUnitSigns) {
    SceneConfig c{.m = 4, .p = 4, .n = 32};
    RandomEngine rng = trial_stream(3, 0);
    const auto z = scene_signature(c);
    const auto x = synthesize_received(c, z, Hypothesis::H0, rng);
    const auto y = quantize(x);
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        EXPECT_EQ(std::abs(y.data()[i].real()), 1.0);
        EXPECT_EQ(std::abs(y.data()[i].imag()), 1.0);
    }
    EXPECT_DOUBLE_EQ(y.squaredNorm(), 2.0 * static_cast<double>(c.total_samples()));
}

TEST(Synthesize, NoiselessLimitIsBetaZ) {
    SceneConfig c{.m = 4, .p = 4, .n = 32, .beta = Complex(3.0, -2.0)};
    const auto z = scene_signature(c);
    RandomEngine rng(1);
    const auto x = synthesize_received(c, z, Hypothesis::H1, rng, 0.0);
    EXPECT_NEAR((x - c.beta * z).norm(), 0.0, 1e-12);
}

TEST(Synthesize, NullNoiseIsZeroMeanUnitVariance) {
    SceneConfig c{.m = 4, .p = 4, .n = 64};
    const auto z = scene_signature(c);
    RandomEngine rng(11);
    Complex mean{0.0, 0.0};
    double power = 0.0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
        const auto x = synthesize_received(c, z, Hypothesis::H0, rng);
        mean += x.sum();
        power += x.squaredNorm();
    }
    const double count = reps * 256.0;
    // Each component has unit variance: the mean's SE is 1/sqrt(count).
    EXPECT_LT(std::abs(mean.real() / count), 4.0 / std::sqrt(count));
    EXPECT_LT(std::abs(mean.imag() / count), 4.0 / std::sqrt(count));
    EXPECT_NEAR(power / count, 2.0, 4.0 * 2.0 / std::sqrt(count));
}

TEST(Synthesize, H1WithZeroBetaMatchesH0Stream) {
    SceneConfig c{.m = 2, .p = 2, .n = 8};
    const auto z = scene_signature(c);
    RandomEngine a(5), b(5);
    const auto x0 = synthesize_received(c, z, Hypothesis::H0, a);
    const auto x1 = synthesize_received(c, z, Hypothesis::H1, b);
    EXPECT_EQ(x0, x1);
}

TEST(Synthesize, FixedSeedIsBitReproducible) {
    SceneConfig c{.m = 4, .p = 4, .n = 32, .beta = Complex(0.1, 0.2)};
    const auto z = scene_signature(c);
    RandomEngine a = trial_stream(42, 17), b = trial_stream(42, 17);
    EXPECT_EQ(synthesize_received(c, z, Hypothesis::H1, a), synthesize_received(c, z, Hypothesis::H1, b));
}

TEST(SnrMapping, RoundTrip) {
    EXPECT_NEAR(beta_modulus_from_snr_db(0.0), std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(beta_modulus_from_snr_db(-23.0), std::sqrt(2.0 * std::pow(10.0, -2.3)), 1e-15);
    for (const double snr : {-30.0, -13.0, 0.0, 7.5}) {
        EXPECT_NEAR(snr_db_from_beta_modulus(beta_modulus_from_snr_db(snr)), snr, 1e-12);
    }
}

TEST(SceneConfig, ValidateRejectsBadScenes) {
    EXPECT_THROW((SceneConfig{.m = 0}.validate()), std::invalid_argument);
    EXPECT_THROW((SceneConfig{.p = 0}.validate()), std::invalid_argument);
    EXPECT_THROW((SceneConfig{.n = 0}.validate()), std::invalid_argument);
    EXPECT_NO_THROW(SceneConfig{}.validate());
}

}  // namespace
}  // namespace onebit
