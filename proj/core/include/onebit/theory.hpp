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

#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "onebit/chi_square.hpp"
#include "onebit/types.hpp"

namespace onebit {

// ---- Gaussian tail -------------------------------------------------------

/// Q(x) = Pr{N(0,1) > x}.
[[nodiscard]] double q_function(double x);

/// log Q(x), finite for every finite x; large arguments use the asymptotic series.
[[nodiscard]] double log_q_function(double x);

// ---- null law ------------------------------------------------------------

/// False-alarm probability exp(-gamma/2) of the chi2_2 null law.
[[nodiscard]] double rao_pfa(double gamma);

/// Threshold -2 log(pfa); pfa must lie in (0, 1].
[[nodiscard]] double rao_threshold(double pfa);

// ---- Rao statistic under H1 ----------------------------------------------

/// Mean and covariance of the normalized score pair
/// w = (Re, Im)(z^H y) / sqrt(tr(Z Z^H)).
///
/// The moments are exact for any sample size; only the Gaussian shape of w is
/// asymptotic. With beta = 0 the result is (0, I).
struct GaussianApprox {
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    Eigen::Matrix2d covariance = Eigen::Matrix2d::Identity();
};

[[nodiscard]] GaussianApprox gaussian_moments(const ComplexMatrix& signature, Complex beta);

/// Sigma = P^T diag(eigenvalues) P with eigenvalues in descending order and
/// shifted_mean = diag(eigenvalues)^(-1/2) P u.
struct MomentDecomposition {
    Eigen::Matrix2d rotation = Eigen::Matrix2d::Identity();
    Eigen::Vector2d eigenvalues = Eigen::Vector2d::Ones();
    Eigen::Vector2d shifted_mean = Eigen::Vector2d::Zero();
};

/// Closed-form 2x2 symmetric eigendecomposition. Near-scalar covariances
/// (|s11 - s22| and |s12| below 1e-14) keep P = I and the diagonal as-is.
/// Throws NumericalError unless the covariance is positive definite.
[[nodiscard]] MomentDecomposition decompose_moments(const GaussianApprox& approx);

/// T_R ~ lambda1 chi2_1(mu1^2) + lambda2 chi2_1(mu2^2) under the Gaussian model.
[[nodiscard]] WeightedChiSquareSpec weighted_spec_from_moments(const GaussianApprox& approx);

/// Detection probability Pr{T_R > gamma} via the generalized chi-square law.
[[nodiscard]] double rao_pd_imhof(const ComplexMatrix& signature, Complex beta, double gamma);

/// Imhof detection model cached for repeated threshold queries.
///
/// With a random reflectivity phase the law is averaged over `phase_points`
/// equispaced phases in [0, pi/2); the statistic is invariant to multiplying
/// beta by i, so that quarter period suffices.
class RaoDetectionModel {
public:
    static RaoDetectionModel fixed(const ComplexMatrix& signature, Complex beta);
    static RaoDetectionModel phase_averaged(const ComplexMatrix& signature, double modulus,
                                            std::size_t phase_points = 8);

    [[nodiscard]] double ccdf(double gamma) const;
    [[nodiscard]] double cdf(double gamma) const { return 1.0 - ccdf(gamma); }

private:
    std::vector<WeightedChiSquareSpec> specs_;
};

/// Low-SNR noncentrality 2 N |beta|^2 / pi.
[[nodiscard]] double lowsnr_noncentrality(std::size_t total_samples, Complex beta);

/// Low-SNR approximation T_R ~ chi2_2(2 N |beta|^2 / pi).
[[nodiscard]] double rao_pd_lowsnr(std::size_t total_samples, Complex beta, double gamma);

// ---- unquantized GLRT ----------------------------------------------------

/// Wilks noncentrality N |beta|^2 (unit-noise convention).
[[nodiscard]] double glrt_noncentrality(std::size_t total_samples, Complex beta);

/// Pr{-2 log T_GLRT > gamma} under chi2_2(N |beta|^2).
[[nodiscard]] double glrt_pd(std::size_t total_samples, Complex beta, double gamma);

// ---- Fisher information --------------------------------------------------

/// One-bit FIM at beta = 0: (2/pi) tr(Z Z^H) I_2.
[[nodiscard]] Eigen::Matrix2d fim_onebit_null(const ComplexMatrix& signature);

/// Unquantized FIM block for (Re beta, Im beta): (2/sigma^2) tr(Z Z^H) I_2 with sigma^2 = 2.
[[nodiscard]] Eigen::Matrix2d fim_unquantized(const ComplexMatrix& signature);

// ---- quantization loss ---------------------------------------------------

/// 10 log10(pi/2): low-SNR SNR penalty of one-bit sampling, in dB.
[[nodiscard]] double loss_db();

/// pi/2: sample-count factor that compensates the one-bit loss.
[[nodiscard]] double sample_compensation_factor();

}  // namespace onebit
