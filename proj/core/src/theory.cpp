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

#include "onebit/theory.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "onebit/errors.hpp"

namespace onebit {

namespace {

constexpr double kTieTolerance = 1e-14;

double signature_energy(const ComplexMatrix& signature) {
    const double energy = signature.squaredNorm();
    if (!(energy > 0.0)) throw DegenerateError("signature has zero energy (tr(ZZ^H) = 0)");
    return energy;
}

}  // namespace

double q_function(double x) {
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double log_q_function(double x) {
    if (x < 0.0) return std::log1p(-0.5 * std::erfc(-x / std::numbers::sqrt2));
    if (x < 35.0) return std::log(0.5 * std::erfc(x / std::numbers::sqrt2));
    // Q(x) ~ phi(x)/x * (1 - 1/x^2 + 3/x^4 - 15/x^6 + 105/x^8)
    const double r = 1.0 / (x * x);
    const double series = 1.0 - r * (1.0 - r * (3.0 - r * (15.0 - r * 105.0)));
    return -0.5 * x * x - std::log(x) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

double rao_pfa(double gamma) {
    if (std::isnan(gamma) || gamma < 0.0) {
        throw std::invalid_argument("rao_pfa: threshold must be non-negative");
    }
    return std::exp(-0.5 * gamma);
}

double rao_threshold(double pfa) {
    if (!(pfa > 0.0 && pfa <= 1.0)) {
        throw std::invalid_argument("rao_threshold: pfa must lie in (0, 1]");
    }
    return -2.0 * std::log(pfa);
}

GaussianApprox gaussian_moments(const ComplexMatrix& signature, Complex beta) {
    const double energy = signature_energy(signature);
    const double a = beta.real();
    const double b = beta.imag();

    double mean1 = 0.0, mean2 = 0.0;
    double reduce1 = 0.0, reduce2 = 0.0, cross = 0.0;
    const Eigen::Index size = signature.size();
    for (Eigen::Index i = 0; i < size; ++i) {
        const double u = signature.data()[i].real();
        const double v = signature.data()[i].imag();
        // c = E[r] = 1 - 2Q(au - bv), d = E[s] = 1 - 2Q(av + bu)
        const double c = std::erf((a * u - b * v) / std::numbers::sqrt2);
        const double d = std::erf((a * v + b * u) / std::numbers::sqrt2);
        mean1 += c * u + d * v;
        mean2 += d * u - c * v;
        reduce1 += c * c * u * u + d * d * v * v;
        reduce2 += c * c * v * v + d * d * u * u;
        cross += (c * c - d * d) * u * v;
    }

    GaussianApprox out;
    const double root = std::sqrt(energy);
    out.mean = {mean1 / root, mean2 / root};
    out.covariance(0, 0) = 1.0 - reduce1 / energy;
    out.covariance(1, 1) = 1.0 - reduce2 / energy;
    out.covariance(0, 1) = out.covariance(1, 0) = cross / energy;
    return out;
}

MomentDecomposition decompose_moments(const GaussianApprox& approx) {
    const double s11 = approx.covariance(0, 0);
    const double s22 = approx.covariance(1, 1);
    const double s12 = 0.5 * (approx.covariance(0, 1) + approx.covariance(1, 0));
    if (!std::isfinite(s11) || !std::isfinite(s22) || !std::isfinite(s12)) {
        throw NumericalError("covariance has non-finite entries");
    }

    MomentDecomposition out;
    if (std::abs(s11 - s22) < kTieTolerance && std::abs(s12) < kTieTolerance) {
        out.rotation.setIdentity();
        out.eigenvalues = {s11, s22};
    } else {
        const double center = 0.5 * (s11 + s22);
        const double radius = std::hypot(0.5 * (s11 - s22), s12);
        const double angle = 0.5 * std::atan2(2.0 * s12, s11 - s22);
        const double big = center + radius;
        // det / big avoids cancellation in center - radius.
        const double small = big > 0.0 ? (s11 * s22 - s12 * s12) / big : center - radius;
        out.eigenvalues = {big, small};
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        out.rotation << c, s,
                        -s, c;
    }
    if (!(out.eigenvalues[0] > 0.0) || !(out.eigenvalues[1] > 0.0)) {
        throw NumericalError("covariance is not positive definite (eigenvalues " +
                             std::to_string(out.eigenvalues[0]) + ", " +
                             std::to_string(out.eigenvalues[1]) + ")");
    }
    const Eigen::Vector2d rotated = out.rotation * approx.mean;
    out.shifted_mean = rotated.cwiseQuotient(out.eigenvalues.cwiseSqrt());
    return out;
}

WeightedChiSquareSpec weighted_spec_from_moments(const GaussianApprox& approx) {
    const MomentDecomposition dec = decompose_moments(approx);
    WeightedChiSquareSpec spec;
    for (int r = 0; r < 2; ++r) {
        spec.terms.push_back({dec.eigenvalues[r], 1, dec.shifted_mean[r] * dec.shifted_mean[r]});
    }
    return spec;
}

double rao_pd_imhof(const ComplexMatrix& signature, Complex beta, double gamma) {
    return imhof_ccdf(weighted_spec_from_moments(gaussian_moments(signature, beta)), gamma);
}

RaoDetectionModel RaoDetectionModel::fixed(const ComplexMatrix& signature, Complex beta) {
    RaoDetectionModel model;
    model.specs_.push_back(weighted_spec_from_moments(gaussian_moments(signature, beta)));
    return model;
}

RaoDetectionModel RaoDetectionModel::phase_averaged(const ComplexMatrix& signature,
                                                    double modulus, std::size_t phase_points) {
    if (phase_points == 0) throw std::invalid_argument("phase_averaged: need at least one phase");
    RaoDetectionModel model;
    for (std::size_t k = 0; k < phase_points; ++k) {
        const double phase = 0.5 * std::numbers::pi * static_cast<double>(k) /
                             static_cast<double>(phase_points);
        model.specs_.push_back(
            weighted_spec_from_moments(gaussian_moments(signature, std::polar(modulus, phase))));
    }
    return model;
}

double RaoDetectionModel::ccdf(double gamma) const {
    double sum = 0.0;
    for (const auto& spec : specs_) sum += imhof_ccdf(spec, gamma);
    return sum / static_cast<double>(specs_.size());
}

double lowsnr_noncentrality(std::size_t total_samples, Complex beta) {
    if (total_samples == 0) throw std::invalid_argument("lowsnr: N must be positive");
    return 2.0 * static_cast<double>(total_samples) * std::norm(beta) / std::numbers::pi;
}

double rao_pd_lowsnr(std::size_t total_samples, Complex beta, double gamma) {
    return noncentral_chi2_ccdf(2, lowsnr_noncentrality(total_samples, beta), gamma);
}

double glrt_noncentrality(std::size_t total_samples, Complex beta) {
    if (total_samples == 0) throw std::invalid_argument("glrt: N must be positive");
    return static_cast<double>(total_samples) * std::norm(beta);
}

double glrt_pd(std::size_t total_samples, Complex beta, double gamma) {
    return noncentral_chi2_ccdf(2, glrt_noncentrality(total_samples, beta), gamma);
}

Eigen::Matrix2d fim_onebit_null(const ComplexMatrix& signature) {
    return (2.0 / std::numbers::pi) * signature_energy(signature) * Eigen::Matrix2d::Identity();
}

Eigen::Matrix2d fim_unquantized(const ComplexMatrix& signature) {
    constexpr double kNoiseVariance = 2.0;
    return (2.0 / kNoiseVariance) * signature_energy(signature) * Eigen::Matrix2d::Identity();
}

double loss_db() { return 10.0 * std::log10(std::numbers::pi / 2.0); }

double sample_compensation_factor() { return std::numbers::pi / 2.0; }

}  // namespace onebit
