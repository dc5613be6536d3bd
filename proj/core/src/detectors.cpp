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

#include "onebit/detectors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "onebit/errors.hpp"
#include "onebit/theory.hpp"

namespace onebit {

namespace {

// 1 - T'/tr(ZZ^H) below this is treated as exact collinearity of X and Z.
constexpr double kCollinearTolerance = 1e-12;

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument(std::string(what) + ": shape mismatch (" +
                                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                    " vs " + std::to_string(b.rows()) + "x" +
                                    std::to_string(b.cols()) + ")");
    }
}

// z^H x = sum conj(z_i) x_i = tr(X Z^H)
Complex correlate(const ComplexMatrix& data, const ComplexMatrix& signature) {
    Complex acc{0.0, 0.0};
    const Eigen::Index size = data.size();
    for (Eigen::Index i = 0; i < size; ++i) {
        acc += std::conj(signature.data()[i]) * data.data()[i];
    }
    return acc;
}

}  // namespace

double rao_statistic(const ComplexMatrix& quantized, const ComplexMatrix& signature) {
    require_same_shape(quantized, signature, "rao_statistic");
    const double energy = signature.squaredNorm();
    if (!(energy > 0.0)) throw DegenerateError("rao_statistic: tr(ZZ^H) = 0");
    return std::norm(correlate(quantized, signature)) / energy;
}

double glrt_ratio(const ComplexMatrix& received, const ComplexMatrix& signature) {
    require_same_shape(received, signature, "glrt_ratio");
    const double power = received.squaredNorm();
    if (!(power > 0.0)) throw DegenerateError("glrt: tr(XX^H) = 0");
    return std::norm(correlate(received, signature)) / power;
}

double glrt_wilks_statistic(const ComplexMatrix& received, const ComplexMatrix& signature) {
    const double ratio = glrt_ratio(received, signature);
    const double energy = signature.squaredNorm();
    if (!(energy > 0.0)) throw DegenerateError("glrt: tr(ZZ^H) = 0");
    const double fraction = ratio / energy;
    // Cauchy-Schwarz: 0 <= fraction <= 1.
    if (1.0 - fraction <= kCollinearTolerance) {
        throw std::overflow_error("glrt: data collinear with the signature, statistic diverges");
    }
    const auto total = static_cast<double>(received.size());
    return -2.0 * total * std::log1p(-fraction);
}

double lrt_known_beta(const ComplexMatrix& quantized, const ComplexMatrix& signature,
                      Complex beta) {
    require_same_shape(quantized, signature, "lrt_known_beta");
    double sum = 0.0;
    const Eigen::Index size = quantized.size();
    for (Eigen::Index i = 0; i < size; ++i) {
        const Complex mean = beta * signature.data()[i];
        const double r = quantized.data()[i].real() >= 0.0 ? 1.0 : -1.0;
        const double s = quantized.data()[i].imag() >= 0.0 ? 1.0 : -1.0;
        sum += log_q_function(-r * mean.real()) + log_q_function(-s * mean.imag());
    }
    return sum + 2.0 * static_cast<double>(size) * std::numbers::ln2;
}

Eigen::Vector2d onebit_score_at_null(const ComplexMatrix& quantized,
                                     const ComplexMatrix& signature) {
    require_same_shape(quantized, signature, "onebit_score_at_null");
    const Complex c = correlate(quantized, signature);
    return std::sqrt(2.0 / std::numbers::pi) * Eigen::Vector2d(c.real(), c.imag());
}

Eigen::Vector2d unquantized_score_at_null(const ComplexMatrix& received,
                                          const ComplexMatrix& signature) {
    require_same_shape(received, signature, "unquantized_score_at_null");
    const Complex c = correlate(received, signature);
    return {c.real(), c.imag()};
}

Hypothesis decide(double statistic, double threshold) {
    if (std::isnan(statistic)) throw std::invalid_argument("decide: statistic is NaN");
    return statistic >= threshold ? Hypothesis::H1 : Hypothesis::H0;
}

DetectorOutput evaluate(double statistic, double threshold) {
    return {statistic, decide(statistic, threshold), threshold};
}

}  // namespace onebit
