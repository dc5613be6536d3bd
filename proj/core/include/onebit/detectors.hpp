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

#include <Eigen/Core>

#include "onebit/types.hpp"

namespace onebit {

/// A statistic together with its threshold decision. Every detector here
/// rejects upward: decision is H1 iff statistic >= threshold.
struct DetectorOutput {
    double statistic = 0.0;
    Hypothesis decision = Hypothesis::H0;
    double threshold = 0.0;
};

/// One-bit Rao statistic |tr(Y Z^H)|^2 / tr(Z Z^H).
///
/// Also well defined on unquantized data; bounded by 2N for quantized Y.
/// Throws std::invalid_argument on a shape mismatch and DegenerateError when
/// tr(Z Z^H) = 0.
[[nodiscard]] double rao_statistic(const ComplexMatrix& quantized, const ComplexMatrix& signature);

/// T' = |tr(X Z^H)|^2 / tr(X X^H), the monotone core of the unquantized GLRT.
[[nodiscard]] double glrt_ratio(const ComplexMatrix& received, const ComplexMatrix& signature);

/// Wilks-scale GLRT statistic -2 log T_GLRT = -2N log(1 - T' / tr(Z Z^H)).
///
/// Throws DegenerateError if tr(X X^H) = 0 and std::overflow_error when X is
/// collinear with Z (the statistic diverges).
[[nodiscard]] double glrt_wilks_statistic(const ComplexMatrix& received,
                                          const ComplexMatrix& signature);

/// Log-likelihood ratio of quantized data for a known reflectivity.
[[nodiscard]] double lrt_known_beta(const ComplexMatrix& quantized, const ComplexMatrix& signature,
                                    Complex beta);

/// Score of the one-bit log-likelihood at beta = 0:
/// sqrt(2/pi) (Re z^H y, Im z^H y).
[[nodiscard]] Eigen::Vector2d onebit_score_at_null(const ComplexMatrix& quantized,
                                                   const ComplexMatrix& signature);

/// Score of the unquantized log-likelihood at beta = 0 with unit noise:
/// (Re z^H x, Im z^H x).
[[nodiscard]] Eigen::Vector2d unquantized_score_at_null(const ComplexMatrix& received,
                                                        const ComplexMatrix& signature);

/// H1 iff statistic >= threshold. NaN statistic throws std::invalid_argument.
[[nodiscard]] Hypothesis decide(double statistic, double threshold);

[[nodiscard]] DetectorOutput evaluate(double statistic, double threshold);

}  // namespace onebit
