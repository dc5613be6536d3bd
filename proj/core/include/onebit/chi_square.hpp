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

#include <vector>

namespace onebit {

/// One term k * chi2_h(delta2) of a generalized non-central chi-square law.
struct ChiSquareTerm {
    double weight = 1.0;       ///< k > 0
    int dof = 1;               ///< h >= 1
    double noncentrality = 0;  ///< delta^2 >= 0
};

/// Law of a positively weighted sum of independent non-central chi-squares.
struct WeightedChiSquareSpec {
    std::vector<ChiSquareTerm> terms;

    /// Throws std::invalid_argument on an empty list or any invalid term.
    void validate() const;
};

/// Pr{chi2_dof > x}.
[[nodiscard]] double central_chi2_ccdf(int dof, double x);

/// Pr{chi2_dof(delta2) > x} as a Poisson mixture of central tails.
///
/// Summation starts at the Poisson mode and walks both ways until the
/// unvisited Poisson mass falls below 1e-14.
[[nodiscard]] double noncentral_chi2_ccdf(int dof, double delta2, double x);

/// Pr{R > x} for R distributed per `spec`, by Imhof's inversion integral
///
///   1/2 + (1/pi) * int_0^inf sin(psi(u)) / (u rho(u)) du.
///
/// The body (0, A] is integrated by adaptive Gauss-Kronrod with the removable
/// u -> 0 singularity replaced by its limit psi'(0); the oscillatory tail is
/// split into Fourier sine/cosine integrals and handled by a double-exponential
/// Fourier rule. The result is clamped to [0, 1].
///
/// Throws NumericalError if either quadrature fails to reach tolerance.
[[nodiscard]] double imhof_ccdf(const WeightedChiSquareSpec& spec, double x);

}  // namespace onebit
