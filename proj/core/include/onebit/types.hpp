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

#include <complex>
#include <cstddef>
#include <numbers>

#include <Eigen/Core>

namespace onebit {

using Complex = std::complex<double>;

/// Dense complex matrix used for waveforms (S), signatures (Z) and data (X, Y).
using ComplexMatrix = Eigen::MatrixXcd;

/// Unit-modulus array response toward a given angle.
using SteeringVector = Eigen::VectorXcd;

enum class Hypothesis { H0, H1 };

/// Full experiment scene.
///
/// Noise follows the unit convention: real and imaginary parts are standard
/// normal (total variance 2), and `beta` is the reflectivity relative to that
/// noise level.
struct SceneConfig {
    std::size_t m = 4;  ///< receive antennas
    std::size_t p = 4;  ///< transmit antennas
    std::size_t n = 32; ///< snapshots
    double phi = -std::numbers::pi / 3.0;
    Complex beta{0.0, 0.0};

    /// Number of received samples, m * n.
    [[nodiscard]] std::size_t total_samples() const noexcept { return m * n; }

    /// Throws std::invalid_argument on zero dimensions or |phi| >= pi/2.
    void validate() const;
};

}  // namespace onebit
