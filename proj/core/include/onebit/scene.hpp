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

#include "onebit/random.hpp"
#include "onebit/types.hpp"

namespace onebit {

/// Half-wavelength ULA response: entry k (0-based) is exp(-i*pi*k*sin(phi)).
SteeringVector make_steering_vector(std::size_t count, double phi);

/// Orthogonal LFM waveform, p x n.
///
/// S(k, l) = exp(i*2*pi*k*(l-1)/n + i*pi*(l-1)^2/n) / sqrt(p) with 1-based k, l.
/// Rows are mutually orthogonal when p <= n, giving S S^H = (n/p) I and
/// tr(Z Z^H) = m*n for the spatial signature.
ComplexMatrix make_lfm_waveform(std::size_t p, std::size_t n);

/// Z = a_r(phi) a_t(phi)^H S, an m x n matrix.
ComplexMatrix spatial_signature(const SceneConfig& config, const ComplexMatrix& waveform);

/// Convenience: LFM waveform and its spatial signature for `config`.
ComplexMatrix scene_signature(const SceneConfig& config);

/// Draw X under the given hypothesis: X = N (H0) or X = beta*Z + N (H1).
///
/// Noise entries have independent standard-normal real and imaginary parts,
/// multiplied by `noise_scale` (1 in every experiment; 0 gives the noiseless limit).
ComplexMatrix synthesize_received(const SceneConfig& config, const ComplexMatrix& signature,
                                  Hypothesis hypothesis, RandomEngine& rng,
                                  double noise_scale = 1.0);

/// As above with an explicit reflectivity, writing into `out` (resized as needed).
void synthesize_received_into(const ComplexMatrix& signature, Complex beta,
                              Hypothesis hypothesis, RandomEngine& rng, ComplexMatrix& out,
                              double noise_scale = 1.0);

/// One-bit quantizer: sign(Re x) + i*sign(Im x) with sign(0) = +1.
[[nodiscard]] inline Complex quantize(Complex x) noexcept {
    return {x.real() >= 0.0 ? 1.0 : -1.0, x.imag() >= 0.0 ? 1.0 : -1.0};
}

ComplexMatrix quantize(const ComplexMatrix& x);
void quantize_into(const ComplexMatrix& x, ComplexMatrix& out);

/// |beta| achieving `snr_db` under SNR = 10 log10(|beta|^2 / 2).
[[nodiscard]] double beta_modulus_from_snr_db(double snr_db);
[[nodiscard]] double snr_db_from_beta_modulus(double modulus);

}  // namespace onebit
