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

#include "onebit/scene.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/random/normal_distribution.hpp>

namespace onebit {

void SceneConfig::validate() const {
    if (m == 0 || p == 0 || n == 0) {
        throw std::invalid_argument("scene: m, p and n must be positive (got m=" +
                                    std::to_string(m) + ", p=" + std::to_string(p) +
                                    ", n=" + std::to_string(n) + ")");
    }
    if (!(std::abs(phi) < std::numbers::pi / 2.0)) {
        throw std::invalid_argument("scene: phi must lie in (-pi/2, pi/2), got " +
                                    std::to_string(phi));
    }
    if (!std::isfinite(beta.real()) || !std::isfinite(beta.imag())) {
        throw std::invalid_argument("scene: beta must be finite");
    }
}

SteeringVector make_steering_vector(std::size_t count, double phi) {
    if (count == 0) throw std::invalid_argument("steering vector: count must be positive");
    SteeringVector a(static_cast<Eigen::Index>(count));
    const double step = -std::numbers::pi * std::sin(phi);
    for (std::size_t k = 0; k < count; ++k) {
        a[static_cast<Eigen::Index>(k)] = std::polar(1.0, step * static_cast<double>(k));
    }
    return a;
}

ComplexMatrix make_lfm_waveform(std::size_t p, std::size_t n) {
    if (p == 0 || n == 0) throw std::invalid_argument("LFM waveform: p and n must be positive");
    const double scale = 1.0 / std::sqrt(static_cast<double>(p));
    const double dn = static_cast<double>(n);
    ComplexMatrix s(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(n));
    for (std::size_t k = 1; k <= p; ++k) {
        for (std::size_t l = 1; l <= n; ++l) {
            // Reduce the phase modulo 2*pi in integer arithmetic to keep it exact for large n.
            const auto lin = (k * (l - 1)) % n;
            const auto quad = ((l - 1) * (l - 1)) % (2 * n);
            const double phase = 2.0 * std::numbers::pi * static_cast<double>(lin) / dn +
                                 std::numbers::pi * static_cast<double>(quad) / dn;
            s(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(l - 1)) =
                std::polar(scale, phase);
        }
    }
    return s;
}

ComplexMatrix spatial_signature(const SceneConfig& config, const ComplexMatrix& waveform) {
    config.validate();
    if (waveform.rows() != static_cast<Eigen::Index>(config.p) ||
        waveform.cols() != static_cast<Eigen::Index>(config.n)) {
        throw std::invalid_argument("spatial signature: waveform must be p x n (" +
                                    std::to_string(config.p) + " x " + std::to_string(config.n) +
                                    "), got " + std::to_string(waveform.rows()) + " x " +
                                    std::to_string(waveform.cols()));
    }
    const SteeringVector a_r = make_steering_vector(config.m, config.phi);
    const SteeringVector a_t = make_steering_vector(config.p, config.phi);
    const Eigen::RowVectorXcd beam = a_t.adjoint() * waveform;
    return a_r * beam;
}

ComplexMatrix scene_signature(const SceneConfig& config) {
    config.validate();
    return spatial_signature(config, make_lfm_waveform(config.p, config.n));
}

void synthesize_received_into(const ComplexMatrix& signature, Complex beta,
                              Hypothesis hypothesis, RandomEngine& rng, ComplexMatrix& out,
                              double noise_scale) {
    out.resize(signature.rows(), signature.cols());
    boost::random::normal_distribution<double> normal;
    const Eigen::Index size = signature.size();
    Complex* dst = out.data();
    const Complex* z = signature.data();
    if (hypothesis == Hypothesis::H1) {
        for (Eigen::Index i = 0; i < size; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            dst[i] = beta * z[i] + noise_scale * Complex(re, im);
        }
    } else {
        for (Eigen::Index i = 0; i < size; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            dst[i] = noise_scale * Complex(re, im);
        }
    }
}

ComplexMatrix synthesize_received(const SceneConfig& config, const ComplexMatrix& signature,
                                  Hypothesis hypothesis, RandomEngine& rng, double noise_scale) {
    if (signature.rows() != static_cast<Eigen::Index>(config.m) ||
        signature.cols() != static_cast<Eigen::Index>(config.n)) {
        throw std::invalid_argument("synthesize: signature must be m x n");
    }
    ComplexMatrix x;
    synthesize_received_into(signature, config.beta, hypothesis, rng, x, noise_scale);
    return x;
}

void quantize_into(const ComplexMatrix& x, ComplexMatrix& out) {
    out.resize(x.rows(), x.cols());
    const Eigen::Index size = x.size();
    for (Eigen::Index i = 0; i < size; ++i) out.data()[i] = quantize(x.data()[i]);
}

ComplexMatrix quantize(const ComplexMatrix& x) {
    ComplexMatrix y;
    quantize_into(x, y);
    return y;
}

double beta_modulus_from_snr_db(double snr_db) {
    return std::sqrt(2.0 * std::pow(10.0, snr_db / 10.0));
}

double snr_db_from_beta_modulus(double modulus) {
    return 10.0 * std::log10(modulus * modulus / 2.0);
}

}  // namespace onebit
