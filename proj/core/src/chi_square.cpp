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

#include "onebit/chi_square.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <spdlog/spdlog.h>

#include "onebit/errors.hpp"

namespace onebit {

namespace {

constexpr double kPoissonTailMass = 1e-14;
constexpr std::size_t kMaxPoissonTerms = 10'000'000;

// Imhof quadrature settings.
constexpr double kBodyTolerance = 1e-11;   // relative, Gauss-Kronrod on (0, A]
constexpr double kTailTolerance = 1e-8;    // relative, Ooura-Mori on [A, inf)
constexpr double kMaxErrorEstimate = 1e-7; // absolute, in units of the integral
constexpr double kBodyEndScale = 8.0;      // A = kBodyEndScale / max weight
constexpr unsigned kBodyMaxDepth = 20;

double clamp_probability(double p, const char* where) {
    if (p < 0.0 || p > 1.0) {
        spdlog::debug("{}: clamping probability {:.3e} into [0, 1]", where, p);
        return std::clamp(p, 0.0, 1.0);
    }
    return p;
}

// theta(u) = 1/2 sum [h atan(k u) + delta2 k u / (1 + k^2 u^2)], so psi(u) = theta(u) - x u / 2.
double imhof_theta(const WeightedChiSquareSpec& spec, double u) {
    double s = 0.0;
    for (const auto& t : spec.terms) {
        const double ku = t.weight * u;
        s += t.dof * std::atan(ku) + t.noncentrality * ku / (1.0 + ku * ku);
    }
    return 0.5 * s;
}

double imhof_log_rho(const WeightedChiSquareSpec& spec, double u) {
    double log_prod = 0.0;
    double expo = 0.0;
    for (const auto& t : spec.terms) {
        const double q = t.weight * t.weight * u * u;
        log_prod += 0.25 * t.dof * std::log1p(q);
        expo += t.noncentrality * q / (1.0 + q);
    }
    return log_prod + 0.5 * expo;
}

}  // namespace

void WeightedChiSquareSpec::validate() const {
    if (terms.empty()) throw std::invalid_argument("chi-square spec: no terms");
    for (const auto& t : terms) {
        if (!(t.weight > 0.0) || !std::isfinite(t.weight)) {
            throw std::invalid_argument("chi-square spec: weights must be positive and finite");
        }
        if (t.dof < 1) throw std::invalid_argument("chi-square spec: dof must be >= 1");
        if (!(t.noncentrality >= 0.0) || !std::isfinite(t.noncentrality)) {
            throw std::invalid_argument(
                "chi-square spec: noncentrality must be finite and non-negative");
        }
    }
}

double central_chi2_ccdf(int dof, double x) {
    if (dof < 1) throw std::invalid_argument("chi-square: dof must be >= 1");
    if (std::isnan(x)) throw std::invalid_argument("chi-square: x is NaN");
    if (x <= 0.0) return 1.0;
    if (dof == 2) return std::exp(-0.5 * x);
    return boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

double noncentral_chi2_ccdf(int dof, double delta2, double x) {
    if (dof < 1) throw std::invalid_argument("noncentral chi-square: dof must be >= 1");
    if (!(delta2 >= 0.0) || !std::isfinite(delta2)) {
        throw std::invalid_argument("noncentral chi-square: delta2 must be finite and >= 0");
    }
    if (std::isnan(x)) throw std::invalid_argument("noncentral chi-square: x is NaN");
    if (x <= 0.0) return 1.0;
    if (delta2 == 0.0) return central_chi2_ccdf(dof, x);

    const double lambda = 0.5 * delta2;
    const double half_x = 0.5 * x;
    const double log_lambda = std::log(lambda);
    auto poisson = [&](double j) { return std::exp(-lambda + j * log_lambda - std::lgamma(j + 1.0)); };
    auto tail = [&](double j) { return boost::math::gamma_q(0.5 * dof + j, half_x); };

    const auto mode = static_cast<std::size_t>(std::floor(lambda));
    double sum = 0.0;
    double mass = 0.0;

    // Downward from the mode; Poisson weights decrease monotonically.
    for (std::size_t step = 0; step <= mode; ++step) {
        const double j = static_cast<double>(mode - step);
        const double w = poisson(j);
        sum += w * tail(j);
        mass += w;
        if (step > 0 && w < 1e-300) break;
    }
    // Upward until the unvisited mass is negligible.
    for (std::size_t j = mode + 1; j - mode < kMaxPoissonTerms; ++j) {
        if (1.0 - mass < kPoissonTailMass) break;
        const double w = poisson(static_cast<double>(j));
        if (w < 1e-300) break;
        sum += w * tail(static_cast<double>(j));
        mass += w;
    }
    return clamp_probability(sum, "noncentral_chi2_ccdf");
}

double imhof_ccdf(const WeightedChiSquareSpec& spec, double x) {
    namespace q = boost::math::quadrature;
    spec.validate();
    if (std::isnan(x)) throw std::invalid_argument("imhof: x is NaN");
    if (x < 0.0) throw std::invalid_argument("imhof: x must be non-negative");
    // Positive weights and dof >= 1 put all mass on (0, inf).
    if (x == 0.0) return 1.0;

    double max_weight = 0.0;
    double limit_at_zero = -x;
    for (const auto& t : spec.terms) {
        max_weight = std::max(max_weight, t.weight);
        limit_at_zero += (t.dof + t.noncentrality) * t.weight;
    }
    limit_at_zero *= 0.5;

    const double omega = 0.5 * x;
    auto integrand = [&](double u) {
        if (u < 1e-12) return limit_at_zero;
        const double psi = imhof_theta(spec, u) - omega * u;
        return std::sin(psi) / (u * std::exp(imhof_log_rho(spec, u)));
    };

    const double body_end = kBodyEndScale / max_weight;
    double body_error = 0.0;
    const double body = q::gauss_kronrod<double, 31>::integrate(integrand, 0.0, body_end,
                                                                 kBodyMaxDepth, kBodyTolerance,
                                                                 &body_error);

    // With u = A + s: sin(psi(u)) = cos(omega s) sin(theta(u) - omega A)
    //                              - sin(omega s) cos(theta(u) - omega A).
    const double shift = omega * body_end;
    auto cos_part = [&](double s) {
        const double u = body_end + s;
        return std::sin(imhof_theta(spec, u) - shift) / (u * std::exp(imhof_log_rho(spec, u)));
    };
    auto sin_part = [&](double s) {
        const double u = body_end + s;
        return std::cos(imhof_theta(spec, u) - shift) / (u * std::exp(imhof_log_rho(spec, u)));
    };
    thread_local q::ooura_fourier_cos<double> cos_rule(kTailTolerance);
    thread_local q::ooura_fourier_sin<double> sin_rule(kTailTolerance);
    const auto [cos_value, cos_error] = cos_rule.integrate(cos_part, omega);
    const auto [sin_value, sin_error] = sin_rule.integrate(sin_part, omega);
    const double tail = cos_value - sin_value;

    const double value = 0.5 + (body + tail) / std::numbers::pi;
    if (!std::isfinite(value) || body_error > kMaxErrorEstimate ||
        cos_error > kMaxErrorEstimate || sin_error > kMaxErrorEstimate) {
        std::ostringstream msg;
        msg << "imhof: quadrature did not converge (x=" << x << ", terms=" << spec.terms.size()
            << ", body=" << body << " +/- " << body_error << ", tail cos=" << cos_value
            << " +/- " << cos_error << ", tail sin=" << sin_value << " +/- " << sin_error
            << ")";
        throw NumericalError(msg.str());
    }
    return clamp_probability(value, "imhof_ccdf");
}

}  // namespace onebit
