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

#include "onebit/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <new>
#include <numbers>
#include <stdexcept>
#include <thread>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "onebit/detectors.hpp"
#include "onebit/errors.hpp"
#include "onebit/random.hpp"
#include "onebit/scene.hpp"
#include "onebit/theory.hpp"

namespace onebit {

std::string to_string(Detector d) {
    switch (d) {
        case Detector::Rao: return "rao";
        case Detector::GlrtWilks: return "glrt";
        case Detector::LrtKnownBeta: return "lrt";
    }
    return "unknown";
}

std::string to_string(BetaMode m) {
    switch (m) {
        case BetaMode::FixedModulus: return "fixed-mod";
        case BetaMode::Gaussian: return "gaussian";
    }
    return "unknown";
}

void TrialPlan::validate() const {
    scene.validate();
    if (detectors.empty()) throw std::invalid_argument("trial plan: no detectors selected");
}

const std::vector<double>& TrialResults::samples(Detector d) const {
    switch (d) {
        case Detector::Rao: return rao;
        case Detector::GlrtWilks: return glrt_wilks;
        case Detector::LrtKnownBeta: return lrt;
    }
    throw std::invalid_argument("unknown detector");
}

std::uint64_t scene_digest(const SceneConfig& scene) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](const void* data, std::size_t len) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= bytes[i];
            h *= 0x100000001b3ULL;
        }
    };
    const std::uint64_t dims[3] = {scene.m, scene.p, scene.n};
    const double values[3] = {scene.phi, scene.beta.real(), scene.beta.imag()};
    feed(dims, sizeof dims);
    feed(values, sizeof values);
    return h;
}

namespace {

Complex draw_beta(const TrialPlan& plan, RandomEngine& rng) {
    const double modulus = std::abs(plan.scene.beta);
    if (plan.beta_mode == BetaMode::Gaussian) {
        boost::random::normal_distribution<double> normal;
        const double re = normal(rng);
        const double im = normal(rng);
        return modulus * Complex(re, im) / std::numbers::sqrt2;
    }
    if (!plan.random_phase) return plan.scene.beta;
    boost::random::uniform_real_distribution<double> uniform(0.0, 2.0 * std::numbers::pi);
    return std::polar(modulus, uniform(rng));
}

bool selected(const TrialPlan& plan, Detector d) {
    return std::find(plan.detectors.begin(), plan.detectors.end(), d) != plan.detectors.end();
}

}  // namespace

Complex trial_beta(const TrialPlan& plan, std::uint64_t index) {
    RandomEngine rng = trial_stream(plan.master_seed, index);
    return draw_beta(plan, rng);
}

TrialResults run_trials(const TrialPlan& plan) {
    plan.validate();
    TrialResults out;
    out.master_seed = plan.master_seed;
    out.scene_digest = scene_digest(plan.scene);
    if (plan.trials == 0) return out;

    const bool want_rao = selected(plan, Detector::Rao);
    const bool want_glrt = selected(plan, Detector::GlrtWilks);
    const bool want_lrt = selected(plan, Detector::LrtKnownBeta);
    if (want_rao) out.rao.resize(plan.trials);
    if (want_glrt) out.glrt_wilks.resize(plan.trials);
    if (want_lrt) out.lrt.resize(plan.trials);

    const ComplexMatrix signature = scene_signature(plan.scene);

    unsigned workers = plan.workers == 0 ? std::thread::hardware_concurrency() : plan.workers;
    workers = std::clamp<unsigned>(workers, 1U,
                                   static_cast<unsigned>(std::min<std::size_t>(plan.trials, 256)));

    std::atomic<std::size_t> completed{0};
    std::mutex error_mutex;
    std::exception_ptr failure;
    bool out_of_memory = false;

    auto work = [&](std::size_t begin, std::size_t end) {
        try {
            ComplexMatrix received;
            ComplexMatrix quantized;
            for (std::size_t t = begin; t < end; ++t) {
                RandomEngine rng = trial_stream(plan.master_seed, t);
                const Complex beta = draw_beta(plan, rng);
                synthesize_received_into(signature, beta, plan.hypothesis, rng, received);
                if (want_rao || want_lrt) quantize_into(received, quantized);
                if (want_rao) out.rao[t] = rao_statistic(quantized, signature);
                if (want_glrt) out.glrt_wilks[t] = glrt_wilks_statistic(received, signature);
                if (want_lrt) out.lrt[t] = lrt_known_beta(quantized, signature, beta);
                completed.fetch_add(1, std::memory_order_relaxed);
            }
        } catch (const std::bad_alloc&) {
            const std::lock_guard lock(error_mutex);
            out_of_memory = true;
        } catch (...) {
            const std::lock_guard lock(error_mutex);
            if (!failure) failure = std::current_exception();
        }
    };

    if (workers == 1) {
        work(0, plan.trials);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::size_t chunk = (plan.trials + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = std::min(plan.trials, w * chunk);
            const std::size_t end = std::min(plan.trials, begin + chunk);
            pool.emplace_back(work, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    out.completed = completed.load();
    if (failure) std::rethrow_exception(failure);
    if (out_of_memory) {
        throw PartialResultsError("monte carlo: out of memory after " +
                                      std::to_string(out.completed) + " of " +
                                      std::to_string(plan.trials) + " trials",
                                  out.completed);
    }
    return out;
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
    if (sorted_.empty()) throw std::invalid_argument("empirical cdf: no samples");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::cdf(double x) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::ccdf(double x) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(sorted_.end() - it) / static_cast<double>(sorted_.size());
}

std::vector<double> EmpiricalCdf::thinned_order_statistics(std::size_t points) const {
    if (points == 0) throw std::invalid_argument("thinned grid: need at least one point");
    const std::size_t count = sorted_.size();
    const std::size_t k = std::min(points, count);
    std::vector<double> grid;
    grid.reserve(k);
    for (std::size_t i = 1; i <= k; ++i) {
        const std::size_t rank = (i * count + k - 1) / k;  // ceil(i * count / k)
        grid.push_back(sorted_[rank - 1]);
    }
    return grid;
}

double EmpiricalCdf::upper_quantile(double pfa) const {
    if (!(pfa > 0.0 && pfa <= 1.0)) throw std::invalid_argument("upper_quantile: pfa in (0, 1]");
    const std::size_t count = sorted_.size();
    const auto allowed = static_cast<std::size_t>(std::floor(pfa * static_cast<double>(count)));
    if (allowed >= count) return sorted_.front();
    return sorted_[count - allowed - 1];
}

double empirical_ccdf(std::span<const double> samples, double x) {
    if (samples.empty()) throw std::invalid_argument("empirical_ccdf: no samples");
    const auto above = std::count_if(samples.begin(), samples.end(), [x](double s) { return s > x; });
    return static_cast<double>(above) / static_cast<double>(samples.size());
}

double empirical_pd(std::span<const double> samples, double gamma) {
    return empirical_ccdf(samples, gamma);
}

double cvm_error(const EmpiricalCdf& empirical, const std::function<double(double)>& model_cdf,
                 std::span<const double> grid) {
    if (grid.empty()) throw std::invalid_argument("cvm_error: empty grid");
    double sum = 0.0;
    for (const double c : grid) {
        const double diff = empirical.cdf(c) - model_cdf(c);
        sum += diff * diff;
    }
    return sum / static_cast<double>(grid.size());
}

double cvm_error(const EmpiricalCdf& empirical, const std::function<double(double)>& model_cdf) {
    const auto grid = empirical.thinned_order_statistics(kDefaultCvmPoints);
    return cvm_error(empirical, model_cdf, grid);
}

double ExactScoreDistribution::ccdf(double x) const {
    double p = 0.0;
    for (const auto& a : atoms) {
        if (a.statistic > x) p += a.probability;
    }
    return p;
}

ExactScoreDistribution enumerate_exact(const ComplexMatrix& signature, Complex beta) {
    const auto count = static_cast<std::size_t>(signature.size());
    if (count == 0 || count > kMaxEnumerationSamples) {
        throw std::invalid_argument("enumerate_exact: need 1.." +
                                    std::to_string(kMaxEnumerationSamples) +
                                    " samples (4^N patterns), got " + std::to_string(count));
    }
    const double energy = signature.squaredNorm();
    if (!(energy > 0.0)) throw DegenerateError("enumerate_exact: tr(ZZ^H) = 0");
    const double root = std::sqrt(energy);

    // Per-sample probabilities of r = +/-1 and s = +/-1.
    std::vector<double> u(count), v(count), pr(count), ps(count), nr(count), ns(count);
    for (std::size_t i = 0; i < count; ++i) {
        const Complex z = signature.data()[i];
        const Complex mean = beta * z;
        u[i] = z.real();
        v[i] = z.imag();
        pr[i] = q_function(-mean.real());
        ps[i] = q_function(-mean.imag());
        nr[i] = q_function(mean.real());
        ns[i] = q_function(mean.imag());
    }

    ExactScoreDistribution out;
    const std::size_t patterns = std::size_t{1} << (2 * count);
    out.atoms.reserve(patterns);
    for (std::size_t code = 0; code < patterns; ++code) {
        double prob = 1.0;
        double t1 = 0.0;
        double t2 = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            const bool r_pos = (code >> (2 * i)) & 1U;
            const bool s_pos = (code >> (2 * i + 1)) & 1U;
            const double r = r_pos ? 1.0 : -1.0;
            const double s = s_pos ? 1.0 : -1.0;
            prob *= (r_pos ? pr[i] : nr[i]) * (s_pos ? ps[i] : ns[i]);
            t1 += r * u[i] + s * v[i];
            t2 += s * u[i] - r * v[i];
        }
        const double w1 = t1 / root;
        const double w2 = t2 / root;
        out.atoms.push_back({w1, w2, w1 * w1 + w2 * w2, prob});
        out.total_mass += prob;
        out.mean += prob * Eigen::Vector2d(w1, w2);
    }
    for (const auto& a : out.atoms) {
        const Eigen::Vector2d d(a.w1 - out.mean[0], a.w2 - out.mean[1]);
        out.covariance += a.probability * d * d.transpose();
    }
    return out;
}

}  // namespace onebit
