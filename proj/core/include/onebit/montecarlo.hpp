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
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "onebit/types.hpp"

namespace onebit {

enum class Detector { Rao, GlrtWilks, LrtKnownBeta };

/// How each trial's reflectivity is drawn from scene.beta.
enum class BetaMode {
    FixedModulus,  ///< |beta| = |scene.beta|; phase uniform per trial or fixed
    Gaussian,      ///< beta ~ CN(0, |scene.beta|^2), redrawn per trial
};

[[nodiscard]] std::string to_string(Detector d);
[[nodiscard]] std::string to_string(BetaMode m);

struct TrialPlan {
    SceneConfig scene;
    Hypothesis hypothesis = Hypothesis::H0;
    std::size_t trials = 0;
    std::uint64_t master_seed = 0;
    std::vector<Detector> detectors{Detector::Rao};
    BetaMode beta_mode = BetaMode::FixedModulus;
    /// FixedModulus only: false keeps arg(scene.beta) in every trial.
    bool random_phase = true;
    /// 0 uses std::thread::hardware_concurrency().
    unsigned workers = 0;

    void validate() const;
};

/// Aligned per-trial samples; a detector not in the plan leaves its vector empty.
struct TrialResults {
    std::vector<double> rao;
    std::vector<double> glrt_wilks;
    std::vector<double> lrt;
    std::uint64_t master_seed = 0;
    std::uint64_t scene_digest = 0;
    std::size_t completed = 0;

    [[nodiscard]] const std::vector<double>& samples(Detector d) const;
};

/// Stable FNV-1a digest of the scene parameters.
[[nodiscard]] std::uint64_t scene_digest(const SceneConfig& scene);

/// Reflectivity used in trial `index` of `plan`.
[[nodiscard]] Complex trial_beta(const TrialPlan& plan, std::uint64_t index);

/// Run the plan. Trial t draws everything from trial_stream(seed, t), and all
/// selected detectors see the same realization; output is independent of the
/// worker count. Throws PartialResultsError if allocation fails mid-run.
[[nodiscard]] TrialResults run_trials(const TrialPlan& plan);

/// Sorted sample set with right-continuous step CDF F(x) = #{s <= x} / count.
class EmpiricalCdf {
public:
    explicit EmpiricalCdf(std::vector<double> samples);

    [[nodiscard]] double cdf(double x) const;
    [[nodiscard]] double ccdf(double x) const;
    [[nodiscard]] std::size_t size() const noexcept { return sorted_.size(); }
    [[nodiscard]] std::span<const double> sorted() const noexcept { return sorted_; }

    /// K order statistics at equally spaced ranks ceil(i * count / K), i = 1..K.
    [[nodiscard]] std::vector<double> thinned_order_statistics(std::size_t points) const;

    /// Smallest sample s with Pr{sample > s} <= pfa, used for empirical thresholds.
    [[nodiscard]] double upper_quantile(double pfa) const;

private:
    std::vector<double> sorted_;
};

/// Fraction of samples strictly above x. Empty input throws std::invalid_argument.
[[nodiscard]] double empirical_ccdf(std::span<const double> samples, double x);
[[nodiscard]] double empirical_pd(std::span<const double> samples, double gamma);

inline constexpr std::size_t kDefaultCvmPoints = 1000;

/// Cramer-von Mises error (1/K) sum |F(c_i) - model(c_i)|^2 over `grid`.
[[nodiscard]] double cvm_error(const EmpiricalCdf& empirical,
                               const std::function<double(double)>& model_cdf,
                               std::span<const double> grid);

/// As above on the default grid of kDefaultCvmPoints thinned order statistics.
[[nodiscard]] double cvm_error(const EmpiricalCdf& empirical,
                               const std::function<double(double)>& model_cdf);

/// Exact law of the score pair and of T_R for a small scene, by enumerating
/// all 4^N sign patterns of the quantized data.
struct ExactScoreDistribution {
    struct Atom {
        double w1;
        double w2;
        double statistic;  ///< w1^2 + w2^2 = rao_statistic of the pattern
        double probability;
    };
    std::vector<Atom> atoms;
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();
    double total_mass = 0.0;

    /// Pr{T_R > x}.
    [[nodiscard]] double ccdf(double x) const;
};

inline constexpr std::size_t kMaxEnumerationSamples = 10;

/// Throws std::invalid_argument when the signature has more than
/// kMaxEnumerationSamples entries.
[[nodiscard]] ExactScoreDistribution enumerate_exact(const ComplexMatrix& signature, Complex beta);

}  // namespace onebit
