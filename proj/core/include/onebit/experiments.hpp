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
#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "onebit/montecarlo.hpp"

namespace onebit::experiments {

/// Everything a command needs; round-trips through JSON so that the metadata
/// line of every output table can be fed back with --config.
struct ExperimentConfig {
    std::string command;
    std::size_t m = 4;
    std::size_t p = 4;
    std::size_t n = 32;
    double phi = -std::numbers::pi / 3.0;
    std::vector<double> snr_db;
    double pfa = 1e-3;
    std::size_t trials = 100'000;
    std::uint64_t seed = 1;
    std::string out;
    std::vector<Detector> detectors{Detector::Rao, Detector::GlrtWilks, Detector::LrtKnownBeta};
    BetaMode beta_mode = BetaMode::FixedModulus;
    /// Fixed reflectivity phase; unset draws a uniform phase per trial.
    std::optional<double> beta_phase;
    /// sweep-n grid; empty uses the dyadic default 32..2048.
    std::vector<std::size_t> n_values;
    /// Threshold grid resolution of pfa-curve / pd-curve.
    std::size_t threshold_points = 101;
    /// Phases averaged by the Imhof model when the phase is random.
    std::size_t phase_points = 8;
    unsigned workers = 0;

    [[nodiscard]] SceneConfig scene() const;
    void validate() const;
};

[[nodiscard]] nlohmann::json to_json(const ExperimentConfig& config);

/// Throws std::invalid_argument on unknown keys or ill-typed values.
[[nodiscard]] ExperimentConfig config_from_json(const nlohmann::json& doc);

[[nodiscard]] Detector detector_from_string(const std::string& name);
[[nodiscard]] BetaMode beta_mode_from_string(const std::string& name);

using Cell = std::variant<double, std::string>;

/// Command output: a CSV body plus a JSON metadata comment line.
///
/// Layout written by write_csv:
///   # {"config": {...}, "summary": {...}, ...}
///   col_a,col_b,...
///   rows...
///   # summary,<key>,<value>     (one line per summary entry)
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    nlohmann::json metadata = nlohmann::json::object();
    std::vector<std::pair<std::string, double>> summary;

    [[nodiscard]] std::size_t column_index(const std::string& name) const;
    [[nodiscard]] double number(std::size_t row, const std::string& column) const;
    [[nodiscard]] std::vector<double> numbers(const std::string& column) const;
    [[nodiscard]] std::optional<double> summary_value(const std::string& key) const;

    void write_csv(std::ostream& os) const;
};

/// A named model CDF for goodness-of-fit reporting.
struct NamedModel {
    std::string name;
    std::function<double(double)> cdf;
};

/// CvM error of each model against `empirical` on the default order-statistic grid.
[[nodiscard]] std::vector<std::pair<std::string, double>> goodness_of_fit(
    const EmpiricalCdf& empirical, const std::vector<NamedModel>& models);

/// SNR (dB) at which a curve sampled on `snr_db` first reaches `level`, by linear
/// interpolation; NaN when the level is not bracketed.
[[nodiscard]] double crossing(const std::vector<double>& x, const std::vector<double>& y,
                              double level);

/// H0 threshold curves: threshold, empirical_pfa_rao, theory_pfa,
/// empirical_pfa_glrt_wilks, theory_chi2_2.
[[nodiscard]] Table cmd_pfa_curve(const ExperimentConfig& config);

/// H1 curves at one SNR: threshold, empirical_pd, pd_imhof, pd_lowsnr,
/// pd_glrt_wilks, empirical_pd_glrt_wilks.
[[nodiscard]] Table cmd_pd_curve(const ExperimentConfig& config);

/// Fixed-pfa detection vs SNR: snr_db, pd_rao_empirical, pd_rao_imhof,
/// pd_glrt_empirical, pd_glrt_theory, pd_lrt_empirical.
[[nodiscard]] Table cmd_sweep_snr(const ExperimentConfig& config);

/// Fixed-pfa detection vs snapshots: n, pd_rao, pd_glrt, pd_glrt_shifted,
/// pd_rao_theory, pd_glrt_theory.
[[nodiscard]] Table cmd_sweep_n(const ExperimentConfig& config);

/// approximation, cvm_error for every model applicable to the configured scene.
[[nodiscard]] Table cmd_gof(const ExperimentConfig& config);

/// quantity, value, description for the quantization-loss constants.
[[nodiscard]] Table cmd_loss();

/// Dispatch on config.command.
[[nodiscard]] Table run_command(const ExperimentConfig& config);

}  // namespace onebit::experiments
