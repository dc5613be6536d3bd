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

#include "onebit/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

#include "onebit/random.hpp"
#include "onebit/scene.hpp"
#include "onebit/theory.hpp"

namespace onebit::experiments {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kRayleighPoints = 16;
constexpr std::uint64_t kCalibrationSalt = 0x5bd1e9955bd1e995ULL;

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return out;
}

double interpolate(const std::vector<double>& x, const std::vector<double>& y, double at) {
    if (x.empty() || at < x.front() || at > x.back()) return kNaN;
    const auto it = std::lower_bound(x.begin(), x.end(), at);
    const auto i = static_cast<std::size_t>(it - x.begin());
    if (x[i] == at) return y[i];
    const double t = (at - x[i - 1]) / (x[i] - x[i - 1]);
    return y[i - 1] + t * (y[i] - y[i - 1]);
}

double single_snr(const ExperimentConfig& config, const char* command) {
    if (config.snr_db.size() != 1) {
        throw std::invalid_argument(std::string(command) + ": exactly one --snr-db value required");
    }
    return config.snr_db.front();
}

SceneConfig scene_with_snr(const ExperimentConfig& config, double snr_db) {
    SceneConfig scene = config.scene();
    scene.beta = std::polar(beta_modulus_from_snr_db(snr_db), config.beta_phase.value_or(0.0));
    return scene;
}

TrialPlan make_plan(const ExperimentConfig& config, const SceneConfig& scene, Hypothesis h,
                    std::vector<Detector> detectors, std::uint64_t seed) {
    TrialPlan plan;
    plan.scene = scene;
    plan.hypothesis = h;
    plan.trials = config.trials;
    plan.master_seed = seed;
    plan.detectors = std::move(detectors);
    plan.beta_mode = config.beta_mode;
    plan.random_phase = !config.beta_phase.has_value();
    plan.workers = config.workers;
    return plan;
}

bool wants(const ExperimentConfig& config, Detector d) {
    return std::find(config.detectors.begin(), config.detectors.end(), d) !=
           config.detectors.end();
}

// Theoretical detection curves matching the configured reflectivity draw:
// fixed phase, uniform phase, or complex Gaussian (exponential |beta|^2 by
// midpoint quantiles, uniform phase).
class DetectionTheory {
public:
    DetectionTheory(const ExperimentConfig& config, const ComplexMatrix& signature, double modulus)
        : samples_(static_cast<std::size_t>(signature.size())) {
        if (config.beta_mode == BetaMode::Gaussian) {
            for (std::size_t k = 0; k < kRayleighPoints; ++k) {
                const double q = (static_cast<double>(k) + 0.5) / static_cast<double>(kRayleighPoints);
                moduli_.push_back(modulus * std::sqrt(-std::log1p(-q)));
            }
        } else {
            moduli_.push_back(modulus);
        }
        for (const double mod : moduli_) {
            if (config.beta_mode == BetaMode::FixedModulus && config.beta_phase) {
                rao_.push_back(RaoDetectionModel::fixed(signature, std::polar(mod, *config.beta_phase)));
            } else {
                rao_.push_back(RaoDetectionModel::phase_averaged(signature, mod, config.phase_points));
            }
        }
    }

    [[nodiscard]] double pd_imhof(double gamma) const {
        double s = 0.0;
        for (const auto& m : rao_) s += m.ccdf(gamma);
        return s / static_cast<double>(rao_.size());
    }
    [[nodiscard]] double pd_lowsnr(double gamma) const {
        double s = 0.0;
        for (const double mod : moduli_) s += rao_pd_lowsnr(samples_, Complex(mod, 0.0), gamma);
        return s / static_cast<double>(moduli_.size());
    }
    [[nodiscard]] double pd_glrt(double gamma) const {
        double s = 0.0;
        for (const double mod : moduli_) s += glrt_pd(samples_, Complex(mod, 0.0), gamma);
        return s / static_cast<double>(moduli_.size());
    }

private:
    std::size_t samples_;
    std::vector<double> moduli_;
    std::vector<RaoDetectionModel> rao_;
};

nlohmann::json base_metadata(const ExperimentConfig& config) {
    nlohmann::json meta;
    meta["tool"] = "onebit";
    meta["config"] = to_json(config);
    meta["master_seed"] = config.seed;
    return meta;
}

void finish(Table& table, nlohmann::json meta) {
    auto& summary = meta["summary"] = nlohmann::json::object();
    for (const auto& [k, v] : table.summary) {
        summary[k] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
    }
    table.metadata = std::move(meta);
}

// SNR (dB) where a monotone theoretical Pd curve equals `level`.
template <typename PdAtSnr>
double solve_snr(PdAtSnr&& pd_at, double level, double lo, double hi) {
    auto f = [&](double snr) { return pd_at(snr) - level; };
    if (f(lo) > 0.0 || f(hi) < 0.0) return kNaN;
    boost::uintmax_t iterations = 100;
    const auto [a, b] = boost::math::tools::toms748_solve(
        f, lo, hi, boost::math::tools::eps_tolerance<double>(40), iterations);
    return 0.5 * (a + b);
}

}  // namespace

double crossing(const std::vector<double>& x, const std::vector<double>& y, double level) {
    if (x.size() != y.size()) throw std::invalid_argument("crossing: size mismatch");
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = y[i] - level;
        const double b = y[i + 1] - level;
        if (std::isnan(a) || std::isnan(b)) continue;
        if (a == 0.0) return x[i];
        if (a < 0.0 && b >= 0.0) return x[i] + (x[i + 1] - x[i]) * (-a) / (b - a);
    }
    if (!y.empty() && y.back() == level) return x.back();
    return kNaN;
}

std::vector<std::pair<std::string, double>> goodness_of_fit(const EmpiricalCdf& empirical,
                                                            const std::vector<NamedModel>& models) {
    const auto grid = empirical.thinned_order_statistics(kDefaultCvmPoints);
    std::vector<std::pair<std::string, double>> out;
    out.reserve(models.size());
    for (const auto& m : models) out.emplace_back(m.name, cvm_error(empirical, m.cdf, grid));
    return out;
}

Table cmd_pfa_curve(const ExperimentConfig& config) {
    config.validate();
    const SceneConfig scene = config.scene();
    const double marker = rao_threshold(config.pfa);
    const double upper = std::max(20.0, 1.5 * marker);
    std::vector<double> thresholds = linspace(0.0, upper, config.threshold_points);
    thresholds.push_back(marker);
    std::sort(thresholds.begin(), thresholds.end());

    Table table;
    table.columns = {"threshold", "empirical_pfa_rao", "theory_pfa", "empirical_pfa_glrt_wilks",
                     "theory_chi2_2"};
    std::optional<EmpiricalCdf> rao, glrt;
    auto meta = base_metadata(config);
    if (config.trials > 0) {
        const auto res = run_trials(make_plan(config, scene, Hypothesis::H0,
                                              {Detector::Rao, Detector::GlrtWilks}, config.seed));
        meta["scene_digest"] = res.scene_digest;
        rao.emplace(res.rao);
        glrt.emplace(res.glrt_wilks);
    }
    for (const double g : thresholds) {
        table.rows.push_back({g, rao ? rao->ccdf(g) : kNaN, rao_pfa(g), glrt ? glrt->ccdf(g) : kNaN,
                              central_chi2_ccdf(2, g)});
    }
    table.summary.emplace_back("marker_threshold", marker);
    if (rao) {
        const auto null_cdf = [](double x) { return 1.0 - rao_pfa(std::max(0.0, x)); };
        table.summary.emplace_back("cvm_rao", cvm_error(*rao, null_cdf));
        table.summary.emplace_back("cvm_glrt_wilks", cvm_error(*glrt, null_cdf));
    }
    finish(table, std::move(meta));
    return table;
}

Table cmd_pd_curve(const ExperimentConfig& config) {
    config.validate();
    const double snr = single_snr(config, "pd-curve");
    const SceneConfig scene = scene_with_snr(config, snr);
    const ComplexMatrix signature = scene_signature(scene);
    const double modulus = std::abs(scene.beta);
    const DetectionTheory theory(config, signature, modulus);

    const double delta2 = glrt_noncentrality(scene.total_samples(), Complex(modulus, 0.0));
    const double upper = 2.0 + delta2 + 8.0 * std::sqrt(4.0 + 4.0 * delta2);
    const auto thresholds = linspace(0.0, upper, config.threshold_points);

    Table table;
    table.columns = {"threshold",     "empirical_pd", "pd_imhof", "pd_lowsnr", "pd_glrt_wilks",
                     "empirical_pd_glrt_wilks"};
    auto meta = base_metadata(config);
    std::optional<EmpiricalCdf> rao, glrt;
    if (config.trials > 0) {
        const auto res = run_trials(make_plan(config, scene, Hypothesis::H1,
                                              {Detector::Rao, Detector::GlrtWilks}, config.seed));
        meta["scene_digest"] = res.scene_digest;
        rao.emplace(res.rao);
        glrt.emplace(res.glrt_wilks);
    }
    for (const double g : thresholds) {
        table.rows.push_back({g, rao ? rao->ccdf(g) : kNaN, theory.pd_imhof(g), theory.pd_lowsnr(g),
                              theory.pd_glrt(g), glrt ? glrt->ccdf(g) : kNaN});
    }
    if (rao) {
        table.summary.emplace_back(
            "cvm_imhof", cvm_error(*rao, [&](double x) { return 1.0 - theory.pd_imhof(std::max(0.0, x)); }));
        table.summary.emplace_back(
            "cvm_lowsnr", cvm_error(*rao, [&](double x) { return 1.0 - theory.pd_lowsnr(std::max(0.0, x)); }));
        table.summary.emplace_back(
            "cvm_glrt_wilks", cvm_error(*glrt, [&](double x) { return 1.0 - theory.pd_glrt(std::max(0.0, x)); }));
    }
    finish(table, std::move(meta));
    return table;
}

Table cmd_sweep_snr(const ExperimentConfig& config) {
    config.validate();
    if (config.snr_db.empty()) throw std::invalid_argument("sweep-snr: at least one --snr-db value required");
    std::vector<double> snrs = config.snr_db;
    std::sort(snrs.begin(), snrs.end());
    const double gamma = rao_threshold(config.pfa);
    const bool want_rao = wants(config, Detector::Rao);
    const bool want_glrt = wants(config, Detector::GlrtWilks);
    const bool want_lrt = wants(config, Detector::LrtKnownBeta);
    const bool simulate = config.trials > 0;

    Table table;
    table.columns = {"snr_db", "pd_rao_empirical", "pd_rao_imhof", "pd_glrt_empirical",
                     "pd_glrt_theory", "pd_lrt_empirical"};
    auto meta = base_metadata(config);
    std::vector<double> lrt_thresholds;

    for (std::size_t k = 0; k < snrs.size(); ++k) {
        const SceneConfig scene = scene_with_snr(config, snrs[k]);
        const ComplexMatrix signature = scene_signature(scene);
        const DetectionTheory theory(config, signature, std::abs(scene.beta));
        double pd_rao = kNaN, pd_glrt = kNaN, pd_lrt = kNaN;
        if (simulate) {
            std::vector<Detector> dets;
            if (want_rao) dets.push_back(Detector::Rao);
            if (want_glrt) dets.push_back(Detector::GlrtWilks);
            if (want_lrt) dets.push_back(Detector::LrtKnownBeta);
            if (!dets.empty()) {
                // Same master seed at every SNR: common random numbers across the sweep.
                const auto h1 = run_trials(make_plan(config, scene, Hypothesis::H1, dets, config.seed));
                if (want_rao) pd_rao = empirical_pd(h1.rao, gamma);
                if (want_glrt) pd_glrt = empirical_pd(h1.glrt_wilks, gamma);
                if (want_lrt) {
                    const auto h0 = run_trials(make_plan(config, scene, Hypothesis::H0,
                                                         {Detector::LrtKnownBeta},
                                                         mix64(config.seed ^ kCalibrationSalt)));
                    const double thr = EmpiricalCdf(h0.lrt).upper_quantile(config.pfa);
                    lrt_thresholds.push_back(thr);
                    pd_lrt = empirical_pd(h1.lrt, thr);
                }
            }
        }
        table.rows.push_back({snrs[k], pd_rao, theory.pd_imhof(gamma), pd_glrt,
                              theory.pd_glrt(gamma), pd_lrt});
    }
    if (!lrt_thresholds.empty()) meta["lrt_thresholds"] = lrt_thresholds;

    const auto rao_emp = table.numbers("pd_rao_empirical");
    const auto glrt_emp = table.numbers("pd_glrt_empirical");
    const auto lrt_emp = table.numbers("pd_lrt_empirical");
    for (const double level : {0.5, 0.9}) {
        const std::string tag = level == 0.5 ? "pd50" : "pd90";
        const double r = crossing(snrs, rao_emp, level);
        const double g = crossing(snrs, glrt_emp, level);
        const double l = crossing(snrs, lrt_emp, level);
        table.summary.emplace_back("snr_" + tag + "_rao_empirical", r);
        table.summary.emplace_back("snr_" + tag + "_glrt_empirical", g);
        table.summary.emplace_back("snr_" + tag + "_lrt_empirical", l);
        table.summary.emplace_back("gap_" + tag + "_rao_glrt_empirical_db", r - g);
        table.summary.emplace_back("gap_" + tag + "_rao_lrt_empirical_db", r - l);
    }

    // Continuous theoretical crossings at Pd = 0.5.
    const SceneConfig base = config.scene();
    const ComplexMatrix signature = scene_signature(base);
    auto glrt_at = [&](double snr) {
        return DetectionTheory(config, signature, beta_modulus_from_snr_db(snr)).pd_glrt(gamma);
    };
    const double lo = snrs.front() - 15.0;
    const double hi = snrs.back() + 15.0;
    const double g50 = solve_snr(glrt_at, 0.5, lo, hi);
    double r50 = kNaN;
    if (std::isfinite(g50)) {
        auto rao_at = [&](double snr) {
            return DetectionTheory(config, signature, beta_modulus_from_snr_db(snr)).pd_imhof(gamma);
        };
        r50 = solve_snr(rao_at, 0.5, g50 - 1.0, g50 + 8.0);
    }
    table.summary.emplace_back("snr_pd50_rao_theory", r50);
    table.summary.emplace_back("snr_pd50_glrt_theory", g50);
    table.summary.emplace_back("gap_pd50_rao_glrt_theory_db", r50 - g50);
    finish(table, std::move(meta));
    return table;
}

Table cmd_sweep_n(const ExperimentConfig& config) {
    config.validate();
    const double snr = single_snr(config, "sweep-n");
    std::vector<std::size_t> ns = config.n_values;
    if (ns.empty()) ns = {32, 64, 128, 256, 512, 1024, 2048};
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    const double gamma = rao_threshold(config.pfa);
    const bool simulate = config.trials > 0;

    std::vector<double> log2n, pd_rao, pd_glrt, pd_rao_th, pd_glrt_th;
    auto meta = base_metadata(config);
    for (const std::size_t n : ns) {
        ExperimentConfig at_n = config;
        at_n.n = n;
        const SceneConfig scene = scene_with_snr(at_n, snr);
        const ComplexMatrix signature = scene_signature(scene);
        const DetectionTheory theory(at_n, signature, std::abs(scene.beta));
        log2n.push_back(std::log2(static_cast<double>(n)));
        pd_rao_th.push_back(theory.pd_imhof(gamma));
        pd_glrt_th.push_back(theory.pd_glrt(gamma));
        if (simulate) {
            const auto res = run_trials(make_plan(at_n, scene, Hypothesis::H1,
                                                  {Detector::Rao, Detector::GlrtWilks}, config.seed));
            pd_rao.push_back(empirical_pd(res.rao, gamma));
            pd_glrt.push_back(empirical_pd(res.glrt_wilks, gamma));
        } else {
            pd_rao.push_back(kNaN);
            pd_glrt.push_back(kNaN);
        }
    }

    // The GLRT copy shifted right by log2(pi/2) on the log2(n) axis.
    const double shift = std::log2(sample_compensation_factor());
    const auto& glrt_source = simulate ? pd_glrt : pd_glrt_th;
    const auto& rao_source = simulate ? pd_rao : pd_rao_th;
    Table table;
    table.columns = {"n", "pd_rao", "pd_glrt", "pd_glrt_shifted", "pd_rao_theory", "pd_glrt_theory"};
    double max_diff = kNaN;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const double shifted = ns.size() > 1 ? interpolate(log2n, glrt_source, log2n[i] - shift) : kNaN;
        if (std::isfinite(shifted)) {
            const double d = std::abs(rao_source[i] - shifted);
            max_diff = std::isfinite(max_diff) ? std::max(max_diff, d) : d;
        }
        table.rows.push_back({static_cast<double>(ns[i]), pd_rao[i], pd_glrt[i], shifted,
                              pd_rao_th[i], pd_glrt_th[i]});
    }
    auto n_at = [&](const std::vector<double>& pd) { return std::exp2(crossing(log2n, pd, 0.5)); };
    const double nr = n_at(pd_rao), ng = n_at(pd_glrt);
    const double nrt = n_at(pd_rao_th), ngt = n_at(pd_glrt_th);
    table.summary.emplace_back("n_pd50_rao", nr);
    table.summary.emplace_back("n_pd50_glrt", ng);
    table.summary.emplace_back("n_ratio_pd50", nr / ng);
    table.summary.emplace_back("n_pd50_rao_theory", nrt);
    table.summary.emplace_back("n_pd50_glrt_theory", ngt);
    table.summary.emplace_back("n_ratio_pd50_theory", nrt / ngt);
    table.summary.emplace_back("max_abs_diff_rao_vs_shifted_glrt", max_diff);
    finish(table, std::move(meta));
    return table;
}

Table cmd_gof(const ExperimentConfig& config) {
    config.validate();
    if (config.trials == 0) throw std::invalid_argument("gof: trials must be positive");
    if (config.snr_db.size() > 1) throw std::invalid_argument("gof: at most one --snr-db value");
    Table table;
    table.columns = {"approximation", "cvm_error"};
    auto meta = base_metadata(config);
    std::vector<std::pair<std::string, double>> report;
    if (config.snr_db.empty()) {
        const SceneConfig scene = config.scene();
        const auto res = run_trials(make_plan(config, scene, Hypothesis::H0,
                                              {Detector::Rao, Detector::GlrtWilks}, config.seed));
        meta["scene_digest"] = res.scene_digest;
        const auto null_cdf = [](double x) { return 1.0 - rao_pfa(std::max(0.0, x)); };
        for (auto& e : goodness_of_fit(EmpiricalCdf(res.rao), {{"rao_null_chi2_2", null_cdf}})) report.push_back(e);
        for (auto& e : goodness_of_fit(EmpiricalCdf(res.glrt_wilks), {{"glrt_null_chi2_2", null_cdf}})) report.push_back(e);
    } else {
        const SceneConfig scene = scene_with_snr(config, config.snr_db.front());
        const ComplexMatrix signature = scene_signature(scene);
        const DetectionTheory theory(config, signature, std::abs(scene.beta));
        const auto res = run_trials(make_plan(config, scene, Hypothesis::H1,
                                              {Detector::Rao, Detector::GlrtWilks}, config.seed));
        meta["scene_digest"] = res.scene_digest;
        const std::vector<NamedModel> rao_models = {
            {"rao_imhof", [&](double x) { return 1.0 - theory.pd_imhof(std::max(0.0, x)); }},
            {"rao_lowsnr", [&](double x) { return 1.0 - theory.pd_lowsnr(std::max(0.0, x)); }}};
        for (auto& e : goodness_of_fit(EmpiricalCdf(res.rao), rao_models)) report.push_back(e);
        const std::vector<NamedModel> glrt_models = {
            {"glrt_wilks", [&](double x) { return 1.0 - theory.pd_glrt(std::max(0.0, x)); }}};
        for (auto& e : goodness_of_fit(EmpiricalCdf(res.glrt_wilks), glrt_models)) report.push_back(e);
    }
    for (const auto& [name, value] : report) {
        table.rows.push_back({name, value});
        table.summary.emplace_back("cvm_" + name, value);
    }
    finish(table, std::move(meta));
    return table;
}

Table cmd_loss() {
    Table table;
    table.columns = {"quantity", "value", "description"};
    const double loss = loss_db();
    const double factor = sample_compensation_factor();
    table.rows.push_back({std::string("loss_db"), loss,
                          std::string("10*log10(pi/2): low-SNR SNR penalty of one-bit vs unquantized sampling")});
    table.rows.push_back({std::string("sample_compensation_factor"), factor,
                          std::string("pi/2: snapshot multiplier recovering the one-bit loss")});
    table.rows.push_back({std::string("log2_sample_shift"), std::log2(factor),
                          std::string("log2(pi/2): shift of the unquantized Pd-vs-log2(n) curve")});
    table.rows.push_back({std::string("fim_ratio"), 2.0 / std::numbers::pi,
                          std::string("2/pi: one-bit to unquantized Fisher information at beta = 0")});
    char headline[64];
    std::snprintf(headline, sizeof headline, "%.4f dB, x%.4f samples", loss, factor);
    nlohmann::json meta;
    meta["tool"] = "onebit";
    meta["config"] = {{"command", "loss"}};
    meta["headline"] = headline;
    table.summary.emplace_back("loss_db", loss);
    table.summary.emplace_back("sample_compensation_factor", factor);
    finish(table, std::move(meta));
    return table;
}

Table run_command(const ExperimentConfig& config) {
    if (config.command == "pfa-curve") return cmd_pfa_curve(config);
    if (config.command == "pd-curve") return cmd_pd_curve(config);
    if (config.command == "sweep-snr") return cmd_sweep_snr(config);
    if (config.command == "sweep-n") return cmd_sweep_n(config);
    if (config.command == "gof") return cmd_gof(config);
    if (config.command == "loss") return cmd_loss();
    throw std::invalid_argument("unknown command '" + config.command + "'");
}

}  // namespace onebit::experiments
