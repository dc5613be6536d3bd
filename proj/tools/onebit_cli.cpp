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

// onebit: command-line front end for the one-bit MIMO detection experiments.
//
//   onebit pfa-curve --m 4 --p 4 --n 32 --trials 100000 --out h0.csv
//   onebit sweep-snr --n 256 --snr-db -24 --snr-db -23.5 ... --pfa 1e-3
//   onebit loss
//
// Output is CSV preceded by one "# {json}" metadata line. Failures print a
// single JSON object on stderr and exit with a nonzero status.

#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "onebit/errors.hpp"
#include "onebit/experiments.hpp"

namespace {

using onebit::experiments::ExperimentConfig;

// Raw flag values; only the ones the user actually passed override the config file.
struct Flags {
    std::string config_path;
    std::size_t m = 0, p = 0, n = 0, trials = 0, threshold_points = 0, phase_points = 0;
    double phi = 0.0, pfa = 0.0, beta_phase = 0.0;
    std::vector<double> snr_db;
    std::uint64_t seed = 0;
    std::string beta_mode, out;
    std::vector<std::string> detectors;
    std::vector<std::size_t> n_values;
    unsigned workers = 0;
};

struct Options {
    CLI::Option* m{};
    CLI::Option* p{};
    CLI::Option* n{};
    CLI::Option* phi{};
    CLI::Option* snr_db{};
    CLI::Option* pfa{};
    CLI::Option* trials{};
    CLI::Option* seed{};
    CLI::Option* beta_mode{};
    CLI::Option* beta_phase{};
    CLI::Option* out{};
    CLI::Option* detectors{};
    CLI::Option* n_values{};
    CLI::Option* threshold_points{};
    CLI::Option* phase_points{};
    CLI::Option* workers{};
};

Options add_options(CLI::App& cmd, Flags& f) {
    Options o;
    cmd.add_option("--config", f.config_path, "JSON config file; flags override its values");
    o.m = cmd.add_option("--m", f.m, "transmit antennas");
    o.p = cmd.add_option("--p", f.p, "receive antennas");
    o.n = cmd.add_option("--n", f.n, "snapshots per frame");
    o.phi = cmd.add_option("--phi", f.phi, "target angle in radians")->allow_extra_args(false);
    o.snr_db = cmd.add_option("--snr-db", f.snr_db, "per-sample SNR in dB (repeatable)")
                   ->allow_extra_args(false);
    o.pfa = cmd.add_option("--pfa", f.pfa, "false-alarm probability");
    o.trials = cmd.add_option("--trials", f.trials, "Monte Carlo trials per point");
    o.seed = cmd.add_option("--seed", f.seed, "master seed");
    o.beta_mode = cmd.add_option("--beta-mode", f.beta_mode, "reflectivity draw")
                      ->check(CLI::IsMember({"fixed-mod", "gaussian"}));
    o.beta_phase = cmd.add_option("--beta-phase", f.beta_phase,
                                  "fixed reflectivity phase in radians (default: uniform per trial)")
                       ->allow_extra_args(false);
    o.out = cmd.add_option("--out", f.out, "output CSV path (default: stdout)");
    o.detectors = cmd.add_option("--detectors", f.detectors, "subset of rao, glrt, lrt")
                      ->delimiter(',');
    o.n_values = cmd.add_option("--n-values", f.n_values, "sweep-n snapshot grid")->delimiter(',');
    o.threshold_points = cmd.add_option("--threshold-points", f.threshold_points,
                                        "threshold grid size of the curve commands");
    o.phase_points = cmd.add_option("--phase-points", f.phase_points,
                                    "phases averaged by the random-phase Imhof model");
    o.workers = cmd.add_option("--workers", f.workers, "worker threads (0 = all cores)");
    return o;
}

ExperimentConfig merge(const std::string& command, const Flags& f, const Options& o) {
    ExperimentConfig c;
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) throw std::invalid_argument("cannot open config file '" + f.config_path + "'");
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw std::invalid_argument(std::string("config file is not valid JSON: ") + e.what());
        }
        c = onebit::experiments::config_from_json(doc);
    }
    c.command = command;
    if (o.m->count()) c.m = f.m;
    if (o.p->count()) c.p = f.p;
    if (o.n->count()) c.n = f.n;
    if (o.phi->count()) c.phi = f.phi;
    if (o.snr_db->count()) c.snr_db = f.snr_db;
    if (o.pfa->count()) c.pfa = f.pfa;
    if (o.trials->count()) c.trials = f.trials;
    if (o.seed->count()) c.seed = f.seed;
    if (o.beta_mode->count()) c.beta_mode = onebit::experiments::beta_mode_from_string(f.beta_mode);
    if (o.beta_phase->count()) c.beta_phase = f.beta_phase;
    if (o.out->count()) c.out = f.out;
    if (o.detectors->count()) {
        c.detectors.clear();
        for (const auto& d : f.detectors) c.detectors.push_back(onebit::experiments::detector_from_string(d));
    }
    if (o.n_values->count()) c.n_values = f.n_values;
    if (o.threshold_points->count()) c.threshold_points = f.threshold_points;
    if (o.phase_points->count()) c.phase_points = f.phase_points;
    if (o.workers->count()) c.workers = f.workers;
    c.validate();
    return c;
}

int fail(const char* kind, const std::string& message, int code,
         const nlohmann::json& extra = nlohmann::json::object()) {
    nlohmann::json err = {{"error", kind}, {"message", message}};
    err.update(extra);
    std::cerr << err.dump() << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"One-bit MIMO radar detection experiments"};
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"pfa-curve", "empirical vs theoretical false-alarm curves under H0"},
        {"pd-curve", "detection curves at one SNR: Imhof, low-SNR and GLRT models"},
        {"sweep-snr", "fixed-pfa detection probability vs SNR"},
        {"sweep-n", "fixed-pfa detection probability vs snapshot count"},
        {"gof", "Cramer-von Mises error of each distribution model"},
        {"loss", "asymptotic one-bit quantization loss constants"}};

    std::vector<Flags> flags(commands.size());
    std::vector<Options> options(commands.size());
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < commands.size(); ++i) {
        auto* sub = app.add_subcommand(commands[i].first, commands[i].second);
        options[i] = add_options(*sub, flags[i]);
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what(), 2);
    }

    try {
        for (std::size_t i = 0; i < commands.size(); ++i) {
            if (!subs[i]->parsed()) continue;
            const ExperimentConfig config = merge(commands[i].first, flags[i], options[i]);
            std::ofstream file;
            if (!config.out.empty()) {
                file.open(config.out, std::ios::binary);
                if (!file) throw std::runtime_error("cannot open output file '" + config.out + "'");
            }
            const auto table = onebit::experiments::run_command(config);
            std::ostream& os = config.out.empty() ? std::cout : file;
            table.write_csv(os);
            if (!os.flush()) throw std::runtime_error("failed writing '" + config.out + "'");
        }
    } catch (const onebit::PartialResultsError& e) {
        return fail("partial_results", e.what(), 4, {{"completed", e.completed()}});
    } catch (const std::invalid_argument& e) {
        return fail("invalid_argument", e.what(), 2);
    } catch (const onebit::NumericalError& e) {
        return fail("numerical", e.what(), 3);
    } catch (const onebit::DegenerateError& e) {
        return fail("degenerate", e.what(), 3);
    } catch (const std::bad_alloc&) {
        return fail("out_of_memory", "allocation failed", 4);
    } catch (const std::exception& e) {
        return fail("runtime", e.what(), 1);
    }
    return EXIT_SUCCESS;
}
