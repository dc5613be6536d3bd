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

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "onebit/experiments.hpp"

namespace onebit::experiments {

namespace {

const std::set<std::string> kKnownKeys = {
    "command", "m",  "p",         "n",        "phi",        "snr_db",
    "pfa",     "trials", "seed",  "out",      "detectors",  "beta_mode",
    "beta_phase", "n_values", "threshold_points", "phase_points", "workers"};

const std::set<std::string> kCommands = {"pfa-curve", "pd-curve", "sweep-snr",
                                         "sweep-n",   "gof",      "loss"};

template <typename T>
T read(const nlohmann::json& doc, const char* key) {
    try {
        return doc.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config: bad value for '") + key + "': " +
                                    e.what());
    }
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
    return os.str();
}

}  // namespace

Detector detector_from_string(const std::string& name) {
    if (name == "rao") return Detector::Rao;
    if (name == "glrt") return Detector::GlrtWilks;
    if (name == "lrt") return Detector::LrtKnownBeta;
    throw std::invalid_argument("unknown detector '" + name + "' (expected rao, glrt, lrt)");
}

BetaMode beta_mode_from_string(const std::string& name) {
    if (name == "fixed-mod") return BetaMode::FixedModulus;
    if (name == "gaussian") return BetaMode::Gaussian;
    throw std::invalid_argument("unknown beta mode '" + name + "' (expected fixed-mod, gaussian)");
}

SceneConfig ExperimentConfig::scene() const {
    SceneConfig s;
    s.m = m;
    s.p = p;
    s.n = n;
    s.phi = phi;
    return s;
}

void ExperimentConfig::validate() const {
    if (!command.empty() && !kCommands.contains(command)) {
        throw std::invalid_argument("unknown command '" + command + "'");
    }
    scene().validate();
    if (!(pfa > 0.0 && pfa < 1.0)) throw std::invalid_argument("config: pfa must lie in (0, 1)");
    for (const double s : snr_db) {
        if (!std::isfinite(s)) throw std::invalid_argument("config: snr_db values must be finite");
    }
    for (const auto v : n_values) {
        if (v == 0) throw std::invalid_argument("config: n_values must be positive");
    }
    if (threshold_points < 2) throw std::invalid_argument("config: threshold_points must be >= 2");
    if (phase_points == 0) throw std::invalid_argument("config: phase_points must be >= 1");
    if (beta_phase && !std::isfinite(*beta_phase)) {
        throw std::invalid_argument("config: beta_phase must be finite");
    }
}

nlohmann::json to_json(const ExperimentConfig& c) {
    nlohmann::json doc;
    doc["command"] = c.command;
    doc["m"] = c.m;
    doc["p"] = c.p;
    doc["n"] = c.n;
    doc["phi"] = c.phi;
    doc["snr_db"] = c.snr_db;
    doc["pfa"] = c.pfa;
    doc["trials"] = c.trials;
    doc["seed"] = c.seed;
    doc["out"] = c.out;
    auto& dets = doc["detectors"] = nlohmann::json::array();
    for (const auto d : c.detectors) dets.push_back(to_string(d));
    doc["beta_mode"] = to_string(c.beta_mode);
    doc["beta_phase"] = c.beta_phase ? nlohmann::json(*c.beta_phase) : nlohmann::json(nullptr);
    doc["n_values"] = c.n_values;
    doc["threshold_points"] = c.threshold_points;
    doc["phase_points"] = c.phase_points;
    doc["workers"] = c.workers;
    return doc;
}

ExperimentConfig config_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("config: expected a JSON object");
    for (const auto& item : doc.items()) {
        if (!kKnownKeys.contains(item.key())) {
            throw std::invalid_argument("config: unknown key '" + item.key() + "'");
        }
    }
    ExperimentConfig c;
    if (doc.contains("command")) c.command = read<std::string>(doc, "command");
    if (doc.contains("m")) c.m = read<std::size_t>(doc, "m");
    if (doc.contains("p")) c.p = read<std::size_t>(doc, "p");
    if (doc.contains("n")) c.n = read<std::size_t>(doc, "n");
    if (doc.contains("phi")) c.phi = read<double>(doc, "phi");
    if (doc.contains("snr_db")) c.snr_db = read<std::vector<double>>(doc, "snr_db");
    if (doc.contains("pfa")) c.pfa = read<double>(doc, "pfa");
    if (doc.contains("trials")) c.trials = read<std::size_t>(doc, "trials");
    if (doc.contains("seed")) c.seed = read<std::uint64_t>(doc, "seed");
    if (doc.contains("out")) c.out = read<std::string>(doc, "out");
    if (doc.contains("detectors")) {
        c.detectors.clear();
        for (const auto& name : read<std::vector<std::string>>(doc, "detectors")) {
            c.detectors.push_back(detector_from_string(name));
        }
    }
    if (doc.contains("beta_mode")) c.beta_mode = beta_mode_from_string(read<std::string>(doc, "beta_mode"));
    if (doc.contains("beta_phase") && !doc.at("beta_phase").is_null()) {
        c.beta_phase = read<double>(doc, "beta_phase");
    }
    if (doc.contains("n_values")) c.n_values = read<std::vector<std::size_t>>(doc, "n_values");
    if (doc.contains("threshold_points")) c.threshold_points = read<std::size_t>(doc, "threshold_points");
    if (doc.contains("phase_points")) c.phase_points = read<std::size_t>(doc, "phase_points");
    if (doc.contains("workers")) c.workers = read<unsigned>(doc, "workers");
    c.validate();
    return c;
}

std::size_t Table::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return i;
    }
    throw std::out_of_range("table: no column '" + name + "'");
}

double Table::number(std::size_t row, const std::string& column) const {
    return std::get<double>(rows.at(row).at(column_index(column)));
}

std::vector<double> Table::numbers(const std::string& column) const {
    const std::size_t idx = column_index(column);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(std::get<double>(r.at(idx)));
    return out;
}

std::optional<double> Table::summary_value(const std::string& key) const {
    for (const auto& [k, v] : summary) {
        if (k == key) return v;
    }
    return std::nullopt;
}

void Table::write_csv(std::ostream& os) const {
    os << "# " << metadata.dump() << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) os << ',';
            if (const auto* d = std::get_if<double>(&r[i])) {
                os << format_number(*d);
            } else {
                os << std::get<std::string>(r[i]);
            }
        }
        os << '\n';
    }
    for (const auto& [k, v] : summary) os << "# summary," << k << ',' << format_number(v) << '\n';
}

}  // namespace onebit::experiments
