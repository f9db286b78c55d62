// Copyright 2026 The pigeonsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pigeonsim/report_io.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "pigeonsim/errors.h"

namespace pigeonsim {

namespace {

std::string pair_name(const ParticlePair &p) {
    return std::to_string(p.i + 1) + "_" + std::to_string(p.j + 1);
}

nlohmann::json z_json(double z) {
    // JSON has no infinity.
    if (!std::isfinite(z)) {
        return nullptr;
    }
    return sig15(z);
}

}  // namespace

double sig15(double x) {
    if (!std::isfinite(x)) {
        return x;
    }
    return std::strtod(format15(x).c_str(), nullptr);
}

std::string format15(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", x);
    return buf;
}

nlohmann::json to_json(const StateVector &state) {
    nlohmann::json amps = nlohmann::json::array();
    for (const auto &a : state.amplitudes()) {
        amps.push_back({sig15(a.real()), sig15(a.imag())});
    }
    return {
        {"num_particles", state.shape().num_particles()},
        {"num_boxes", state.shape().num_boxes()},
        {"amplitudes", std::move(amps)},
    };
}

StateVector state_from_json(const nlohmann::json &j) {
    try {
        RegisterShape shape(j.at("num_particles").get<size_t>(), j.at("num_boxes").get<size_t>());
        std::vector<Complex> amps;
        for (const auto &pair : j.at("amplitudes")) {
            amps.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
        }
        return StateVector(shape, std::move(amps));
    } catch (const nlohmann::json::exception &e) {
        throw InvalidArgument(std::string("malformed state JSON: ") + e.what());
    }
}

nlohmann::json to_json(const Scenario &scenario) {
    nlohmann::json j = {
        {"num_particles", scenario.shape.num_particles()},
        {"num_boxes", scenario.shape.num_boxes()},
        {"preselection", "uniform"},
    };
    if (!scenario.outcome.empty()) {
        j["outcome"] = scenario.outcome;
    }
    return j;
}

nlohmann::json to_json(const CorrelationPattern &pattern) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto &p : pattern.pairs) {
        pairs.push_back({
            {"pair", {p.i + 1, p.j + 1}},
            {"verdict", to_string(p.verdict)},
            {"p_same", sig15(p.p_same)},
        });
    }
    return pairs;
}

nlohmann::json to_json(const GeneralReport &report) {
    return {
        {"num_particles", report.num_particles},
        {"num_boxes", report.num_boxes},
        {"pair_same_prob_max", sig15(report.pair_same_prob_max)},
        {"roots_of_unity_residual", sig15(report.roots_of_unity_residual)},
    };
}

nlohmann::json to_json(const OracleReport &report, const RunConfig &cfg) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto &c : report.cells) {
        nlohmann::json intermediate = nlohmann::json::array();
        for (size_t k = 0; k < c.key.intermediate.size(); k++) {
            intermediate.push_back(cfg.intermediate[k].labels()[c.key.intermediate[k]]);
        }
        cells.push_back({
            {"intermediate", std::move(intermediate)},
            {"final", c.key.final_outcome},
            {"selected", c.selected},
            {"count", c.count},
            {"empirical", sig15(c.empirical)},
            {"exact", sig15(c.exact)},
            {"z", z_json(c.z)},
            {"status", to_string(c.status)},
        });
    }
    return {
        {"rng", SplitMix64::kName},
        {"seed", cfg.seed},
        {"samples", report.samples},
        {"total_exact_probability", sig15(report.total_exact_probability)},
        {"selected_exact", sig15(report.selected_exact)},
        {"selected_empirical", sig15(report.selected_empirical)},
        {"max_abs_z", z_json(report.max_abs_z)},
        {"num_flagged", report.num_flagged},
        {"num_failed", report.num_failed},
        {"cells", std::move(cells)},
    };
}

nlohmann::json to_json(const ScanResult &scan) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &r : scan.rows) {
        nlohmann::json shifts = nlohmann::json::object();
        for (size_t p = 0; p < scan.pairs.size(); p++) {
            shifts[pair_name(scan.pairs[p])] = sig15(r.shifts[p]);
        }
        rows.push_back({{"lambda", sig15(r.lambda)}, {"shifts", std::move(shifts)}, {"strong_coupling", r.strong_coupling}});
    }
    nlohmann::json fits = nlohmann::json::array();
    for (const auto &f : scan.fits) {
        fits.push_back({
            {"pair", {f.pair.i + 1, f.pair.j + 1}},
            {"slope", f.slope ? nlohmann::json(sig15(*f.slope)) : nlohmann::json(nullptr)},
            {"points_used", f.points_used},
            {"points_excluded", f.points_excluded},
            {"verdict", deflection_verdict(f.slope)},
        });
    }
    auto slope = scan.slope();
    return {
        {"sigma", sig15(scan.sigma)},
        {"postselected", scan.postselected},
        {"rows", std::move(rows)},
        {"fits", std::move(fits)},
        {"slope", slope ? nlohmann::json(sig15(*slope)) : nlohmann::json(nullptr)},
        {"verdict", deflection_verdict(slope)},
    };
}

std::string counts_csv(const RunConfig &cfg, const CountsTable &table) {
    std::stringstream out;
    size_t k_meas = cfg.intermediate.size();
    size_t n = cfg.scenario.shape.num_particles();
    for (size_t k = 0; k < k_meas; k++) {
        out << "meas_" << k + 1 << ",";
    }
    for (size_t p = 0; p < n; p++) {
        out << "final_" << p + 1 << ",";
    }
    out << "selected,count\n";
    for (const auto &[key, count] : table.cells()) {
        for (size_t k = 0; k < k_meas; k++) {
            out << cfg.intermediate[k].labels()[key.intermediate[k]] << ",";
        }
        for (size_t d : key.final_outcome) {
            out << d << ",";
        }
        out << (is_selected(cfg, key.final_outcome) ? 1 : 0) << "," << count << "\n";
    }
    return out.str();
}

std::string scan_csv(const ScanResult &scan) {
    std::stringstream out;
    out << "lambda";
    for (const auto &p : scan.pairs) {
        out << ",shift_" << pair_name(p);
    }
    out << ",strong_coupling\n";
    for (const auto &r : scan.rows) {
        out << format15(r.lambda);
        for (double s : r.shifts) {
            out << "," << format15(s);
        }
        out << "," << (r.strong_coupling ? 1 : 0) << "\n";
    }
    return out.str();
}

}  // namespace pigeonsim
