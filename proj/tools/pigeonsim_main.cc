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

// pigeonsim command-line front end.
//
// Exit codes: 0 success, 2 invalid input, 3 impossible post-selection, 4 I/O error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pigeonsim/errors.h"
#include "pigeonsim/montecarlo.h"
#include "pigeonsim/pigeonhole.h"
#include "pigeonsim/prepost.h"
#include "pigeonsim/report_io.h"
#include "pigeonsim/weakcoupling.h"

using namespace pigeonsim;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitImpossible = 3;
constexpr int kExitIo = 4;

constexpr size_t kMaxPatternOutcomes = 243;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Params {
    size_t n = 3;
    size_t m = 2;
    std::string outcome;
    uint64_t samples = 100000;
    uint64_t seed = 42;
    unsigned threads = 1;
    std::string chain;
    std::string lambdas = "0.001,0.002,0.005,0.01";
    double sigma = 1.0;
    std::string pair;
    bool no_postselect = false;
    std::string format = "json";
    std::string out;
    std::string config;
    double lambda = 0.05;
    double xmin = -5;
    double xmax = 5;
    size_t points = 201;
    bool shape_from_config = false;
};

std::vector<std::string> split(const std::string &text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, sep)) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

size_t parse_size(const std::string &s, const char *what) {
    try {
        size_t used = 0;
        long long v = std::stoll(s, &used);
        if (used != s.size() || v < 0) {
            throw std::invalid_argument(s);
        }
        return static_cast<size_t>(v);
    } catch (const std::exception &) {
        throw InvalidArgument(std::string("bad ") + what + ": '" + s + "'");
    }
}

double parse_double(const std::string &s, const char *what) {
    try {
        size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) {
            throw std::invalid_argument(s);
        }
        return v;
    } catch (const std::exception &) {
        throw InvalidArgument(std::string("bad ") + what + ": '" + s + "'");
    }
}

std::vector<size_t> parse_outcome(const Params &p) {
    if (p.outcome.empty()) {
        return std::vector<size_t>(p.n, 0);
    }
    std::vector<size_t> out;
    for (const auto &s : split(p.outcome, ',')) {
        out.push_back(parse_size(s, "outcome"));
    }
    return out;
}

// 1-based "i,j" -> 0-based pair.
ParticlePair parse_pair(const std::string &text, size_t n) {
    auto parts = split(text, text.find('-') != std::string::npos ? '-' : ',');
    if (parts.size() != 2) {
        throw InvalidArgument("bad pair '" + text + "': expected i,j");
    }
    size_t i = parse_size(parts[0], "pair");
    size_t j = parse_size(parts[1], "pair");
    if (i < 1 || j < 1 || i > n || j > n || i == j) {
        throw InvalidArgument("bad pair '" + text + "': need two distinct particles in 1.." + std::to_string(n));
    }
    return {std::min(i, j) - 1, std::max(i, j) - 1};
}

std::vector<ParticlePair> parse_chain(const Params &p) {
    std::vector<ParticlePair> out;
    for (const auto &item : split(p.chain, ',')) {
        out.push_back(parse_pair(item, p.n));
    }
    return out;
}

std::vector<double> parse_lambdas(const Params &p) {
    std::vector<double> out;
    for (const auto &s : split(p.lambdas, ',')) {
        out.push_back(parse_double(s, "lambda"));
    }
    return out;
}

std::string join_json_list(const json &v, const char *what, bool pairs) {
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (!v.is_array()) {
        throw InvalidArgument(std::string("config: '") + what + "' must be a string or an array");
    }
    std::string out;
    for (const auto &item : v) {
        if (!out.empty()) {
            out += ",";
        }
        if (pairs) {
            if (!item.is_array() || item.size() != 2) {
                throw InvalidArgument(std::string("config: '") + what + "' entries must be [i, j]");
            }
            out += std::to_string(item[0].get<size_t>()) + "-" + std::to_string(item[1].get<size_t>());
        } else if (item.is_number_float()) {
            out += format15(item.get<double>());
        } else {
            out += item.dump();
        }
    }
    return out;
}

void load_config(const std::string &path, Params &p, const CLI::App &cmd) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read config file '" + path + "'");
    }
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::exception &e) {
        throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!cfg.is_object()) {
        throw InvalidArgument("config must be a single JSON object");
    }
    auto given = [&](const char *flag) {
        try {
            return cmd.get_option(flag)->count() > 0;
        } catch (const CLI::OptionNotFound &) {
            return false;
        }
    };
    try {
        for (const auto &[key, value] : cfg.items()) {
            std::string flag = "--" + key;
            for (auto &c : flag) {
                c = c == '_' ? '-' : c;
            }
            if (given(flag.c_str())) {
                continue;
            }
            if (key == "n") {
                p.n = value.get<size_t>();
                p.shape_from_config = true;
            } else if (key == "m") {
                p.m = value.get<size_t>();
                p.shape_from_config = true;
            } else if (key == "outcome") {
                p.outcome = join_json_list(value, "outcome", false);
            } else if (key == "samples") {
                p.samples = value.get<uint64_t>();
            } else if (key == "seed") {
                p.seed = value.get<uint64_t>();
            } else if (key == "threads") {
                p.threads = value.get<unsigned>();
            } else if (key == "chain") {
                p.chain = join_json_list(value, "chain", true);
            } else if (key == "lambdas") {
                p.lambdas = join_json_list(value, "lambdas", false);
            } else if (key == "sigma") {
                p.sigma = value.get<double>();
            } else if (key == "pair") {
                p.pair = join_json_list(value, "pair", false);
            } else if (key == "no_postselect") {
                p.no_postselect = value.get<bool>();
            } else if (key == "format") {
                p.format = value.get<std::string>();
            } else if (key == "out") {
                p.out = value.get<std::string>();
            } else if (key == "lambda") {
                p.lambda = value.get<double>();
            } else if (key == "xmin") {
                p.xmin = value.get<double>();
            } else if (key == "xmax") {
                p.xmax = value.get<double>();
            } else if (key == "points") {
                p.points = value.get<size_t>();
            } else if (key == "rng") {
                if (value.get<std::string>() != SplitMix64::kName) {
                    throw InvalidArgument("config: unsupported rng '" + value.get<std::string>() + "'");
                }
            } else {
                throw InvalidArgument("config: unknown key '" + key + "'");
            }
        }
    } catch (const json::exception &e) {
        throw InvalidArgument(std::string("config has a value of the wrong type: ") + e.what());
    }
}

void write_text(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << text;
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
}

void emit(const Params &p, const std::string &text) {
    if (p.out.empty()) {
        std::cout << text;
    } else {
        write_text(p.out, text);
    }
}

std::string dump(const json &j) {
    return j.dump(2) + "\n";
}

Scenario scenario_from(const Params &p) {
    return build_scenario(p.n, p.m, parse_outcome(p));
}

int cmd_pigeonhole(const Params &p) {
    Scenario s = scenario_from(p);
    CorrelationPattern pattern = correlation_pattern(s);
    if (p.format == "csv") {
        std::stringstream out;
        out << "pair_i,pair_j,verdict,p_same\n";
        for (const auto &r : pattern.pairs) {
            out << r.i + 1 << "," << r.j + 1 << "," << to_string(r.verdict) << "," << format15(r.p_same) << "\n";
        }
        emit(p, out.str());
        return kExitOk;
    }
    json j = {
        {"command", "pigeonhole"},
        {"scenario", to_json(s)},
        {"pattern", to_json(pattern)},
        {"first_order_residual", sig15(first_order_check(s.pre, s.post))},
        {"roots_of_unity_residual", sig15(roots_of_unity_residual(p.m))},
    };
    emit(p, dump(j));
    return kExitOk;
}

int cmd_patterns(const Params &p) {
    RegisterShape shape(p.n, p.m);
    if (p.n < 2) {
        throw InvalidArgument("need at least 2 particles");
    }
    if (shape.dimension() > kMaxPatternOutcomes) {
        throw InvalidArgument("patterns enumerates at most 243 final outcomes (M^N <= 243)");
    }
    json outcomes = json::array();
    std::stringstream csv;
    csv << "outcome,pair_i,pair_j,verdict,p_same\n";
    for (size_t flat = 0; flat < shape.dimension(); flat++) {
        auto outcome = shape.digits(flat);
        Scenario s = build_scenario(p.n, p.m, outcome);
        std::string name;
        for (size_t d : outcome) {
            name += (name.empty() ? "" : "-") + std::to_string(d);
        }
        try {
            auto pattern = correlation_pattern(s);
            outcomes.push_back({{"outcome", outcome}, {"possible", true}, {"pattern", to_json(pattern)}});
            for (const auto &r : pattern.pairs) {
                csv << name << "," << r.i + 1 << "," << r.j + 1 << "," << to_string(r.verdict) << ","
                    << format15(r.p_same) << "\n";
            }
        } catch (const ImpossiblePostselection &) {
            outcomes.push_back({{"outcome", outcome}, {"possible", false}, {"pattern", json::array()}});
        }
    }
    if (p.format == "csv") {
        emit(p, csv.str());
    } else {
        emit(p, dump({{"command", "patterns"}, {"num_particles", p.n}, {"num_boxes", p.m}, {"outcomes", outcomes}}));
    }
    return kExitOk;
}

int cmd_general(const Params &p, bool sweep) {
    std::vector<GeneralReport> reports;
    if (sweep) {
        for (size_t n = 3; n <= 6; n++) {
            for (size_t m = 2; m < n; m++) {
                double dim = std::pow(static_cast<double>(m), static_cast<double>(n));
                if (dim <= static_cast<double>(max_dimension())) {
                    reports.push_back(verify_general(n, m));
                }
            }
        }
    } else {
        reports.push_back(verify_general(p.n, p.m));
    }
    double worst_p = 0, worst_r = 0;
    json list = json::array();
    std::stringstream csv;
    csv << "num_particles,num_boxes,pair_same_prob_max,roots_of_unity_residual\n";
    for (const auto &r : reports) {
        worst_p = std::max(worst_p, r.pair_same_prob_max);
        worst_r = std::max(worst_r, r.roots_of_unity_residual);
        list.push_back(to_json(r));
        csv << r.num_particles << "," << r.num_boxes << "," << format15(r.pair_same_prob_max) << ","
            << format15(r.roots_of_unity_residual) << "\n";
    }
    if (p.format == "csv") {
        emit(p, csv.str());
    } else {
        emit(p, dump({
                    {"command", "general"},
                    {"reports", list},
                    {"max_pair_same_prob", sig15(worst_p)},
                    {"max_roots_of_unity_residual", sig15(worst_r)},
                }));
    }
    return kExitOk;
}

RunConfig run_config_from(const Params &p) {
    RunConfig cfg{scenario_from(p), {}, p.samples, p.seed, p.threads};
    for (const auto &pair : parse_chain(p)) {
        cfg.intermediate.push_back(MeasurementSpec::same_diff(cfg.scenario.shape, pair.i, pair.j));
    }
    return cfg;
}

int cmd_montecarlo(const Params &p) {
    RunConfig cfg = run_config_from(p);
    CountsTable table = run_ensemble(cfg);
    OracleReport report = compare_to_oracle(cfg, table);
    std::string csv = counts_csv(cfg, table);
    json oracle = to_json(report, cfg);
    oracle["command"] = "montecarlo";
    json chain = json::array();
    for (const auto &pair : parse_chain(p)) {
        chain.push_back({pair.i + 1, pair.j + 1});
    }
    oracle["chain"] = chain;
    oracle["scenario"] = to_json(cfg.scenario);
    if (p.format == "csv") {
        emit(p, csv);
        if (!p.out.empty()) {
            write_text(p.out + ".oracle.json", dump(oracle));
        }
    } else {
        oracle["counts_csv"] = csv;
        emit(p, dump(oracle));
    }
    return kExitOk;
}

int cmd_deflection(const Params &p) {
    Scenario s = scenario_from(p);
    auto lambdas = parse_lambdas(p);
    std::optional<StateVector> post;
    if (!p.no_postselect) {
        post = s.post;
    }
    ScanResult scan = deflection_scan(s.pre, post, lambdas, p.sigma);
    json j = to_json(scan);
    j["command"] = "deflection";
    j["scenario"] = to_json(s);
    j["first_order_residual"] = sig15(first_order_check(s.pre, s.post));
    if (!p.pair.empty()) {
        ParticlePair pair = parse_pair(p.pair, p.n);
        size_t idx = 0;
        while (scan.pairs[idx].i != pair.i || scan.pairs[idx].j != pair.j) {
            idx++;
        }
        const auto &fit = scan.fits[idx];
        const ScanRow *smallest = &scan.rows.front();
        for (const auto &r : scan.rows) {
            if (r.lambda < smallest->lambda) {
                smallest = &r;
            }
        }
        json sel = {
            {"pair", {pair.i + 1, pair.j + 1}},
            {"slope", fit.slope ? json(sig15(*fit.slope)) : json(nullptr)},
            {"verdict", deflection_verdict(fit.slope)},
            {"shift_over_lambda", sig15(smallest->shifts[idx] / smallest->lambda)},
        };
        if (post) {
            auto projector = ProjectorSpec::same_pair(s.shape, pair.i, pair.j);
            Complex wv = weak_value(s.ensemble(), projector);
            sel["weak_value"] = {sig15(wv.real()), sig15(wv.imag())};
        }
        j["selected_pair"] = sel;
    }
    if (p.format == "csv") {
        emit(p, scan_csv(scan));
        if (!p.out.empty()) {
            write_text(p.out + ".slope.json", dump(j));
        }
    } else {
        emit(p, dump(j));
    }
    return kExitOk;
}

int cmd_spectra(const Params &p) {
    Scenario s = scenario_from(p);
    CoupledState cs = evolve(s.pre, p.lambda, p.sigma);
    std::optional<StateVector> post;
    if (!p.no_postselect) {
        post = s.post;
    }
    PointerMarginals marginals = post ? postselect(cs, *post) : unconditioned(cs);
    json shifts = json::object();
    json curves = json::array();
    std::vector<std::vector<std::pair<double, double>>> sampled;
    for (size_t k = 0; k < cs.pairs().size(); k++) {
        const auto &pair = cs.pairs()[k];
        std::string name = std::to_string(pair.i + 1) + "_" + std::to_string(pair.j + 1);
        shifts[name] = sig15(marginals.pairs[k].mean_shift);
        sampled.push_back(pointer_density(cs, post, k, p.xmin, p.xmax, p.points));
        json xs = json::array(), ds = json::array();
        for (const auto &[x, d] : sampled.back()) {
            xs.push_back(sig15(x));
            ds.push_back(sig15(d));
        }
        curves.push_back({{"pair", {pair.i + 1, pair.j + 1}}, {"x", xs}, {"density", ds}});
    }
    if (p.format == "csv") {
        std::stringstream out;
        out << "x";
        for (const auto &pair : cs.pairs()) {
            out << ",density_" << pair.i + 1 << "_" << pair.j + 1;
        }
        out << "\n";
        for (size_t k = 0; k < p.points; k++) {
            out << format15(sampled[0][k].first);
            for (const auto &curve : sampled) {
                out << "," << format15(curve[k].second);
            }
            out << "\n";
        }
        emit(p, out.str());
        return kExitOk;
    }
    emit(p, dump({
                {"command", "spectra"},
                {"scenario", to_json(s)},
                {"lambda", sig15(p.lambda)},
                {"sigma", sig15(p.sigma)},
                {"postselected", post.has_value()},
                {"success_probability", sig15(marginals.success_probability)},
                {"line_shifts", shifts},
                {"curves", curves},
            }));
    return kExitOk;
}

void add_common(CLI::App *cmd, Params &p) {
    cmd->add_option("--n", p.n, "number of particles");
    cmd->add_option("--m", p.m, "number of boxes");
    cmd->add_option("--outcome", p.outcome, "final-basis index per particle, e.g. 1,0,0 (default all 0)");
    cmd->add_option("--format", p.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", p.out, "output path (default stdout)");
    cmd->add_option("--config", p.config, "JSON config file; flags override it");
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"pigeonsim: pre- and post-selected ensembles and the quantum pigeonhole effect"};
    app.require_subcommand(1);
    Params p;

    auto *pigeonhole = app.add_subcommand("pigeonhole", "pair correlation pattern for one post-selection");
    add_common(pigeonhole, p);

    auto *patterns = app.add_subcommand("patterns", "correlation patterns for every final outcome");
    add_common(patterns, p);

    auto *general = app.add_subcommand("general", "N particles in M boxes; sweeps 2 <= M < N <= 6 without --n/--m");
    add_common(general, p);

    auto *montecarlo = app.add_subcommand("montecarlo", "sampled runs with sequential same/different measurements");
    add_common(montecarlo, p);
    montecarlo->add_option("--samples", p.samples, "number of runs");
    montecarlo->add_option("--seed", p.seed, "64-bit seed");
    montecarlo->add_option("--threads", p.threads, "worker threads (results do not depend on it)");
    montecarlo->add_option("--chain", p.chain, "intermediate pair measurements, e.g. 1-2,1-3");

    auto *deflection = app.add_subcommand("deflection", "pointer shift versus coupling strength");
    add_common(deflection, p);
    deflection->add_option("--lambdas", p.lambdas, "comma-separated coupling strengths");
    deflection->add_option("--sigma", p.sigma, "pointer width");
    deflection->add_option("--pair", p.pair, "report one pair, e.g. 1,2");
    deflection->add_flag("--no-postselect", p.no_postselect, "keep every run");

    auto *spectra = app.add_subcommand("spectra", "pointer densities read as spectral lines");
    add_common(spectra, p);
    spectra->add_option("--lambda", p.lambda, "coupling strength");
    spectra->add_option("--sigma", p.sigma, "line width");
    spectra->add_option("--xmin", p.xmin, "density range start");
    spectra->add_option("--xmax", p.xmax, "density range end");
    spectra->add_option("--points", p.points, "density samples");
    spectra->add_flag("--no-postselect", p.no_postselect, "keep every run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        CLI::App *cmd = app.get_subcommands().front();
        if (!p.config.empty()) {
            load_config(p.config, p, *cmd);
        }
        if (cmd == pigeonhole) {
            return cmd_pigeonhole(p);
        }
        if (cmd == patterns) {
            return cmd_patterns(p);
        }
        if (cmd == general) {
            bool sweep = cmd->get_option("--n")->count() == 0 && cmd->get_option("--m")->count() == 0 &&
                         !p.shape_from_config;
            return cmd_general(p, sweep);
        }
        if (cmd == montecarlo) {
            return cmd_montecarlo(p);
        }
        if (cmd == deflection) {
            return cmd_deflection(p);
        }
        return cmd_spectra(p);
    } catch (const ImpossiblePostselection &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitImpossible;
    } catch (const IoError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
}
