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

#include "pigeonsim/montecarlo.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "pigeonsim/errors.h"
#include "pigeonsim/tolerances.h"

namespace pigeonsim {

namespace {

constexpr size_t kMaxOracleCells = size_t{1} << 16;
constexpr size_t kMaxTreeNodes = size_t{1} << 16;
constexpr size_t kNoChild = std::numeric_limits<size_t>::max();

// Probabilities below the square of the orthogonality threshold are exact zeros up to round-off.
constexpr double kZeroProbability = kOrthogonalThreshold * kOrthogonalThreshold;

double clean_probability(double p) {
    return p <= kZeroProbability ? 0.0 : p;
}

// Amplitudes of `state` in the product basis sum_p readout[m_p].
std::vector<Complex> readout_amplitudes(const StateVector &state, const std::vector<StateVector> &readout) {
    const RegisterShape &shape = state.shape();
    size_t m = shape.num_boxes();
    std::vector<Complex> amps(state.amplitudes().begin(), state.amplitudes().end());
    std::vector<Complex> column(m);
    for (size_t p = 0; p < shape.num_particles(); p++) {
        size_t stride = shape.stride(p);
        for (size_t base = 0; base < amps.size(); base++) {
            if (shape.digit(base, p) != 0) {
                continue;
            }
            for (size_t k = 0; k < m; k++) {
                column[k] = amps[base + k * stride];
            }
            for (size_t out = 0; out < m; out++) {
                Complex acc = 0;
                for (size_t k = 0; k < m; k++) {
                    acc += std::conj(readout[out][k]) * column[k];
                }
                amps[base + out * stride] = acc;
            }
        }
    }
    return amps;
}

std::vector<double> cumulative_of(const std::vector<double> &probs) {
    std::vector<double> cum(probs.size());
    double acc = 0;
    for (size_t k = 0; k < probs.size(); k++) {
        acc += probs[k];
        cum[k] = acc;
    }
    return cum;
}

}  // namespace

SplitMix64 SplitMix64::stream(uint64_t seed, uint64_t index) {
    SplitMix64 mixer(seed);
    uint64_t a = mixer.next();
    SplitMix64 keyed(a ^ (index * 0xD1B54A32D192ED03ull));
    return SplitMix64(keyed.next());
}

uint64_t SplitMix64::next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

void CountsTable::add(const OutcomeKey &key, uint64_t count) {
    cells_[key] += count;
    total_ += count;
}

void CountsTable::merge(const CountsTable &other) {
    for (const auto &[key, count] : other.cells_) {
        add(key, count);
    }
}

uint64_t CountsTable::count(const OutcomeKey &key) const {
    auto it = cells_.find(key);
    return it == cells_.end() ? 0 : it->second;
}

TrajectorySampler::TrajectorySampler(const RunConfig &cfg)
    : cfg_(cfg), readout_basis_(fourier_basis(cfg.scenario.shape.num_boxes())) {
    for (const auto &m : cfg.intermediate) {
        require_same_shape(cfg.scenario.shape, m.shape(), "RunConfig");
    }
    if (cfg.scenario.outcome.empty()) {
        throw InvalidArgument("Monte Carlo runs need a scenario with a fourier-basis post-selection outcome");
    }
    build(cfg.scenario.pre.normalized(), 0);
}

size_t TrajectorySampler::build(const StateVector &state, size_t level) {
    if (nodes_.size() >= kMaxTreeNodes) {
        throw DimensionCapExceeded("intermediate measurement tree too large");
    }
    size_t id = nodes_.size();
    nodes_.emplace_back();
    std::vector<double> probs;
    std::vector<size_t> children;
    if (level == cfg_.intermediate.size()) {
        for (const auto &a : readout_amplitudes(state, readout_basis_)) {
            probs.push_back(clean_probability(std::norm(a)));
        }
    } else {
        for (const auto &p : cfg_.intermediate[level].projectors()) {
            StateVector projected = apply(p, state);
            double prob = clean_probability(projected.norm2());
            probs.push_back(prob);
            children.push_back(prob > 0 ? build(projected.scaled(1.0 / std::sqrt(prob)), level + 1) : kNoChild);
        }
    }
    nodes_[id].cumulative = cumulative_of(probs);
    nodes_[id].children = std::move(children);
    return id;
}

size_t TrajectorySampler::pick(const std::vector<double> &cumulative, double u) {
    double x = u * cumulative.back();
    for (size_t k = 0; k < cumulative.size(); k++) {
        if (x < cumulative[k]) {
            return k;
        }
    }
    // Round-off at the top end: last outcome with nonzero weight.
    for (size_t k = cumulative.size(); k-- > 0;) {
        if (cumulative[k] > (k ? cumulative[k - 1] : 0.0)) {
            return k;
        }
    }
    return 0;
}

RunRecord TrajectorySampler::sample(uint64_t index) const {
    SplitMix64 rng = SplitMix64::stream(cfg_.seed, index);
    RunRecord record;
    size_t node = 0;
    for (size_t level = 0; level < cfg_.intermediate.size(); level++) {
        size_t outcome = pick(nodes_[node].cumulative, rng.uniform());
        record.intermediate_outcomes.push_back(outcome);
        node = nodes_[node].children[outcome];
    }
    size_t flat = pick(nodes_[node].cumulative, rng.uniform());
    record.final_outcome = cfg_.scenario.shape.digits(flat);
    record.selected = record.final_outcome == cfg_.scenario.outcome;
    return record;
}

CountsTable run_ensemble(const RunConfig &cfg) {
    if (cfg.samples < 1) {
        throw InvalidArgument("samples must be at least 1");
    }
    TrajectorySampler sampler(cfg);
    auto run_range = [&](uint64_t begin, uint64_t end, CountsTable &out) {
        for (uint64_t k = begin; k < end; k++) {
            RunRecord r = sampler.sample(k);
            out.add(OutcomeKey{std::move(r.intermediate_outcomes), std::move(r.final_outcome)});
        }
    };

    unsigned workers = std::max(1u, cfg.threads);
    if (workers == 1 || cfg.samples < 2 * workers) {
        CountsTable table;
        run_range(0, cfg.samples, table);
        return table;
    }
    std::vector<CountsTable> partial(workers);
    std::vector<std::thread> pool;
    uint64_t chunk = (cfg.samples + workers - 1) / workers;
    for (unsigned w = 0; w < workers; w++) {
        uint64_t begin = std::min<uint64_t>(cfg.samples, w * chunk);
        uint64_t end = std::min<uint64_t>(cfg.samples, begin + chunk);
        pool.emplace_back(run_range, begin, end, std::ref(partial[w]));
    }
    for (auto &t : pool) {
        t.join();
    }
    CountsTable table;
    for (const auto &p : partial) {
        table.merge(p);
    }
    return table;
}

bool is_selected(const RunConfig &cfg, std::span<const size_t> final_outcome) {
    return std::equal(final_outcome.begin(), final_outcome.end(), cfg.scenario.outcome.begin(), cfg.scenario.outcome.end());
}

uint64_t count_matching(
    const RunConfig &cfg, const CountsTable &table, std::span<const size_t> intermediate, bool selected_only) {
    uint64_t total = 0;
    for (const auto &[key, count] : table.cells()) {
        if (selected_only && !is_selected(cfg, key.final_outcome)) {
            continue;
        }
        bool match = key.intermediate.size() == intermediate.size();
        for (size_t k = 0; match && k < intermediate.size(); k++) {
            match = intermediate[k] == std::numeric_limits<size_t>::max() || intermediate[k] == key.intermediate[k];
        }
        if (match) {
            total += count;
        }
    }
    return total;
}

std::map<OutcomeKey, double> exact_cell_probabilities(const RunConfig &cfg) {
    const RegisterShape &shape = cfg.scenario.shape;
    size_t cells = shape.dimension();
    for (const auto &m : cfg.intermediate) {
        require_same_shape(shape, m.shape(), "RunConfig");
        if (cells > kMaxOracleCells / m.size()) {
            throw DimensionCapExceeded("too many outcome cells to enumerate");
        }
        cells *= m.size();
    }
    if (cells > kMaxOracleCells) {
        throw DimensionCapExceeded("too many outcome cells to enumerate");
    }

    auto basis = fourier_basis(shape.num_boxes());
    std::vector<StateVector> finals;
    for (size_t flat = 0; flat < shape.dimension(); flat++) {
        std::vector<StateVector> factors;
        for (size_t d : shape.digits(flat)) {
            factors.push_back(basis[d]);
        }
        finals.push_back(tensor(factors));
    }

    std::map<OutcomeKey, double> out;
    std::vector<size_t> seq(cfg.intermediate.size(), 0);
    while (true) {
        std::vector<ProjectorSpec> chain;
        for (size_t k = 0; k < seq.size(); k++) {
            chain.push_back(cfg.intermediate[k].projectors()[seq[k]]);
        }
        for (size_t flat = 0; flat < finals.size(); flat++) {
            ChainResult r = chain_amplitude(cfg.scenario.pre, chain, finals[flat]);
            out[OutcomeKey{seq, shape.digits(flat)}] = clean_probability(r.path_probability);
        }
        size_t level = seq.size();
        while (level > 0) {
            level--;
            if (++seq[level] < cfg.intermediate[level].size()) {
                break;
            }
            seq[level] = 0;
            if (level == 0) {
                return out;
            }
        }
        if (seq.empty()) {
            return out;
        }
    }
}

std::string to_string(ZStatus status) {
    switch (status) {
        case ZStatus::Ok:
            return "ok";
        case ZStatus::Flagged:
            return "flagged";
        default:
            return "failed";
    }
}

OracleReport compare_to_oracle(const RunConfig &cfg, const CountsTable &table) {
    auto exact = exact_cell_probabilities(cfg);
    for (const auto &[key, count] : table.cells()) {
        if (!exact.contains(key)) {
            throw InvalidArgument("counts table has a cell outside the configured outcome space");
        }
    }
    OracleReport report{};
    report.samples = table.total();
    double n = static_cast<double>(table.total());
    uint64_t selected_count = 0;
    for (const auto &[key, p] : exact) {
        OracleCell cell{};
        cell.key = key;
        cell.selected = is_selected(cfg, key.final_outcome);
        cell.count = table.count(key);
        cell.empirical = n > 0 ? static_cast<double>(cell.count) / n : 0.0;
        cell.exact = p;
        double variance = n * p * (1 - p);
        if (variance > 0) {
            cell.z = (static_cast<double>(cell.count) - n * p) / std::sqrt(variance);
        } else {
            // Deterministic cell: any deviation is impossible under the model.
            cell.z = static_cast<double>(cell.count) == n * p ? 0.0 : std::numeric_limits<double>::infinity();
        }
        double az = std::abs(cell.z);
        cell.status = az <= kZFlag ? ZStatus::Ok : (az <= kZFail ? ZStatus::Flagged : ZStatus::Failed);
        report.num_flagged += cell.status == ZStatus::Flagged;
        report.num_failed += cell.status == ZStatus::Failed;
        report.max_abs_z = std::max(report.max_abs_z, az);
        report.total_exact_probability += p;
        if (cell.selected) {
            report.selected_exact += p;
            selected_count += cell.count;
        }
        report.cells.push_back(std::move(cell));
    }
    report.selected_empirical = n > 0 ? static_cast<double>(selected_count) / n : 0.0;
    return report;
}

OracleReport compare_to_oracle(const RunConfig &cfg) {
    return compare_to_oracle(cfg, run_ensemble(cfg));
}

}  // namespace pigeonsim
