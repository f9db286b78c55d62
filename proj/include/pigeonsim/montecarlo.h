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

#ifndef PIGEONSIM_MONTECARLO_H
#define PIGEONSIM_MONTECARLO_H

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pigeonsim/pigeonhole.h"
#include "pigeonsim/prepost.h"

namespace pigeonsim {

/// SplitMix64. Every trajectory gets its own stream derived from (seed, trajectory index), so
/// trajectories can be run in any order or on any number of workers with identical results.
class SplitMix64 {
   public:
    static constexpr const char *kName = "splitmix64";

    explicit SplitMix64(uint64_t state) : state_(state) {
    }
    static SplitMix64 stream(uint64_t seed, uint64_t index);

    uint64_t next();
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();

   private:
    uint64_t state_;
};

struct RunConfig {
    Scenario scenario;
    std::vector<MeasurementSpec> intermediate;
    uint64_t samples = 1;
    uint64_t seed = 0;
    /// Worker threads; 0 or 1 runs serially. Does not affect results.
    unsigned threads = 1;
};

/// Intermediate outcome per measurement followed by the final per-particle basis index.
struct OutcomeKey {
    std::vector<size_t> intermediate;
    std::vector<size_t> final_outcome;

    auto operator<=>(const OutcomeKey &) const = default;
};

struct RunRecord {
    std::vector<size_t> intermediate_outcomes;
    std::vector<size_t> final_outcome;
    bool selected;
};

class CountsTable {
   public:
    void add(const OutcomeKey &key, uint64_t count = 1);
    void merge(const CountsTable &other);

    uint64_t total() const {
        return total_;
    }
    uint64_t count(const OutcomeKey &key) const;
    const std::map<OutcomeKey, uint64_t> &cells() const {
        return cells_;
    }

    bool operator==(const CountsTable &other) const = default;

   private:
    std::map<OutcomeKey, uint64_t> cells_;
    uint64_t total_ = 0;
};

/// Exact outcome tree of a RunConfig: the collapsed state after every reachable prefix of intermediate
/// outcomes and the final-readout distribution at each leaf. Built once, then sampled per trajectory.
class TrajectorySampler {
   public:
    explicit TrajectorySampler(const RunConfig &cfg);

    /// One run: sequential Born-rule collapses, then a product fourier-basis readout.
    RunRecord sample(uint64_t index) const;

   private:
    struct Node {
        // Cumulative outcome probabilities of the next measurement, or of the final readout at a leaf.
        std::vector<double> cumulative;
        std::vector<size_t> children;
    };

    size_t build(const StateVector &state, size_t level);
    static size_t pick(const std::vector<double> &cumulative, double u);

    const RunConfig &cfg_;
    std::vector<Node> nodes_;
    std::vector<StateVector> readout_basis_;
};

CountsTable run_ensemble(const RunConfig &cfg);

/// True when the final outcome equals the scenario's post-selection.
bool is_selected(const RunConfig &cfg, std::span<const size_t> final_outcome);

/// Counts of trajectories matching `intermediate` (use SIZE_MAX as a wildcard), optionally restricted to selected runs.
uint64_t count_matching(const RunConfig &cfg, const CountsTable &table, std::span<const size_t> intermediate, bool selected_only);

/// Exact probability of every (intermediate sequence, final outcome) cell, enumerated through chain_amplitude.
std::map<OutcomeKey, double> exact_cell_probabilities(const RunConfig &cfg);

enum class ZStatus { Ok, Flagged, Failed };
std::string to_string(ZStatus status);

struct OracleCell {
    OutcomeKey key;
    bool selected;
    uint64_t count;
    double empirical;
    double exact;
    double z;
    ZStatus status;
};

struct OracleReport {
    uint64_t samples;
    double total_exact_probability;
    double selected_exact;
    double selected_empirical;
    double max_abs_z;
    size_t num_flagged;
    size_t num_failed;
    std::vector<OracleCell> cells;
};

OracleReport compare_to_oracle(const RunConfig &cfg, const CountsTable &table);
OracleReport compare_to_oracle(const RunConfig &cfg);

}  // namespace pigeonsim

#endif
