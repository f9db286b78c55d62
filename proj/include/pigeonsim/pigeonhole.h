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

#ifndef PIGEONSIM_PIGEONHOLE_H
#define PIGEONSIM_PIGEONHOLE_H

#include <string>
#include <vector>

#include "pigeonsim/prepost.h"
#include "pigeonsim/qstate.h"

namespace pigeonsim {

/// Product pre-selection and product post-selection over an N x M register.
struct Scenario {
    RegisterShape shape;
    std::vector<StateVector> pre_factors;
    std::vector<StateVector> post_factors;
    StateVector pre;
    StateVector post;
    /// Index into fourier_basis(M) per particle; empty for scenarios built from explicit factors.
    std::vector<size_t> outcome;

    /// Arbitrary normalized single-particle factors.
    static Scenario from_factors(std::vector<StateVector> pre_factors, std::vector<StateVector> post_factors);

    PrePostEnsemble ensemble() const {
        return PrePostEnsemble(pre, post);
    }
};

/// Pre = |+>^N with |+> the uniform superposition over M boxes; post = tensor of fourier_basis(M)[outcome_p].
Scenario build_scenario(size_t num_particles, size_t num_boxes, const std::vector<size_t> &outcome);

/// ABL probability of SAME for the two-outcome measurement {same(i,j), diff(i,j)}.
double pair_same_probability(const Scenario &scenario, size_t i, size_t j);

enum class PairVerdict { Same, Different, Undetermined };

std::string to_string(PairVerdict verdict);

/// SAME for p >= 1 - 1e-10, DIFFERENT for p <= 1e-10, UNDETERMINED otherwise.
PairVerdict classify_pair(double p_same);

struct PairResult {
    size_t i;
    size_t j;
    PairVerdict verdict;
    double p_same;
};

struct CorrelationPattern {
    /// Pairs in lexicographic order (0,1), (0,2), ..., (N-2,N-1).
    std::vector<PairResult> pairs;

    const PairResult &at(size_t i, size_t j) const;
};

CorrelationPattern correlation_pattern(const Scenario &scenario);

struct GeneralReport {
    size_t num_particles;
    size_t num_boxes;
    double pair_same_prob_max;
    double roots_of_unity_residual;
};

/// |sum_{k=1}^{M} e^{2 pi i k / M}|.
double roots_of_unity_residual(size_t num_boxes);

/// Pair probabilities of SAME for outcome (0, ..., 0), maximized over pairs, plus the underlying
/// roots-of-unity residual.
GeneralReport verify_general(size_t num_particles, size_t num_boxes);

}  // namespace pigeonsim

#endif
