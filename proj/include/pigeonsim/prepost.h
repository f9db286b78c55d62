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

#ifndef PIGEONSIM_PREPOST_H
#define PIGEONSIM_PREPOST_H

#include <string>
#include <vector>

#include "pigeonsim/qstate.h"

namespace pigeonsim {

/// A pre-selected state paired with a post-selected state, both normalized.
class PrePostEnsemble {
   public:
    PrePostEnsemble(StateVector pre, StateVector post);

    const StateVector &pre() const {
        return pre_;
    }
    const StateVector &post() const {
        return post_;
    }
    const RegisterShape &shape() const {
        return pre_.shape();
    }
    /// <post|pre>, recorded at construction.
    Complex overlap() const {
        return overlap_;
    }

   private:
    StateVector pre_;
    StateVector post_;
    Complex overlap_;
};

/// A complete set of orthogonal projectors with one label per outcome.
class MeasurementSpec {
   public:
    /// Throws InvalidArgument unless the projectors are pairwise orthogonal and sum to identity.
    MeasurementSpec(std::vector<ProjectorSpec> projectors, std::vector<std::string> labels);

    /// {same(i,j), diff(i,j)} with labels SAME, DIFFERENT.
    static MeasurementSpec same_diff(const RegisterShape &shape, size_t i, size_t j);
    /// Separate box readout of particles i and j: M^2 outcomes labelled by box pair (LL, LR, ... for M = 2).
    static MeasurementSpec box_pairs(const RegisterShape &shape, size_t i, size_t j);
    /// Rank-1 measurement in the product of a single-particle basis.
    static MeasurementSpec product_basis(const RegisterShape &shape, const std::vector<StateVector> &single_basis);

    const RegisterShape &shape() const {
        return projectors_.front().shape();
    }
    size_t size() const {
        return projectors_.size();
    }
    const std::vector<ProjectorSpec> &projectors() const {
        return projectors_;
    }
    const std::vector<std::string> &labels() const {
        return labels_;
    }
    size_t index_of(const std::string &label) const;

   private:
    std::vector<ProjectorSpec> projectors_;
    std::vector<std::string> labels_;
};

/// Born rule on the pre-selected state alone: <pre|P_i|pre>.
std::vector<double> born_probabilities(const StateVector &pre, const MeasurementSpec &measurement);

/// ABL rule: |<post|P_i|pre>|^2 / sum_j |<post|P_j|pre>|^2.
/// Throws ImpossiblePostselection when the denominator is at most 1e-14.
std::vector<double> abl_probabilities(const PrePostEnsemble &ensemble, const MeasurementSpec &measurement);

/// ABL numerators |<post|P_i|pre>|^2 without normalization.
std::vector<double> abl_numerators(const PrePostEnsemble &ensemble, const MeasurementSpec &measurement);

/// <post|A|pre> / <post|pre>. Throws UndefinedWeakValue when |<post|pre>| <= 1e-14.
Complex weak_value(const PrePostEnsemble &ensemble, const ProjectorSpec &op);
Complex weak_value(const PrePostEnsemble &ensemble, const DenseOperator &op);

struct ChainResult {
    /// <post| P_k ... P_1 |pre>
    Complex amplitude;
    /// Born probability of each intermediate outcome given the previous collapses.
    std::vector<double> step_probabilities;
    /// Probability of the final post-selection given the collapsed state.
    double selection_probability;
    /// Product of all of the above: the physical probability of the whole path.
    double path_probability;
};

/// Sequential projective collapse along `outcomes` followed by post-selection on `post`.
/// The amplitude uses the vectors as given; probabilities use normalized copies of pre and post.
ChainResult chain_amplitude(
    const StateVector &pre, std::span<const ProjectorSpec> outcomes, const StateVector &post);

}  // namespace pigeonsim

#endif
