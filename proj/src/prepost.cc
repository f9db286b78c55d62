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

#include "pigeonsim/prepost.h"

#include <cmath>
#include <sstream>

#include "pigeonsim/errors.h"
#include "pigeonsim/tolerances.h"

namespace pigeonsim {

namespace {

constexpr size_t kPairwiseCheckLimit = 64;

std::string box_label(size_t num_boxes, size_t box) {
    if (num_boxes == 2) {
        return box == 0 ? "L" : "R";
    }
    return std::to_string(box);
}

}  // namespace

PrePostEnsemble::PrePostEnsemble(StateVector pre, StateVector post)
    : pre_(std::move(pre)), post_(std::move(post)) {
    require_same_shape(pre_.shape(), post_.shape(), "PrePostEnsemble");
    if (!pre_.is_normalized() || !post_.is_normalized()) {
        throw InvalidArgument("pre- and post-selected states must be normalized");
    }
    overlap_ = inner(post_, pre_);
}

MeasurementSpec::MeasurementSpec(std::vector<ProjectorSpec> projectors, std::vector<std::string> labels)
    : projectors_(std::move(projectors)), labels_(std::move(labels)) {
    if (projectors_.empty()) {
        throw InvalidArgument("measurement needs at least one projector");
    }
    if (labels_.size() != projectors_.size()) {
        throw InvalidArgument("measurement needs exactly one label per projector");
    }
    const RegisterShape &shape = projectors_.front().shape();
    for (const auto &p : projectors_) {
        require_same_shape(shape, p.shape(), "MeasurementSpec");
    }
    double tol = identity_tol(shape.dimension());
    for (uint64_t salt = 0; salt < 2; salt++) {
        StateVector v = probe_state(shape, salt + 17);
        StateVector sum = StateVector::zero(shape);
        std::vector<StateVector> parts;
        parts.reserve(projectors_.size());
        for (const auto &p : projectors_) {
            parts.push_back(apply(p, v));
            sum = sum + parts.back();
        }
        if (sum.max_abs_diff(v) > tol) {
            throw InvalidArgument("measurement projectors do not sum to identity");
        }
        if (projectors_.size() <= kPairwiseCheckLimit) {
            for (size_t a = 0; a < projectors_.size(); a++) {
                for (size_t b = 0; b < projectors_.size(); b++) {
                    if (a != b && apply(projectors_[a], parts[b]).norm() > tol) {
                        throw InvalidArgument("measurement projectors are not pairwise orthogonal");
                    }
                }
            }
        }
    }
}

MeasurementSpec MeasurementSpec::same_diff(const RegisterShape &shape, size_t i, size_t j) {
    return MeasurementSpec(
        {ProjectorSpec::same_pair(shape, i, j), ProjectorSpec::diff_pair(shape, i, j)}, {"SAME", "DIFFERENT"});
}

MeasurementSpec MeasurementSpec::box_pairs(const RegisterShape &shape, size_t i, size_t j) {
    std::vector<ProjectorSpec> projectors;
    std::vector<std::string> labels;
    size_t m = shape.num_boxes();
    for (size_t a = 0; a < m; a++) {
        for (size_t b = 0; b < m; b++) {
            projectors.push_back(ProjectorSpec::box_pair(shape, i, j, a, b));
            labels.push_back(m == 2 ? box_label(m, a) + box_label(m, b) : box_label(m, a) + "," + box_label(m, b));
        }
    }
    return MeasurementSpec(std::move(projectors), std::move(labels));
}

MeasurementSpec MeasurementSpec::product_basis(
    const RegisterShape &shape, const std::vector<StateVector> &single_basis) {
    if (single_basis.size() != shape.num_boxes()) {
        throw InvalidArgument("product_basis: single-particle basis has the wrong size");
    }
    std::vector<ProjectorSpec> projectors;
    std::vector<std::string> labels;
    for (size_t idx = 0; idx < shape.dimension(); idx++) {
        auto digits = shape.digits(idx);
        std::vector<StateVector> factors;
        std::string label;
        for (size_t p = 0; p < digits.size(); p++) {
            factors.push_back(single_basis[digits[p]]);
            label += (p ? "," : "") + std::to_string(digits[p]);
        }
        projectors.push_back(ProjectorSpec::product_post(shape, std::move(factors)));
        labels.push_back(std::move(label));
    }
    return MeasurementSpec(std::move(projectors), std::move(labels));
}

size_t MeasurementSpec::index_of(const std::string &label) const {
    for (size_t k = 0; k < labels_.size(); k++) {
        if (labels_[k] == label) {
            return k;
        }
    }
    throw InvalidArgument("unknown measurement label '" + label + "'");
}

std::vector<double> born_probabilities(const StateVector &pre, const MeasurementSpec &measurement) {
    require_same_shape(pre.shape(), measurement.shape(), "born_probabilities");
    if (!pre.is_normalized()) {
        throw InvalidArgument("born_probabilities: state must be normalized");
    }
    std::vector<double> out;
    out.reserve(measurement.size());
    for (const auto &p : measurement.projectors()) {
        out.push_back(std::real(inner(pre, apply(p, pre))));
    }
    return out;
}

std::vector<double> abl_numerators(const PrePostEnsemble &ensemble, const MeasurementSpec &measurement) {
    require_same_shape(ensemble.shape(), measurement.shape(), "abl_probabilities");
    std::vector<double> out;
    out.reserve(measurement.size());
    for (const auto &p : measurement.projectors()) {
        out.push_back(std::norm(inner(ensemble.post(), apply(p, ensemble.pre()))));
    }
    return out;
}

std::vector<double> abl_probabilities(const PrePostEnsemble &ensemble, const MeasurementSpec &measurement) {
    std::vector<double> out = abl_numerators(ensemble, measurement);
    double denominator = 0;
    for (double x : out) {
        denominator += x;
    }
    if (denominator <= kOrthogonalThreshold) {
        throw ImpossiblePostselection("post-selection is unreachable through every outcome of the measurement");
    }
    for (double &x : out) {
        x /= denominator;
    }
    return out;
}

namespace {

Complex weak_value_from_numerator(const PrePostEnsemble &ensemble, Complex numerator) {
    if (std::abs(ensemble.overlap()) <= kOrthogonalThreshold) {
        throw UndefinedWeakValue("weak value undefined: pre- and post-selected states are orthogonal");
    }
    return numerator / ensemble.overlap();
}

}  // namespace

Complex weak_value(const PrePostEnsemble &ensemble, const ProjectorSpec &op) {
    require_same_shape(ensemble.shape(), op.shape(), "weak_value");
    return weak_value_from_numerator(ensemble, inner(ensemble.post(), apply(op, ensemble.pre())));
}

Complex weak_value(const PrePostEnsemble &ensemble, const DenseOperator &op) {
    require_same_shape(ensemble.shape(), op.shape(), "weak_value");
    return weak_value_from_numerator(ensemble, inner(ensemble.post(), op.apply(ensemble.pre())));
}

ChainResult chain_amplitude(
    const StateVector &pre, std::span<const ProjectorSpec> outcomes, const StateVector &post) {
    require_same_shape(pre.shape(), post.shape(), "chain_amplitude");
    for (const auto &p : outcomes) {
        require_same_shape(pre.shape(), p.shape(), "chain_amplitude");
    }

    ChainResult result{};
    StateVector bare = pre;
    for (const auto &p : outcomes) {
        bare = apply(p, bare);
    }
    result.amplitude = inner(post, bare);

    // Physical path: collapse and renormalize after each step.
    StateVector state = pre.normalized();
    StateVector post_n = post.normalized();
    double path = 1;
    bool dead = false;
    for (const auto &p : outcomes) {
        if (dead) {
            result.step_probabilities.push_back(0);
            continue;
        }
        StateVector projected = apply(p, state);
        double prob = projected.norm2();
        result.step_probabilities.push_back(prob);
        path *= prob;
        if (prob <= kOrthogonalThreshold) {
            dead = true;
            path = 0;
        } else {
            state = projected.scaled(1.0 / std::sqrt(prob));
        }
    }
    result.selection_probability = dead ? 0.0 : std::norm(inner(post_n, state));
    result.path_probability = path * result.selection_probability;
    return result;
}

}  // namespace pigeonsim
