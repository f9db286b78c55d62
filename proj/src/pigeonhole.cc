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

#include "pigeonsim/pigeonhole.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pigeonsim/errors.h"
#include "pigeonsim/tolerances.h"

namespace pigeonsim {

Scenario Scenario::from_factors(std::vector<StateVector> pre_factors, std::vector<StateVector> post_factors) {
    if (pre_factors.size() != post_factors.size()) {
        throw InvalidArgument("scenario: pre and post need one factor per particle");
    }
    for (const auto &f : pre_factors) {
        if (f.shape().num_particles() != 1 || !f.is_normalized()) {
            throw InvalidArgument("scenario: factors must be normalized single-particle states");
        }
    }
    for (const auto &f : post_factors) {
        if (f.shape().num_particles() != 1 || !f.is_normalized()) {
            throw InvalidArgument("scenario: factors must be normalized single-particle states");
        }
    }
    StateVector pre = tensor(pre_factors);
    StateVector post = tensor(post_factors);
    require_same_shape(pre.shape(), post.shape(), "scenario");
    RegisterShape shape = pre.shape();
    return Scenario{
        std::move(shape), std::move(pre_factors), std::move(post_factors), std::move(pre), std::move(post), {}};
}

Scenario build_scenario(size_t num_particles, size_t num_boxes, const std::vector<size_t> &outcome) {
    if (num_particles < 2) {
        throw InvalidArgument("need at least 2 particles");
    }
    if (num_boxes < 2) {
        throw InvalidArgument("need at least 2 boxes");
    }
    if (outcome.size() != num_particles) {
        throw InvalidArgument("outcome needs one entry per particle");
    }
    // Checks the cap before building any vectors.
    (void)RegisterShape(num_particles, num_boxes);
    auto basis = fourier_basis(num_boxes);
    std::vector<StateVector> pre_factors(num_particles, plus_state(num_boxes));
    std::vector<StateVector> post_factors;
    for (size_t o : outcome) {
        if (o >= num_boxes) {
            throw InvalidArgument("outcome index " + std::to_string(o) + " out of range for M=" + std::to_string(num_boxes));
        }
        post_factors.push_back(basis[o]);
    }
    Scenario s = Scenario::from_factors(std::move(pre_factors), std::move(post_factors));
    s.outcome.assign(outcome.begin(), outcome.end());
    return s;
}

double pair_same_probability(const Scenario &scenario, size_t i, size_t j) {
    auto measurement = MeasurementSpec::same_diff(scenario.shape, i, j);
    return abl_probabilities(scenario.ensemble(), measurement)[0];
}

std::string to_string(PairVerdict verdict) {
    switch (verdict) {
        case PairVerdict::Same:
            return "SAME";
        case PairVerdict::Different:
            return "DIFFERENT";
        default:
            return "UNDETERMINED";
    }
}

PairVerdict classify_pair(double p_same) {
    if (p_same >= 1 - kPatternThreshold) {
        return PairVerdict::Same;
    }
    if (p_same <= kPatternThreshold) {
        return PairVerdict::Different;
    }
    return PairVerdict::Undetermined;
}

const PairResult &CorrelationPattern::at(size_t i, size_t j) const {
    if (i > j) {
        std::swap(i, j);
    }
    for (const auto &p : pairs) {
        if (p.i == i && p.j == j) {
            return p;
        }
    }
    throw InvalidArgument("pair not present in pattern");
}

CorrelationPattern correlation_pattern(const Scenario &scenario) {
    CorrelationPattern pattern;
    size_t n = scenario.shape.num_particles();
    for (size_t i = 0; i < n; i++) {
        for (size_t j = i + 1; j < n; j++) {
            double p = pair_same_probability(scenario, i, j);
            pattern.pairs.push_back({i, j, classify_pair(p), p});
        }
    }
    return pattern;
}

double roots_of_unity_residual(size_t num_boxes) {
    if (num_boxes < 2) {
        throw InvalidArgument("need at least 2 boxes");
    }
    Complex sum = 0;
    double m = static_cast<double>(num_boxes);
    for (size_t k = 1; k <= num_boxes; k++) {
        sum += std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(k) / m);
    }
    return std::abs(sum);
}

GeneralReport verify_general(size_t num_particles, size_t num_boxes) {
    std::vector<size_t> outcome(num_particles, 0);
    Scenario s = build_scenario(num_particles, num_boxes, outcome);
    double worst = 0;
    auto pattern = correlation_pattern(s);
    for (const auto &p : pattern.pairs) {
        worst = std::max(worst, p.p_same);
    }
    return GeneralReport{num_particles, num_boxes, worst, roots_of_unity_residual(num_boxes)};
}

}  // namespace pigeonsim
