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
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "oracle.h"
#include "pigeonsim/errors.h"

using namespace pigeonsim;

namespace {

const double kPi = std::numbers::pi;
const RegisterShape kShape(3, 2);

StateVector pre3() {
    return tensor({plus_state(2), plus_state(2), plus_state(2)});
}

StateVector post3(size_t a = 0, size_t b = 0, size_t c = 0) {
    auto basis = fourier_basis(2);
    return tensor({basis[a], basis[b], basis[c]});
}

PrePostEnsemble pigeonhole() {
    return PrePostEnsemble(pre3(), post3());
}

void expect_probs(const std::vector<double> &got, const std::vector<double> &want, double tol) {
    ASSERT_EQ(got.size(), want.size());
    for (size_t k = 0; k < got.size(); k++) {
        EXPECT_NEAR(got[k], want[k], tol) << "outcome " << k;
    }
}

}  // namespace

TEST(prepost, ensemble_requires_normalized_states) {
    EXPECT_THROW(PrePostEnsemble(pre3().scaled(2), post3()), InvalidArgument);
    EXPECT_THROW(PrePostEnsemble(plus_state(2), post3()), ShapeMismatch);
    EXPECT_NEAR(std::abs(pigeonhole().overlap() - Complex(-0.25, -0.25)), 0, 1e-15);
}

TEST(prepost, measurement_spec_validation) {
    EXPECT_THROW(MeasurementSpec({ProjectorSpec::same_pair(kShape, 0, 1)}, {"SAME"}), InvalidArgument);
    EXPECT_THROW(MeasurementSpec({ProjectorSpec::same_pair(kShape, 0, 1), ProjectorSpec::same_pair(kShape, 0, 1)},
                                 {"A", "B"}),
                 InvalidArgument);
    EXPECT_THROW(MeasurementSpec({ProjectorSpec::same_pair(kShape, 0, 1), ProjectorSpec::diff_pair(kShape, 0, 1)},
                                 {"only-one"}),
                 InvalidArgument);
    auto sd = MeasurementSpec::same_diff(kShape, 0, 1);
    EXPECT_EQ(sd.index_of("DIFFERENT"), 1u);
    EXPECT_THROW(sd.index_of("nope"), InvalidArgument);
    auto boxes = MeasurementSpec::box_pairs(kShape, 0, 1);
    EXPECT_EQ(boxes.labels(), (std::vector<std::string>{"LL", "LR", "RL", "RR"}));
    EXPECT_NO_THROW(MeasurementSpec::product_basis(kShape, fourier_basis(2)));
}

TEST(prepost, born_probabilities) {
    expect_probs(born_probabilities(pre3(), MeasurementSpec::same_diff(kShape, 0, 1)), {0.5, 0.5}, 1e-12);
    // Each of the 8 amplitudes is 1/(2 sqrt 2); every box-pair outcome covers two of them.
    expect_probs(born_probabilities(pre3(), MeasurementSpec::box_pairs(kShape, 0, 1)), {0.25, 0.25, 0.25, 0.25}, 1e-12);
    auto basis_meas = MeasurementSpec::product_basis(kShape, {StateVector::basis(RegisterShape(1, 2), 0),
                                                              StateVector::basis(RegisterShape(1, 2), 1)});
    auto probs = born_probabilities(StateVector::basis(kShape, 5), basis_meas);
    for (size_t k = 0; k < probs.size(); k++) {
        EXPECT_NEAR(probs[k], k == 5 ? 1.0 : 0.0, 1e-15);
    }
    EXPECT_THROW(born_probabilities(pre3().scaled(3), basis_meas), InvalidArgument);
}

TEST(prepost, abl_pigeonhole) {
    expect_probs(abl_probabilities(pigeonhole(), MeasurementSpec::same_diff(kShape, 0, 1)), {0, 1}, 1e-12);
    expect_probs(abl_probabilities(pigeonhole(), MeasurementSpec::box_pairs(kShape, 0, 1)), {0.25, 0.25, 0.25, 0.25},
                 1e-12);
}

TEST(prepost, abl_with_post_equal_pre_matches_born_squares) {
    // With post = pre, the ABL numerators are <pre|P_i|pre>^2, so ABL_i = Born_i^2 / sum_j Born_j^2.
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    std::vector<Complex> amps(kShape.dimension());
    for (auto &a : amps) {
        double re = g(rng);
        a = Complex(re, g(rng));
    }
    StateVector psi = StateVector(kShape, amps).normalized();
    for (const auto &meas : {MeasurementSpec::same_diff(kShape, 0, 2), MeasurementSpec::box_pairs(kShape, 1, 2)}) {
        auto born = born_probabilities(psi, meas);
        double denom = 0;
        for (double b : born) {
            denom += b * b;
        }
        auto abl = abl_probabilities(PrePostEnsemble(psi, psi), meas);
        for (size_t k = 0; k < born.size(); k++) {
            EXPECT_NEAR(abl[k], born[k] * born[k] / denom, 1e-12);
        }
    }
}

TEST(prepost, abl_impossible_postselection) {
    RegisterShape one(1, 2);
    PrePostEnsemble e(StateVector::basis(one, 0), StateVector::basis(one, 1));
    auto meas = MeasurementSpec::product_basis(one, {StateVector::basis(one, 0), StateVector::basis(one, 1)});
    EXPECT_THROW(abl_probabilities(e, meas), ImpossiblePostselection);
}

TEST(prepost, abl_global_phase_invariance) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> phase(0, 2 * kPi);
    auto meas = MeasurementSpec::box_pairs(kShape, 0, 2);
    auto post = post3(1, 0, 1);
    auto ref = abl_probabilities(PrePostEnsemble(pre3(), post), meas);
    for (int t = 0; t < 10; t++) {
        auto got = abl_probabilities(
            PrePostEnsemble(pre3().scaled(std::polar(1.0, phase(rng))), post.scaled(std::polar(1.0, phase(rng)))), meas);
        expect_probs(got, ref, 1e-12);
    }
}

TEST(prepost, abl_sums_to_one) {
    for (size_t o = 0; o < 8; o++) {
        auto d = kShape.digits(o);
        PrePostEnsemble e(pre3(), post3(d[0], d[1], d[2]));
        for (const auto &meas : {MeasurementSpec::same_diff(kShape, 1, 2), MeasurementSpec::box_pairs(kShape, 0, 1)}) {
            double total = 0;
            for (double p : abl_probabilities(e, meas)) {
                total += p;
            }
            EXPECT_NEAR(total, 1.0, 1e-12);
        }
    }
}

TEST(prepost, weak_values) {
    auto same12 = ProjectorSpec::same_pair(kShape, 0, 1);
    EXPECT_NEAR(std::abs(weak_value(pigeonhole(), same12)), 0, 1e-12);
    EXPECT_NEAR(std::abs(weak_value(pigeonhole(), DenseOperator::identity(kShape)) - 1.0), 0, 1e-12);

    // Numerator and denominator both (1 - i)/4 by direct expansion.
    PrePostEnsemble flipped(pre3(), post3(1, 0, 0));
    EXPECT_NEAR(std::abs(flipped.overlap() - Complex(0.25, -0.25)), 0, 1e-15);
    EXPECT_NEAR(std::abs(weak_value(flipped, same12) - 1.0), 0, 1e-12);

    RegisterShape one(1, 2);
    PrePostEnsemble orthogonal(StateVector::basis(one, 0), StateVector::basis(one, 1));
    EXPECT_THROW(weak_value(orthogonal, ProjectorSpec::single_box(one, 0, 0)), UndefinedWeakValue);
}

TEST(prepost, weak_value_linearity_and_completeness) {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<size_t> o(0, 1);
    for (int t = 0; t < 8; t++) {
        PrePostEnsemble e(pre3(), post3(o(rng), o(rng), o(rng)));
        auto a = DenseOperator::from_projector(ProjectorSpec::same_pair(kShape, 0, 2));
        auto b = DenseOperator::from_projector(ProjectorSpec::box_pair(kShape, 1, 2, 0, 1)).scaled(Complex(0.3, -2));
        EXPECT_NEAR(std::abs(weak_value(e, a + b) - weak_value(e, a) - weak_value(e, b)), 0, 1e-12);

        Complex total = 0;
        auto rank1 = MeasurementSpec::product_basis(kShape, fourier_basis(2));
        for (const auto &p : rank1.projectors()) {
            total += weak_value(e, p);
        }
        EXPECT_NEAR(std::abs(total - 1.0), 0, 1e-12);
    }
}

TEST(prepost, chain_disturbance) {
    auto pre = pre3(), post = post3();
    std::vector<ProjectorSpec> chain{ProjectorSpec::same_pair(kShape, 0, 1), ProjectorSpec::same_pair(kShape, 0, 2)};
    ChainResult both = chain_amplitude(pre, chain, post);
    EXPECT_NEAR(both.path_probability, 1.0 / 32, 1e-15);
    ASSERT_EQ(both.step_probabilities.size(), 2u);
    EXPECT_NEAR(both.step_probabilities[0], 0.5, 1e-15);
    EXPECT_NEAR(both.step_probabilities[1], 0.5, 1e-15);
    EXPECT_NEAR(both.selection_probability, 1.0 / 8, 1e-15);
    EXPECT_NEAR(std::norm(both.amplitude), 1.0 / 32, 1e-15);

    std::vector<ProjectorSpec> first{chain[0]};
    ChainResult one = chain_amplitude(pre, first, post);
    EXPECT_NEAR(one.path_probability, 0, 1e-28);
    EXPECT_NEAR(std::abs(one.amplitude), 0, 1e-12);

    ChainResult none = chain_amplitude(pre, {}, post);
    EXPECT_NEAR(none.path_probability, 1.0 / 8, 1e-15);
}

TEST(prepost, chain_with_dead_step) {
    RegisterShape one(1, 2);
    std::vector<ProjectorSpec> chain{ProjectorSpec::single_box(one, 0, 1), ProjectorSpec::single_box(one, 0, 0)};
    ChainResult r = chain_amplitude(StateVector::basis(one, 0), chain, plus_state(2));
    EXPECT_EQ(r.path_probability, 0);
    EXPECT_EQ(r.step_probabilities, (std::vector<double>{0, 0}));
}

TEST(prepost, single_step_chain_reproduces_abl_numerator) {
    for (size_t o = 0; o < 8; o++) {
        auto d = kShape.digits(o);
        PrePostEnsemble e(pre3(), post3(d[0], d[1], d[2]));
        auto meas = MeasurementSpec::box_pairs(kShape, 0, 2);
        auto numerators = abl_numerators(e, meas);
        for (size_t k = 0; k < meas.size(); k++) {
            std::vector<ProjectorSpec> chain{meas.projectors()[k]};
            EXPECT_NEAR(std::norm(chain_amplitude(e.pre(), chain, e.post()).amplitude), numerators[k], 1e-15);
        }
    }
}

TEST(prepost, separate_vs_joint_measurements_oracle) {
    // Separate box readout agrees with the independent configuration sum.
    std::vector<oracle::Vec> pre(3, oracle::plus(2)), post(3, oracle::fourier(2, 0));
    auto meas = MeasurementSpec::box_pairs(kShape, 0, 1);
    auto abl = abl_probabilities(pigeonhole(), meas);
    std::vector<double> brute;
    double total = 0;
    for (size_t a = 0; a < 2; a++) {
        for (size_t b = 0; b < 2; b++) {
            double v = std::norm(oracle::product_bracket(pre, post, [&](const std::vector<size_t> &c) {
                return c[0] == a && c[1] == b;
            }));
            brute.push_back(v);
            total += v;
        }
    }
    for (size_t k = 0; k < 4; k++) {
        EXPECT_NEAR(abl[k], brute[k] / total, 1e-12);
    }
    // P(LL) + P(RR) from separate readout is 1/2, the joint measurement says 0.
    EXPECT_NEAR(abl[0] + abl[3], 0.5, 1e-12);
}
