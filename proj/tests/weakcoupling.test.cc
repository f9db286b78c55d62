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

#include "pigeonsim/weakcoupling.h"

#include <cmath>

#include "gtest/gtest.h"
#include "oracle.h"
#include "pigeonsim/errors.h"
#include "pigeonsim/pigeonhole.h"
#include "pigeonsim/prepost.h"

using namespace pigeonsim;

namespace {

const std::vector<double> kLambdas{1e-3, 2e-3, 5e-3, 1e-2};

Scenario scenario(std::vector<size_t> outcome, size_t m = 2) {
    return build_scenario(outcome.size(), m, outcome);
}

std::vector<oracle::Vec> oracle_post(const std::vector<size_t> &outcome) {
    std::vector<oracle::Vec> out;
    for (size_t o : outcome) {
        out.push_back(oracle::fourier(2, o));
    }
    return out;
}

}  // namespace

TEST(weakcoupling, gaussian_closed_forms_match_quadrature) {
    for (double sigma : {0.5, 1.0, 2.0}) {
        double norm = oracle::integrate(
            [&](double x) {
                double a = gaussian_amplitude(x, 0.3, sigma);
                return a * a;
            },
            -30, 30, 20000);
        EXPECT_NEAR(norm, 1.0, 1e-10);
        double overlap = oracle::integrate(
            [&](double x) { return gaussian_amplitude(x, -0.4, sigma) * gaussian_amplitude(x, 0.9, sigma); }, -30, 30,
            20000);
        EXPECT_NEAR(overlap, gaussian_overlap(-0.4, 0.9, sigma), 1e-10);
    }
}

TEST(weakcoupling, pointer_state_moments) {
    PointerState psi({{Complex(1, 0.5), 0.0}, {Complex(-0.3, 0.8), 1.5}}, 0.8);
    double norm2 = oracle::integrate([&](double x) { return std::norm(psi.amplitude(x)); }, -20, 20, 20000);
    EXPECT_NEAR(psi.norm2(), norm2, 1e-10);
    double mean = oracle::integrate([&](double x) { return x * psi.density(x); }, -20, 20, 20000);
    EXPECT_NEAR(psi.mean(), mean, 1e-10);
    EXPECT_NEAR(psi.translated(0.25).mean(), psi.mean() + 0.25, 1e-12);
    EXPECT_NEAR(PointerState::gaussian(0.7, 1).mean(), 0.7, 1e-15);

    EXPECT_THROW(PointerState({}, 1.0), InvalidArgument);
    EXPECT_THROW(PointerState::gaussian(0, 0), InvalidArgument);
    EXPECT_THROW(PointerState({{Complex(1), 0}, {Complex(-1), 0}}, 1.0), InvalidArgument);
}

TEST(weakcoupling, evolve_translates_sharing_pairs) {
    auto s = scenario({0, 0, 0});
    auto free = evolve(s.pre, 0, 1);
    for (size_t c = 0; c < 8; c++) {
        for (size_t p = 0; p < 3; p++) {
            EXPECT_EQ(free.center(c, p), 0);
        }
    }
    auto cs = evolve(s.pre, 0.3, 1);
    // LLL = 0: every pair shares an arm.
    for (size_t p = 0; p < 3; p++) {
        EXPECT_EQ(cs.center(0, p), 0.3);
    }
    // LLR = 1: only (1,2).
    EXPECT_EQ(cs.center(1, 0), 0.3);
    EXPECT_EQ(cs.center(1, 1), 0.0);
    EXPECT_EQ(cs.center(1, 2), 0.0);
    EXPECT_EQ(cs.pointer(1, 0).mean(), 0.3);
    EXPECT_THROW(evolve(s.pre, -1, 1), InvalidArgument);
    EXPECT_THROW(evolve(s.pre, 0.1, 0), InvalidArgument);
}

TEST(weakcoupling, norm_and_which_arm_conservation) {
    auto s = scenario({1, 0, 1});
    auto reference = evolve(s.pre, 0, 1);
    for (double lambda : {0.0, 1e-3, 0.5, 3.0}) {
        auto cs = evolve(s.pre, lambda, 1);
        EXPECT_NEAR(cs.norm2(), 1.0, 1e-12);
        for (size_t c = 0; c < 8; c++) {
            EXPECT_EQ(cs.arm_probability(c), reference.arm_probability(c));
        }
        // Success probability summed over every final outcome is 1.
        double total = 0;
        for (size_t flat = 0; flat < 8; flat++) {
            total += postselect(cs, scenario(s.shape.digits(flat)).post).success_probability;
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(weakcoupling, pigeonhole_has_no_first_order_shift) {
    auto s = scenario({0, 0, 0});
    std::vector<oracle::Vec> pre(3, oracle::plus(2));
    for (double lambda : kLambdas) {
        auto m = postselect(evolve(s.pre, lambda, 1), s.post);
        for (size_t p = 0; p < 3; p++) {
            EXPECT_LE(std::abs(m.pairs[p].mean_shift), 10 * lambda * lambda);
            double brute = oracle::pointer_mean(pre, oracle_post({0, 0, 0}), lambda, 1, p);
            EXPECT_NEAR(m.pairs[p].mean_shift, brute, 1e-6 * std::abs(brute));
        }
    }
    // Frozen from an independent numpy brute force: the shift is lambda^3 / 8 at sigma = 1.
    auto m = postselect(evolve(s.pre, 1e-2, 1), s.post);
    EXPECT_NEAR(m.pairs[0].mean_shift, 1.2499843751278942e-07, 1e-13);
}

TEST(weakcoupling, unconditioned_shift_is_half_lambda) {
    auto s = scenario({0, 0, 0});
    std::vector<oracle::Vec> pre(3, oracle::plus(2));
    for (double lambda : kLambdas) {
        auto m = unconditioned(evolve(s.pre, lambda, 1));
        for (size_t p = 0; p < 3; p++) {
            EXPECT_NEAR(m.pairs[p].mean_shift, lambda / 2, 1e-17);
            EXPECT_NEAR(m.pairs[p].mean_shift, oracle::pointer_mean(pre, pre, lambda, 1, p, false), 1e-17);
        }
    }
}

TEST(weakcoupling, flipped_postselection_tracks_weak_value) {
    auto s = scenario({1, 0, 0});
    auto m = postselect(evolve(s.pre, 1e-3, 1), s.post);
    EXPECT_NEAR(m.pairs[0].mean_shift / 1e-3, 1.0, 1e-3);
    EXPECT_NEAR(m.pairs[1].mean_shift / 1e-3, 1.0, 1e-3);
    EXPECT_LE(std::abs(m.pairs[2].mean_shift), 10 * 1e-6);
}

TEST(weakcoupling, pointer_shift_weak_value_law) {
    for (const auto &outcome : {std::vector<size_t>{0, 0, 0}, std::vector<size_t>{1, 1, 1}, std::vector<size_t>{1, 0, 0}}) {
        auto s = scenario(outcome);
        auto e = s.ensemble();
        for (double lambda : kLambdas) {
            auto m = postselect(evolve(s.pre, lambda, 1), s.post);
            for (const auto &pm : m.pairs) {
                double wv = weak_value(e, ProjectorSpec::same_pair(s.shape, pm.pair.i, pm.pair.j)).real();
                EXPECT_LE(std::abs(pm.mean_shift - lambda * wv), 10 * lambda * lambda);
            }
        }
    }
}

TEST(weakcoupling, first_order_check) {
    auto s = scenario({0, 0, 0});
    EXPECT_LE(first_order_check(s.pre, s.post), 1e-12);
    EXPECT_NEAR(first_order_check(s.pre, s.pre), 0.5, 1e-15);
    auto four = scenario({0, 0, 0, 0});
    EXPECT_LE(first_order_check(four.pre, four.post), 1e-12);
    EXPECT_THROW(first_order_check(s.pre, four.post), ShapeMismatch);
}

TEST(weakcoupling, exact_minus_first_order_is_second_order) {
    for (const auto &outcome : {std::vector<size_t>{0, 0, 0}, std::vector<size_t>{1, 0, 0}}) {
        auto s = scenario(outcome);
        std::vector<std::vector<double>> probes{{0, 0, 0}, {0.5, -1, 1.5}, {-2, 0.3, 0.8}};
        double worst_ratio = 0;
        for (double lambda : kLambdas) {
            auto cs = evolve(s.pre, lambda, 1);
            for (const auto &x : probes) {
                Complex exact = postselected_pointer_amplitude(cs, s.post, x);
                Complex first = first_order_pointer_amplitude(s.pre, s.post, lambda, 1, x);
                worst_ratio = std::max(worst_ratio, std::abs(exact - first) / (lambda * lambda));
            }
        }
        EXPECT_LT(worst_ratio, 1.0);
    }
}

TEST(weakcoupling, spectral_lines_unshifted) {
    auto s = scenario({0, 0, 0});
    double lambda = 1e-2;
    auto cs = evolve(s.pre, lambda, 1);
    for (size_t p = 0; p < 3; p++) {
        auto curve = pointer_density(cs, s.post, p, -12, 12, 4801);
        double h = curve[1].first - curve[0].first;
        double mass = 0, first = 0;
        for (const auto &[x, d] : curve) {
            mass += d * h;
            first += x * d * h;
        }
        EXPECT_NEAR(mass, 1.0, 1e-9);
        EXPECT_LE(std::abs(first), 10 * lambda * lambda);
    }
    // Without post-selection the line moves by lambda / 2.
    auto curve = pointer_density(cs, std::nullopt, 0, -12, 12, 4801);
    double h = curve[1].first - curve[0].first;
    double first = 0;
    for (const auto &[x, d] : curve) {
        first += x * d * h;
    }
    EXPECT_NEAR(first, lambda / 2, 1e-9);
    EXPECT_THROW(pointer_density(cs, s.post, 3, -1, 1, 10), InvalidArgument);
    EXPECT_THROW(pointer_density(cs, s.post, 0, 1, 1, 10), InvalidArgument);
}

TEST(weakcoupling, impossible_postselection) {
    RegisterShape one(1, 2);
    auto left = StateVector::basis(one, 0), right = StateVector::basis(one, 1);
    auto s = Scenario::from_factors({left, left}, {right, right});
    EXPECT_THROW(postselect(evolve(s.pre, 0.1, 1), s.post), ImpossiblePostselection);
}

TEST(weakcoupling, deflection_scan_slopes) {
    auto s = scenario({0, 0, 0});
    auto unc = deflection_scan(s.pre, std::nullopt, kLambdas, 1);
    ASSERT_TRUE(unc.slope());
    EXPECT_NEAR(*unc.slope(), 1.0, 0.05);
    EXPECT_EQ(deflection_verdict(unc.slope()), "first-order deflection");
    for (const auto &row : unc.rows) {
        EXPECT_FALSE(row.strong_coupling);
        for (double shift : row.shifts) {
            EXPECT_NEAR(shift, row.lambda / 2, 1e-17);
        }
    }

    // The oracle shift lambda^3 / 8 has log-log slope 3.
    auto post = deflection_scan(s.pre, s.post, kLambdas, 1);
    ASSERT_TRUE(post.slope());
    EXPECT_NEAR(*post.slope(), 3.0, 1e-3);
    EXPECT_EQ(deflection_verdict(post.slope()), "no first-order deflection");
    for (const auto &f : post.fits) {
        EXPECT_EQ(f.points_used, 4u);
        EXPECT_EQ(f.points_excluded, 0u);
    }
}

TEST(weakcoupling, deflection_scan_contract) {
    auto s = scenario({0, 0, 0});
    std::vector<double> one{1e-3};
    EXPECT_THROW(deflection_scan(s.pre, s.post, one, 1), InsufficientPoints);
    std::vector<double> narrow{1e-3, 2e-3, 5e-3};
    EXPECT_THROW(deflection_scan(s.pre, s.post, narrow, 1), InsufficientPoints);
    std::vector<double> negative{-1e-3, 1e-2};
    EXPECT_THROW(deflection_scan(s.pre, s.post, negative, 1), InvalidArgument);
    std::vector<double> strong{0.05, 0.5};
    auto r = deflection_scan(s.pre, std::nullopt, strong, 1);
    EXPECT_FALSE(r.rows[0].strong_coupling);
    EXPECT_TRUE(r.rows[1].strong_coupling);
}

TEST(weakcoupling, exact_zero_shifts_are_excluded) {
    // The two particles never share a box, so the pointer never moves.
    RegisterShape one(1, 2);
    auto left = StateVector::basis(one, 0), right = StateVector::basis(one, 1);
    auto s = Scenario::from_factors({left, right}, {left, right});
    auto r = deflection_scan(s.pre, s.post, kLambdas, 1);
    EXPECT_FALSE(r.fits[0].slope);
    EXPECT_EQ(r.fits[0].points_excluded, 4u);
    EXPECT_EQ(deflection_verdict(r.slope()), "no deflection");
}

TEST(weakcoupling, loglog_fit) {
    std::vector<double> xs{1, 10, 100}, ys{3, 300, 30000};
    EXPECT_NEAR(fit_loglog_slope(xs, ys), 2.0, 1e-12);
    std::vector<double> one{1};
    EXPECT_THROW(fit_loglog_slope(one, one), InsufficientPoints);
}
