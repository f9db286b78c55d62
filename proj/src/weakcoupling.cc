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

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "pigeonsim/errors.h"
#include "pigeonsim/tolerances.h"

namespace pigeonsim {

namespace {

// Arm weights collapsed onto distinct pointer-center signatures.
struct Branch {
    std::vector<double> centers;
    Complex weight;
};

std::vector<Branch> branches(const CoupledState &state, const StateVector &post) {
    require_same_shape(state.shape(), post.shape(), "postselect");
    size_t np = state.pairs().size();
    std::map<std::vector<double>, Complex> grouped;
    for (size_t c = 0; c < state.shape().dimension(); c++) {
        Complex w = std::conj(post[c]) * state.arms()[c];
        if (w == Complex(0)) {
            continue;
        }
        std::vector<double> key(np);
        for (size_t p = 0; p < np; p++) {
            key[p] = state.center(c, p);
        }
        grouped[key] += w;
    }
    std::vector<Branch> out;
    for (auto &[key, w] : grouped) {
        out.push_back({key, w});
    }
    return out;
}

// Product of pointer overlaps between two branches, leaving out pair `skip` (npos keeps all).
double overlap_product(const Branch &a, const Branch &b, double sigma, size_t skip = std::string::npos) {
    double acc = 1;
    for (size_t q = 0; q < a.centers.size(); q++) {
        if (q != skip) {
            acc *= gaussian_overlap(a.centers[q], b.centers[q], sigma);
        }
    }
    return acc;
}

double branch_norm2(const std::vector<Branch> &bs, double sigma) {
    Complex acc = 0;
    for (const auto &a : bs) {
        for (const auto &b : bs) {
            acc += std::conj(a.weight) * b.weight * overlap_product(a, b, sigma);
        }
    }
    return acc.real();
}

void check_sigma(double sigma) {
    if (!(sigma > 0) || !std::isfinite(sigma)) {
        throw InvalidArgument("pointer width sigma must be positive");
    }
}

}  // namespace

double gaussian_amplitude(double x, double center, double sigma) {
    double d = x - center;
    return std::pow(2 * std::numbers::pi * sigma * sigma, -0.25) * std::exp(-d * d / (4 * sigma * sigma));
}

double gaussian_overlap(double a, double b, double sigma) {
    double d = a - b;
    return std::exp(-d * d / (8 * sigma * sigma));
}

PointerState::PointerState(std::vector<PointerTerm> terms, double sigma) : terms_(std::move(terms)), sigma_(sigma) {
    check_sigma(sigma);
    if (terms_.empty()) {
        throw InvalidArgument("pointer state needs at least one term");
    }
    for (const auto &t : terms_) {
        if (!std::isfinite(t.weight.real()) || !std::isfinite(t.weight.imag()) || !std::isfinite(t.center)) {
            throw InvalidArgument("pointer state has a non-finite term");
        }
    }
    if (!(norm2() > 0)) {
        throw InvalidArgument("pointer state has zero norm");
    }
}

PointerState PointerState::gaussian(double center, double sigma) {
    return PointerState({{Complex(1), center}}, sigma);
}

double PointerState::norm2() const {
    Complex acc = 0;
    for (const auto &a : terms_) {
        for (const auto &b : terms_) {
            acc += std::conj(a.weight) * b.weight * gaussian_overlap(a.center, b.center, sigma_);
        }
    }
    return acc.real();
}

double PointerState::mean() const {
    Complex acc = 0;
    for (const auto &a : terms_) {
        for (const auto &b : terms_) {
            acc += std::conj(a.weight) * b.weight * (0.5 * (a.center + b.center)) *
                   gaussian_overlap(a.center, b.center, sigma_);
        }
    }
    return acc.real() / norm2();
}

Complex PointerState::amplitude(double x) const {
    Complex acc = 0;
    for (const auto &t : terms_) {
        acc += t.weight * gaussian_amplitude(x, t.center, sigma_);
    }
    return acc;
}

double PointerState::density(double x) const {
    return std::norm(amplitude(x)) / norm2();
}

PointerState PointerState::translated(double shift) const {
    std::vector<PointerTerm> terms(terms_);
    for (auto &t : terms) {
        t.center += shift;
    }
    return PointerState(std::move(terms), sigma_);
}

std::vector<ParticlePair> all_pairs(size_t num_particles) {
    std::vector<ParticlePair> out;
    for (size_t i = 0; i < num_particles; i++) {
        for (size_t j = i + 1; j < num_particles; j++) {
            out.push_back({i, j});
        }
    }
    return out;
}

CoupledState::CoupledState(StateVector arms, std::vector<ParticlePair> pairs, std::vector<double> centers,
                           double sigma)
    : arms_(std::move(arms)), pairs_(std::move(pairs)), centers_(std::move(centers)), sigma_(sigma) {
    check_sigma(sigma);
    if (centers_.size() != arms_.dimension() * pairs_.size()) {
        throw ShapeMismatch("coupled state needs one pointer center per pair per arm configuration");
    }
}

CoupledState evolve(const StateVector &pre, double lambda, double sigma) {
    if (!(lambda >= 0) || !std::isfinite(lambda)) {
        throw InvalidArgument("coupling lambda must be non-negative");
    }
    check_sigma(sigma);
    const RegisterShape &shape = pre.shape();
    auto pairs = all_pairs(shape.num_particles());
    std::vector<double> centers(shape.dimension() * pairs.size());
    for (size_t c = 0; c < shape.dimension(); c++) {
        for (size_t p = 0; p < pairs.size(); p++) {
            bool shared = shape.digit(c, pairs[p].i) == shape.digit(c, pairs[p].j);
            centers[c * pairs.size() + p] = shared ? lambda : 0.0;
        }
    }
    return CoupledState(pre, std::move(pairs), std::move(centers), sigma);
}

PointerMarginals postselect(const CoupledState &state, const StateVector &post) {
    auto bs = branches(state, post);
    double sigma = state.sigma();
    PointerMarginals out{};
    out.success_probability = branch_norm2(bs, sigma);
    if (out.success_probability <= kOrthogonalThreshold) {
        throw ImpossiblePostselection("post-selection success probability vanishes");
    }
    for (size_t p = 0; p < state.pairs().size(); p++) {
        Complex acc = 0;
        for (const auto &a : bs) {
            for (const auto &b : bs) {
                acc += std::conj(a.weight) * b.weight * (0.5 * (a.centers[p] + b.centers[p])) *
                       overlap_product(a, b, sigma);
            }
        }
        out.pairs.push_back({state.pairs()[p], acc.real() / out.success_probability});
    }
    return out;
}

PointerMarginals unconditioned(const CoupledState &state) {
    PointerMarginals out{};
    out.success_probability = 1;
    double total = state.norm2();
    for (size_t p = 0; p < state.pairs().size(); p++) {
        double acc = 0;
        for (size_t c = 0; c < state.shape().dimension(); c++) {
            acc += state.arm_probability(c) * state.center(c, p);
        }
        out.pairs.push_back({state.pairs()[p], acc / total});
    }
    return out;
}

std::vector<std::pair<double, double>> pointer_density(const CoupledState &state,
                                                       const std::optional<StateVector> &post, size_t pair,
                                                       double x_min, double x_max, size_t points) {
    if (pair >= state.pairs().size()) {
        throw InvalidArgument("pointer_density: pair index out of range");
    }
    if (points < 2 || !(x_max > x_min)) {
        throw InvalidArgument("pointer_density: need at least 2 points on a non-empty range");
    }
    double sigma = state.sigma();
    std::vector<std::pair<double, double>> out;
    out.reserve(points);
    auto grid = [&](size_t k) {
        return x_min + (x_max - x_min) * static_cast<double>(k) / static_cast<double>(points - 1);
    };
    if (!post) {
        double total = state.norm2();
        for (size_t k = 0; k < points; k++) {
            double x = grid(k);
            double acc = 0;
            for (size_t c = 0; c < state.shape().dimension(); c++) {
                double a = gaussian_amplitude(x, state.center(c, pair), sigma);
                acc += state.arm_probability(c) * a * a;
            }
            out.emplace_back(x, acc / total);
        }
        return out;
    }
    auto bs = branches(state, *post);
    double norm = branch_norm2(bs, sigma);
    if (norm <= kOrthogonalThreshold) {
        throw ImpossiblePostselection("post-selection success probability vanishes");
    }
    for (size_t k = 0; k < points; k++) {
        double x = grid(k);
        Complex acc = 0;
        for (const auto &a : bs) {
            for (const auto &b : bs) {
                acc += std::conj(a.weight) * b.weight * gaussian_amplitude(x, a.centers[pair], sigma) *
                       gaussian_amplitude(x, b.centers[pair], sigma) * overlap_product(a, b, sigma, pair);
            }
        }
        out.emplace_back(x, acc.real() / norm);
    }
    return out;
}

Complex postselected_pointer_amplitude(const CoupledState &state, const StateVector &post, std::span<const double> x) {
    if (x.size() != state.pairs().size()) {
        throw InvalidArgument("need one pointer coordinate per pair");
    }
    Complex acc = 0;
    for (const auto &b : branches(state, post)) {
        double phi = 1;
        for (size_t p = 0; p < x.size(); p++) {
            phi *= gaussian_amplitude(x[p], b.centers[p], state.sigma());
        }
        acc += b.weight * phi;
    }
    return acc;
}

Complex first_order_pointer_amplitude(const StateVector &pre, const StateVector &post, double lambda, double sigma,
                                      std::span<const double> x) {
    require_same_shape(pre.shape(), post.shape(), "first_order_pointer_amplitude");
    check_sigma(sigma);
    auto pairs = all_pairs(pre.shape().num_particles());
    if (x.size() != pairs.size()) {
        throw InvalidArgument("need one pointer coordinate per pair");
    }
    double phi = 1;
    for (double xp : x) {
        phi *= gaussian_amplitude(xp, 0, sigma);
    }
    Complex acc = inner(post, pre) * phi;
    for (size_t p = 0; p < pairs.size(); p++) {
        Complex coefficient = inner(post, apply(ProjectorSpec::same_pair(pre.shape(), pairs[p].i, pairs[p].j), pre));
        // d/dx exp(-x^2 / 4 sigma^2) = -x / (2 sigma^2) * exp(...)
        double derivative = -x[p] / (2 * sigma * sigma) * phi;
        acc -= lambda * coefficient * derivative;
    }
    return acc;
}

double first_order_check(const StateVector &pre, const StateVector &post) {
    require_same_shape(pre.shape(), post.shape(), "first_order_check");
    double worst = 0;
    for (const auto &pair : all_pairs(pre.shape().num_particles())) {
        auto projector = ProjectorSpec::same_pair(pre.shape(), pair.i, pair.j);
        worst = std::max(worst, std::abs(inner(post, apply(projector, pre))));
    }
    return worst;
}

std::optional<double> ScanResult::slope() const {
    std::optional<double> out;
    for (const auto &f : fits) {
        if (f.slope && (!out || *f.slope < *out)) {
            out = f.slope;
        }
    }
    return out;
}

double fit_loglog_slope(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw InvalidArgument("fit: x and y lengths differ");
    }
    if (xs.size() < 2) {
        throw InsufficientPoints("insufficient points for fit");
    }
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t k = 0; k < xs.size(); k++) {
        double lx = std::log(xs[k]);
        double ly = std::log(std::abs(ys[k]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double denom = n * sxx - sx * sx;
    if (std::abs(denom) <= 0) {
        throw InsufficientPoints("insufficient distinct points for fit");
    }
    return (n * sxy - sx * sy) / denom;
}

ScanResult deflection_scan(const StateVector &pre, const std::optional<StateVector> &post,
                           std::span<const double> lambdas, double sigma) {
    check_sigma(sigma);
    if (lambdas.size() < 2) {
        throw InsufficientPoints("insufficient points for fit: need at least 2 lambda values");
    }
    double lo = lambdas[0], hi = lambdas[0];
    for (double l : lambdas) {
        if (!(l > 0) || !std::isfinite(l)) {
            throw InvalidArgument("lambda values must be positive");
        }
        lo = std::min(lo, l);
        hi = std::max(hi, l);
    }
    if (hi < 10 * lo * (1 - 1e-12)) {
        throw InsufficientPoints("lambda values must span at least one decade");
    }

    ScanResult result{};
    result.sigma = sigma;
    result.postselected = post.has_value();
    result.pairs = all_pairs(pre.shape().num_particles());
    for (double l : lambdas) {
        CoupledState cs = evolve(pre, l, sigma);
        PointerMarginals m = post ? postselect(cs, *post) : unconditioned(cs);
        ScanRow row{l, {}, l > kWeakCouplingRatio * sigma};
        for (const auto &pm : m.pairs) {
            row.shifts.push_back(pm.mean_shift);
        }
        result.rows.push_back(std::move(row));
    }
    for (size_t p = 0; p < result.pairs.size(); p++) {
        std::vector<double> xs, ys;
        PairFit fit{result.pairs[p], std::nullopt, 0, 0};
        for (const auto &row : result.rows) {
            if (std::abs(row.shifts[p]) < kShiftFloor) {
                fit.points_excluded++;
                continue;
            }
            xs.push_back(row.lambda);
            ys.push_back(row.shifts[p]);
        }
        fit.points_used = xs.size();
        if (xs.size() >= 2) {
            fit.slope = fit_loglog_slope(xs, ys);
        }
        result.fits.push_back(fit);
    }
    return result;
}

std::string deflection_verdict(const std::optional<double> &slope) {
    if (!slope) {
        return "no deflection";
    }
    if (*slope >= kSecondOrderSlope - kSecondOrderSlopeTol) {
        return "no first-order deflection";
    }
    if (std::abs(*slope - kFirstOrderSlope) <= kFirstOrderSlopeTol) {
        return "first-order deflection";
    }
    return "inconclusive";
}

}  // namespace pigeonsim
