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

#ifndef PIGEONSIM_WEAKCOUPLING_H
#define PIGEONSIM_WEAKCOUPLING_H

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pigeonsim/qstate.h"

namespace pigeonsim {

// Pointer model
// -------------
// Every unordered particle pair (i, j) owns a one-dimensional pointer, initially a real Gaussian
// phi(x) = (2 pi sigma^2)^(-1/4) exp(-x^2 / (4 sigma^2)) so that |phi|^2 has standard deviation sigma.
// The interaction lambda * sum_{i<j} same(i,j) (x) K_ij, with K_ij the generator of translations of
// pointer (i, j), is diagonal in the arm configuration: it translates pointer (i, j) by lambda in
// every configuration where i and j share a box. The same pointer describes a beam deflection or a
// spectral line shift.

/// (2 pi sigma^2)^(-1/4) exp(-(x - center)^2 / (4 sigma^2)).
double gaussian_amplitude(double x, double center, double sigma);

/// <phi_a|phi_b> = exp(-(a - b)^2 / (8 sigma^2)).
double gaussian_overlap(double a, double b, double sigma);

struct PointerTerm {
    Complex weight;
    double center;
};

/// Finite superposition of equal-width shifted Gaussians.
class PointerState {
   public:
    PointerState(std::vector<PointerTerm> terms, double sigma);
    static PointerState gaussian(double center, double sigma);

    double sigma() const {
        return sigma_;
    }
    const std::vector<PointerTerm> &terms() const {
        return terms_;
    }

    double norm2() const;
    /// <x> of the normalized state.
    double mean() const;
    Complex amplitude(double x) const;
    /// |psi(x)|^2 of the normalized state.
    double density(double x) const;
    PointerState translated(double shift) const;

   private:
    std::vector<PointerTerm> terms_;
    double sigma_;
};

struct ParticlePair {
    size_t i;
    size_t j;
};

/// Lexicographic list of all unordered pairs of an N-particle register.
std::vector<ParticlePair> all_pairs(size_t num_particles);

/// Arm amplitudes times one pointer per pair per arm configuration.
class CoupledState {
   public:
    CoupledState(StateVector arms, std::vector<ParticlePair> pairs, std::vector<double> centers, double sigma);

    const RegisterShape &shape() const {
        return arms_.shape();
    }
    const StateVector &arms() const {
        return arms_;
    }
    const std::vector<ParticlePair> &pairs() const {
        return pairs_;
    }
    double sigma() const {
        return sigma_;
    }
    double center(size_t config, size_t pair) const {
        return centers_[config * pairs_.size() + pair];
    }
    PointerState pointer(size_t config, size_t pair) const {
        return PointerState::gaussian(center(config, pair), sigma_);
    }
    /// Probability of an arm configuration before any post-selection.
    double arm_probability(size_t config) const {
        return std::norm(arms_[config]);
    }
    /// Norm squared of the full state; pointers are normalized so this is the arm norm.
    double norm2() const {
        return arms_.norm2();
    }

   private:
    StateVector arms_;
    std::vector<ParticlePair> pairs_;
    std::vector<double> centers_;
    double sigma_;
};

/// Exact evolution under the pairwise same-box coupling with strength `lambda` (lambda * T, dimensionless).
CoupledState evolve(const StateVector &pre, double lambda, double sigma);

struct PairMarginal {
    ParticlePair pair;
    double mean_shift;
};

struct PointerMarginals {
    double success_probability;
    std::vector<PairMarginal> pairs;
};

/// Contracts the arms against `post` and returns each pair pointer's mean displacement together with
/// the post-selection success probability. Throws ImpossiblePostselection when that probability is at
/// most 1e-14.
PointerMarginals postselect(const CoupledState &state, const StateVector &post);

/// No post-selection: the arm degree of freedom is traced out.
PointerMarginals unconditioned(const CoupledState &state);

/// Sampled marginal density (x, |psi(x)|^2) of one pair pointer, with or without post-selection.
std::vector<std::pair<double, double>> pointer_density(const CoupledState &state,
                                                       const std::optional<StateVector> &post, size_t pair,
                                                       double x_min, double x_max, size_t points);

/// Unnormalized post-selected joint pointer wavefunction <post| e^{-iHT} |pre>|phi> at pointer
/// coordinates x (one per pair).
Complex postselected_pointer_amplitude(const CoupledState &state, const StateVector &post, std::span<const double> x);

/// First-order expansion of the same amplitude:
/// <post|pre> phi(x) - lambda sum_p <post|same_p|pre> d/dx_p phi(x).
Complex first_order_pointer_amplitude(const StateVector &pre, const StateVector &post, double lambda, double sigma,
                                      std::span<const double> x);

/// max over pairs of |<post| same(i,j) |pre>|, the coefficient of the first-order interaction term.
double first_order_check(const StateVector &pre, const StateVector &post);

struct ScanRow {
    double lambda;
    std::vector<double> shifts;
    bool strong_coupling;
};

struct PairFit {
    ParticlePair pair;
    std::optional<double> slope;
    size_t points_used;
    size_t points_excluded;
};

struct ScanResult {
    double sigma;
    bool postselected;
    std::vector<ParticlePair> pairs;
    std::vector<ScanRow> rows;
    std::vector<PairFit> fits;

    /// Smallest fitted slope over pairs (the leading order of the strongest response), if any pair has a fit.
    std::optional<double> slope() const;
};

/// Least-squares slope of log|y| against log x.
double fit_loglog_slope(std::span<const double> xs, std::span<const double> ys);

/// Mean pointer shift per pair across `lambdas`, with a log-log fit per pair.
/// Requires at least two positive lambdas spanning a decade and sigma > 0. Shifts below 1e-15 are left
/// out of the fit and counted as excluded.
ScanResult deflection_scan(const StateVector &pre, const std::optional<StateVector> &post,
                           std::span<const double> lambdas, double sigma);

/// "no first-order deflection", "first-order deflection", "no deflection" or "inconclusive".
std::string deflection_verdict(const std::optional<double> &slope);

}  // namespace pigeonsim

#endif
