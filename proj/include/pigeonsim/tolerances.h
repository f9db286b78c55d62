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

#ifndef PIGEONSIM_TOLERANCES_H
#define PIGEONSIM_TOLERANCES_H

#include <cstddef>

namespace pigeonsim {

// Identities (idempotence, hermiticity, completeness, normalization) on registers of dimension <= 4096.
inline constexpr double kIdentityTol = 1e-12;
// Same identities above dimension 4096.
inline constexpr double kLargeDimIdentityTol = 1e-10;
inline constexpr size_t kLargeDimThreshold = 4096;

// Overlaps and ABL denominators at or below this are treated as exactly zero.
inline constexpr double kOrthogonalThreshold = 1e-14;

// SAME / DIFFERENT classification margin for pair probabilities.
inline constexpr double kPatternThreshold = 1e-10;

// Default register cap, overridable with PIGEONSIM_MAX_DIM.
inline constexpr size_t kDefaultMaxDimension = size_t{1} << 20;

// Pointer-shift scan.
inline constexpr double kShiftFloor = 1e-15;
inline constexpr double kWeakCouplingRatio = 0.1;  // lambda <= ratio * sigma
inline constexpr double kSecondOrderSlope = 2.0;
inline constexpr double kSecondOrderSlopeTol = 0.1;
inline constexpr double kFirstOrderSlope = 1.0;
inline constexpr double kFirstOrderSlopeTol = 0.05;

// Monte Carlo z-score bands.
inline constexpr double kZFlag = 4.0;
inline constexpr double kZFail = 5.0;

inline double identity_tol(size_t dimension) {
    return dimension <= kLargeDimThreshold ? kIdentityTol : kLargeDimIdentityTol;
}

}  // namespace pigeonsim

#endif
