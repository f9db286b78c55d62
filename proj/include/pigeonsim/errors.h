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

#ifndef PIGEONSIM_ERRORS_H
#define PIGEONSIM_ERRORS_H

#include <stdexcept>
#include <string>

namespace pigeonsim {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed register shape, out-of-range particle/box index, bad argument.
struct InvalidArgument : Error {
    using Error::Error;
};

/// Operands built over different register shapes.
struct ShapeMismatch : Error {
    using Error::Error;
};

/// Register dimension M^N above the configured cap.
struct DimensionCapExceeded : Error {
    using Error::Error;
};

/// The post-selected state cannot be reached through any measurement outcome.
struct ImpossiblePostselection : Error {
    using Error::Error;
};

/// Weak value requested on an orthogonal pre/post pair.
struct UndefinedWeakValue : Error {
    using Error::Error;
};

/// Too few usable points for a log-log fit.
struct InsufficientPoints : Error {
    using Error::Error;
};

}  // namespace pigeonsim

#endif
