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

#ifndef PIGEONSIM_REPORT_IO_H
#define PIGEONSIM_REPORT_IO_H

#include <string>

#include "json.hpp"
#include "pigeonsim/montecarlo.h"
#include "pigeonsim/pigeonhole.h"
#include "pigeonsim/qstate.h"
#include "pigeonsim/weakcoupling.h"

namespace pigeonsim {

// Every number written by these functions is rounded to 15 significant digits.

/// Rounds to 15 significant digits.
double sig15(double x);
std::string format15(double x);

/// {"num_particles", "num_boxes", "amplitudes": [[re, im], ...]}
nlohmann::json to_json(const StateVector &state);
StateVector state_from_json(const nlohmann::json &j);

nlohmann::json to_json(const Scenario &scenario);
nlohmann::json to_json(const CorrelationPattern &pattern);
nlohmann::json to_json(const GeneralReport &report);
nlohmann::json to_json(const OracleReport &report, const RunConfig &cfg);
nlohmann::json to_json(const ScanResult &scan);

/// Header: meas_1..meas_K, final_1..final_N, selected, count. Rows in key order, observed cells only.
std::string counts_csv(const RunConfig &cfg, const CountsTable &table);

/// Header: lambda, shift_<i>_<j> per pair, strong_coupling.
std::string scan_csv(const ScanResult &scan);

}  // namespace pigeonsim

#endif
