// Copyright 2026 The mplindex Authors. All Rights Reserved.
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

#ifndef MPLINDEX_UPDATING_HPP_
#define MPLINDEX_UPDATING_HPP_

#include <vector>

#include "mplindex/estimator.hpp"
#include "mplindex/panel.hpp"

namespace mplindex {

struct UpdateResult {
  DeflatorEstimate estimate;  // over T + 1 units
  Panel panel;                // the extended panel
  // True where a previously published index differs from its prior value;
  // the new unit is always marked.
  std::vector<bool> changed_mask;
};

// Adds a country and re-estimates every deflator jointly. Equivalent to
// EstimateDeflators on the extended panel; computed by extending the
// normal-equation blocks of `panel` with the new unit.
UpdateResult UpdateMultilateral(const Panel& panel, const NewUnit& unit,
                                const EstimateOptions& options = {});

// Adds a period while keeping every earlier deflator fixed at its value in
// `prior`. Only the new deflator and the reference prices are fitted, on
// the system (V diag(delta~), 0) = D_p Q-blocks with delta~ = prior
// deflators. Earlier covariances are carried over and flagged stale.
UpdateResult UpdateMultiperiod(const DeflatorEstimate& prior, const Panel& panel,
                               const NewUnit& period);

}  // namespace mplindex

#endif  // MPLINDEX_UPDATING_HPP_
