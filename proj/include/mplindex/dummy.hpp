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

#ifndef MPLINDEX_DUMMY_HPP_
#define MPLINDEX_DUMMY_HPP_

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mplindex/panel.hpp"

namespace mplindex {

// Log-price dummy regression ln p_it = alpha_t + beta_i + u_it over present
// cells, with alpha at the base unit fixed to 0. In time mode this is the
// time-product-dummy (TPD) index, in space mode the country-product-dummy
// (CPD) index.
struct DummyFit {
  std::vector<std::string> units;
  std::size_t base_unit = 0;
  Eigen::VectorXd log_unit_effects;  // panel unit order, 0 at the base
  Eigen::VectorXd indexes;           // exp(log_unit_effects)
  Eigen::VectorXd item_effects;
  Eigen::VectorXd se;                // of log_unit_effects; NaN if dof <= 0
  std::optional<double> sigma2;
  Eigen::Index dof = 0;
  bool weighted = false;

  // Delta-method standard errors of the indexes: exp(alpha) se(alpha).
  Eigen::VectorXd IndexSe() const { return indexes.cwiseProduct(se); }
};

// weighted = true uses within-unit expenditure shares v_it / sum_i v_it as
// WLS weights.
DummyFit FitDummyIndex(const Panel& panel, bool weighted);

}  // namespace mplindex

#endif  // MPLINDEX_DUMMY_HPP_
