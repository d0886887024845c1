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

#ifndef MPLINDEX_ESTIMATOR_HPP_
#define MPLINDEX_ESTIMATOR_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mplindex/panel.hpp"
#include "mplindex/structured.hpp"

namespace mplindex {

// kCorollary3 ignores the Schur correction and gives the diagonal
// sigma^2 / (v_t'v_t). kFullPartition is sigma^2 times the deflator block of
// (X'X)^{-1}.
enum class VarianceMethod { kCorollary3, kFullPartition };

const char* ToString(VarianceMethod method);
VarianceMethod ParseVarianceMethod(const std::string& text);

struct EstimateOptions {
  VarianceMethod variance = VarianceMethod::kFullPartition;
  DofRule dof = DofRule::kPaper;
};

// Deflators and indexes are in panel unit order with the base fixed at 1.
// Covariance-related members cover the non-base units listed in
// `nonbase_units`, in that order.
struct DeflatorEstimate {
  std::vector<std::string> units;
  std::size_t base_unit = 0;
  Mode mode = Mode::kTime;
  Eigen::VectorXd deflators;
  Eigen::VectorXd indexes;
  Eigen::VectorXd ref_prices;
  std::optional<double> sigma2;
  Eigen::Index dof = 0;
  double ssr = 0.0;
  VarianceMethod variance_method = VarianceMethod::kFullPartition;
  DofRule dof_rule = DofRule::kPaper;

  std::vector<std::size_t> nonbase_units;
  Eigen::MatrixXd lambda11;             // deflator block of (X'X)^{-1}
  Eigen::VectorXd deflator_sq_norms;    // v_t'v_t per non-base unit
  // Residual variance attached to each non-base deflator. All equal to
  // sigma2 after a batch fit; after a multiperiod update older entries keep
  // the variance they were estimated with. NaN where undefined.
  Eigen::VectorXd deflator_sigma2;
  Eigen::MatrixXd cov_deflators;        // empty when variance is undefined
  bool covariance_stale = false;

  Eigen::Index num_units() const { return deflators.size(); }
};

// 1/x for nonzero entries, 0 otherwise.
Eigen::VectorXd PseudoReciprocal(const Eigen::VectorXd& v);

DeflatorEstimate EstimateDeflators(const Panel& panel, const EstimateOptions& options = {});

// Solves pre-built normal-equation blocks (base-first layout of `panel`)
// and packages the result. EstimateDeflators is this on
// BuildNormalBlocks(panel).
DeflatorEstimate EstimateFromNormalBlocks(const Panel& panel, const NormalBlocks& blocks,
                                          const EstimateOptions& options);

// A one-unit estimate holding only the base (deflator 1). Seeds a chain of
// multiperiod updates.
DeflatorEstimate BaseOnlyEstimate(const Panel& panel, const EstimateOptions& options = {});

Eigen::MatrixXd DeflatorCovariance(const DeflatorEstimate& estimate, VarianceMethod method);

// First-order approximation var(lambda_t) = var(delta_t) / delta_t^4, in panel
// unit order with 0 at the base.
Eigen::VectorXd IndexVariance(const DeflatorEstimate& estimate, VarianceMethod method);

struct IndexSeries {
  std::vector<std::string> units;
  Mode mode = Mode::kTime;
  double k = 3.0;
  Eigen::VectorXd index;
  Eigen::VectorXd se;  // NaN where undefined
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
  // Percentage change on the previous unit; time mode only, first entry empty.
  std::vector<std::optional<double>> pct_change;
};

IndexSeries ToIndexSeries(const DeflatorEstimate& estimate, double k = 3.0);

// Copies of the covariance members recomputed for `method`.
DeflatorEstimate WithVarianceMethod(DeflatorEstimate estimate, VarianceMethod method);

}  // namespace mplindex

#endif  // MPLINDEX_ESTIMATOR_HPP_
