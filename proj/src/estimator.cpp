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

#include "mplindex/estimator.hpp"

#include <cmath>
#include <limits>

#include "mplindex/errors.hpp"

namespace mplindex {

const char* ToString(VarianceMethod method) {
  return method == VarianceMethod::kCorollary3 ? "corollary3" : "full";
}

VarianceMethod ParseVarianceMethod(const std::string& text) {
  if (text == "corollary3") return VarianceMethod::kCorollary3;
  if (text == "full" || text == "full_partition") return VarianceMethod::kFullPartition;
  throw ValidationError("unknown variance method '" + text + "' (expected corollary3|full)");
}

Eigen::VectorXd PseudoReciprocal(const Eigen::VectorXd& v) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = v(i) != 0.0 ? 1.0 / v(i) : 0.0;
  return out;
}

namespace {

double ResidualSumOfSquares(const Panel& panel, const Eigen::VectorXd& deflators,
                            const Eigen::VectorXd& prices) {
  const Eigen::MatrixXd fitted = prices.asDiagonal() * panel.quantities();
  const Eigen::MatrixXd deflated = panel.values() * deflators.asDiagonal();
  return (deflated - fitted).squaredNorm();
}

void RefreshCovariance(DeflatorEstimate& est) {
  const bool defined = est.deflator_sigma2.size() > 0 && est.deflator_sigma2.allFinite();
  est.cov_deflators = defined ? DeflatorCovariance(est, est.variance_method) : Eigen::MatrixXd();
}

}  // namespace

DeflatorEstimate EstimateDeflators(const Panel& panel, const EstimateOptions& options) {
  if (panel.num_units() < 2) throw InvalidDimension("estimation needs at least two units");
  CheckBasket(panel);
  return EstimateFromNormalBlocks(panel, BuildNormalBlocks(panel), options);
}

DeflatorEstimate EstimateFromNormalBlocks(const Panel& panel, const NormalBlocks& blocks,
                                          const EstimateOptions& options) {
  const auto solution = SolveSchur(blocks);
  const auto order = BaseFirstOrder(panel);

  DeflatorEstimate est;
  est.units = panel.units();
  est.base_unit = panel.base_unit();
  est.mode = panel.mode();
  est.variance_method = options.variance;
  est.dof_rule = options.dof;
  est.deflators = Eigen::VectorXd::Ones(panel.num_units());
  for (std::size_t k = 1; k < order.size(); ++k) {
    est.deflators(static_cast<Eigen::Index>(order[k])) =
        solution.deflators(static_cast<Eigen::Index>(k - 1));
    est.nonbase_units.push_back(order[k]);
  }
  est.indexes = PseudoReciprocal(est.deflators);
  est.ref_prices = solution.prices;
  est.ssr = ResidualSumOfSquares(panel, est.deflators, est.ref_prices);
  est.dof = ResidualDof(panel, options.dof);
  if (est.dof > 0) est.sigma2 = est.ssr / static_cast<double>(est.dof);
  est.lambda11 = solution.l11;
  est.deflator_sq_norms = blocks.deflator_diag;
  est.deflator_sigma2 = Eigen::VectorXd::Constant(
      blocks.deflator_diag.size(),
      est.sigma2.value_or(std::numeric_limits<double>::quiet_NaN()));
  RefreshCovariance(est);
  return est;
}

DeflatorEstimate BaseOnlyEstimate(const Panel& panel, const EstimateOptions& options) {
  if (panel.num_units() != 1) throw InvalidDimension("base-only estimate needs a single unit");
  DeflatorEstimate est;
  est.units = panel.units();
  est.base_unit = 0;
  est.mode = panel.mode();
  est.variance_method = options.variance;
  est.dof_rule = options.dof;
  est.deflators = Eigen::VectorXd::Ones(1);
  est.indexes = Eigen::VectorXd::Ones(1);
  est.ref_prices = ImpliedPrices(panel).prices.col(0);
  est.dof = 0;
  est.lambda11.resize(0, 0);
  est.deflator_sq_norms.resize(0);
  est.deflator_sigma2.resize(0);
  return est;
}

Eigen::MatrixXd DeflatorCovariance(const DeflatorEstimate& estimate, VarianceMethod method) {
  const auto d = estimate.deflator_sigma2.size();
  if (!estimate.deflator_sigma2.allFinite()) {
    throw UndefinedVariance("residual variance is undefined (zero residual degrees of freedom)");
  }
  const Eigen::VectorXd scale = estimate.deflator_sigma2.cwiseSqrt();
  if (method == VarianceMethod::kCorollary3) {
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
      cov(k, k) = estimate.deflator_sigma2(k) / estimate.deflator_sq_norms(k);
    }
    return cov;
  }
  return scale.asDiagonal() * estimate.lambda11 * scale.asDiagonal();
}

Eigen::VectorXd IndexVariance(const DeflatorEstimate& estimate, VarianceMethod method) {
  const Eigen::MatrixXd cov = DeflatorCovariance(estimate, method);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(estimate.num_units());
  for (std::size_t k = 0; k < estimate.nonbase_units.size(); ++k) {
    const auto t = static_cast<Eigen::Index>(estimate.nonbase_units[k]);
    const double delta = estimate.deflators(t);
    if (delta == 0.0) {
      throw DegenerateDeflator("deflator of unit '" + estimate.units[estimate.nonbase_units[k]] +
                               "' is zero");
    }
    const auto kk = static_cast<Eigen::Index>(k);
    out(t) = cov(kk, kk) / std::pow(delta, 4);
  }
  return out;
}

IndexSeries ToIndexSeries(const DeflatorEstimate& estimate, double k) {
  IndexSeries s;
  s.units = estimate.units;
  s.mode = estimate.mode;
  s.k = k;
  s.index = estimate.indexes;
  const auto t = estimate.num_units();
  if (estimate.deflator_sigma2.size() == 0 || estimate.deflator_sigma2.allFinite()) {
    s.se = IndexVariance(estimate, estimate.variance_method).cwiseSqrt();
  } else {
    s.se = Eigen::VectorXd::Constant(t, std::numeric_limits<double>::quiet_NaN());
    s.se(static_cast<Eigen::Index>(estimate.base_unit)) = 0.0;
  }
  s.lo = s.index - k * s.se;
  s.hi = s.index + k * s.se;
  if (estimate.mode == Mode::kTime) {
    s.pct_change.assign(static_cast<std::size_t>(t), std::nullopt);
    for (Eigen::Index j = 1; j < t; ++j) {
      if (s.index(j - 1) != 0.0) {
        s.pct_change[static_cast<std::size_t>(j)] = (s.index(j) / s.index(j - 1) - 1.0) * 100.0;
      }
    }
  }
  return s;
}

DeflatorEstimate WithVarianceMethod(DeflatorEstimate estimate, VarianceMethod method) {
  estimate.variance_method = method;
  RefreshCovariance(estimate);
  return estimate;
}

}  // namespace mplindex
