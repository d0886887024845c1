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

#include "mplindex/updating.hpp"

#include <limits>
#include <string>
#include <utility>

#include "mplindex/errors.hpp"
#include "mplindex/structured.hpp"

namespace mplindex {

UpdateResult UpdateMultilateral(const Panel& panel, const NewUnit& unit,
                                const EstimateOptions& options) {
  Panel extended = panel.AppendUnit(unit.label, unit.values, unit.quantities);
  CheckBasket(extended);

  // Normal blocks of the current panel, grown by the new country: one more
  // diagonal deflator entry, one more cross row, and q_new^2 added to the
  // price diagonal.
  NormalBlocks blocks = BuildNormalBlocks(panel);
  const auto d = blocks.deflator_diag.size();
  blocks.deflator_diag.conservativeResize(d + 1);
  blocks.deflator_diag(d) = unit.values.squaredNorm();
  blocks.cross.conservativeResize(d + 1, Eigen::NoChange);
  blocks.cross.row(d) = unit.quantities.cwiseProduct(unit.values).transpose();
  const Eigen::RowVectorXd q_new_sq = unit.quantities.cwiseAbs2().transpose();
  blocks.others_q_sq.rowwise() += q_new_sq;
  blocks.others_q_sq.conservativeResize(d + 1, Eigen::NoChange);
  blocks.others_q_sq.row(d) = blocks.price_diag.transpose();
  blocks.value_sq.conservativeResize(d + 1, Eigen::NoChange);
  blocks.value_sq.row(d) = unit.values.cwiseAbs2().transpose();
  blocks.price_diag += q_new_sq.transpose();
  blocks.deflator_labels.push_back(unit.label);

  DeflatorEstimate estimate = EstimateFromNormalBlocks(extended, blocks, options);

  const auto t = static_cast<std::size_t>(panel.num_units());
  std::vector<bool> changed(t + 1, true);
  bool prior_ok = true;
  try {
    CheckBasket(panel);
  } catch (const BasketViolation&) {
    prior_ok = false;  // no published prior indexes to compare against
  }
  if (prior_ok && panel.num_units() >= 2) {
    const auto prior = EstimateDeflators(panel, options);
    for (std::size_t j = 0; j < t; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      changed[j] = prior.indexes(jj) != estimate.indexes(jj);
    }
  }
  return UpdateResult{std::move(estimate), std::move(extended), std::move(changed)};
}

UpdateResult UpdateMultiperiod(const DeflatorEstimate& prior, const Panel& panel,
                               const NewUnit& period) {
  if (prior.num_units() != panel.num_units()) {
    throw InvalidDimension("prior estimate covers " + std::to_string(prior.num_units()) +
                           " units but the panel has " + std::to_string(panel.num_units()));
  }
  Panel extended = panel.AppendUnit(period.label, period.values, period.quantities);
  CheckBasket(extended);

  const auto& v = panel.values();
  const auto& q = panel.quantities();
  const Eigen::VectorXd& v_new = period.values;
  const Eigen::VectorXd& q_new = period.quantities;
  const Eigen::VectorXd& fixed = prior.deflators;

  const Eigen::ArrayXd prior_q_sq = q.rowwise().squaredNorm().array();
  const Eigen::ArrayXd price_diag = prior_q_sq + q_new.array().square();
  const Eigen::VectorXd carried = q.cwiseProduct(v) * fixed;  // (Q * V) delta~
  const Eigen::VectorXd cross = q_new.cwiseProduct(v_new);

  // v'v - sum_i s_i^2 / D_i, written without the subtraction.
  const double vv = v_new.squaredNorm();
  const double schur = (v_new.array().square() * prior_q_sq / price_diag).sum();
  if (!(schur > kPivotTolerance * vv)) {
    throw DegenerateDeflator("Schur complement for period '" + period.label +
                             "' vanishes; its deflator is not identified");
  }
  const double delta_new = (cross.array() * carried.array() / price_diag).sum() / schur;
  const Eigen::VectorXd prices =
      ((carried + cross * delta_new).array() / price_diag).matrix();

  const Eigen::MatrixXd fitted = prices.asDiagonal() * q;
  double ssr = (v * fixed.asDiagonal() - fitted).squaredNorm();
  ssr += (v_new * delta_new - prices.cwiseProduct(q_new)).squaredNorm();

  const auto n = panel.num_items();
  const auto t = panel.num_units();
  const auto cells = prior.dof_rule == DofRule::kPaper ? n * (t + 1) : extended.num_present();

  DeflatorEstimate est;
  est.units = extended.units();
  est.base_unit = prior.base_unit;
  est.mode = prior.mode;
  est.variance_method = prior.variance_method;
  est.dof_rule = prior.dof_rule;
  est.deflators.resize(t + 1);
  est.deflators << prior.deflators, delta_new;
  est.indexes.resize(t + 1);
  est.indexes << prior.indexes, PseudoReciprocal(Eigen::VectorXd::Constant(1, delta_new));
  est.ref_prices = prices;
  est.ssr = ssr;
  est.dof = cells - (n + 1);
  if (est.dof > 0) est.sigma2 = ssr / static_cast<double>(est.dof);

  est.nonbase_units = prior.nonbase_units;
  est.nonbase_units.push_back(static_cast<std::size_t>(t));
  const auto d = prior.lambda11.rows();
  est.lambda11 = Eigen::MatrixXd::Zero(d + 1, d + 1);
  est.lambda11.topLeftCorner(d, d) = prior.lambda11;
  est.lambda11(d, d) = 1.0 / schur;
  est.deflator_sq_norms.resize(d + 1);
  est.deflator_sq_norms << prior.deflator_sq_norms, vv;
  est.deflator_sigma2.resize(d + 1);
  est.deflator_sigma2 << prior.deflator_sigma2,
      est.sigma2.value_or(std::numeric_limits<double>::quiet_NaN());
  est = WithVarianceMethod(std::move(est), prior.variance_method);
  est.covariance_stale = d > 0;

  std::vector<bool> changed(static_cast<std::size_t>(t) + 1, false);
  changed.back() = true;
  return UpdateResult{std::move(est), std::move(extended), std::move(changed)};
}

}  // namespace mplindex
