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

#include "mplindex/dummy.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/QR>

#include "mplindex/errors.hpp"
#include "mplindex/structured.hpp"

namespace mplindex {
namespace {

// Union-find over items [0, N) and units [N, N + T) joined by present cells.
class Components {
 public:
  explicit Components(std::size_t size) : parent_(size) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t Find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void Join(std::size_t a, std::size_t b) { parent_[Find(a)] = Find(b); }

 private:
  std::vector<std::size_t> parent_;
};

void CheckConnected(const Panel& panel) {
  const auto n = static_cast<std::size_t>(panel.num_items());
  const auto t = static_cast<std::size_t>(panel.num_units());
  Components comp(n + t);
  for (std::size_t j = 0; j < t; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (panel.present()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) {
        comp.Join(i, n + j);
      }
    }
  }
  std::vector<std::vector<std::string>> groups;
  std::vector<std::size_t> group_of(n + t, SIZE_MAX);
  for (std::size_t j = 0; j < t; ++j) {
    const auto root = comp.Find(n + j);
    if (group_of[root] == SIZE_MAX) {
      group_of[root] = groups.size();
      groups.emplace_back();
    }
    groups[group_of[root]].push_back(panel.units()[j]);
  }
  if (groups.size() > 1) {
    std::ostringstream msg;
    msg << "presence graph is disconnected; unit components:";
    for (const auto& g : groups) {
      msg << " {";
      for (std::size_t k = 0; k < g.size(); ++k) msg << (k ? "," : "") << g[k];
      msg << "}";
    }
    throw UnidentifiedModel(msg.str());
  }
}

}  // namespace

DummyFit FitDummyIndex(const Panel& panel, bool weighted) {
  const auto n = panel.num_items();
  const auto t = panel.num_units();
  if (t < 2) throw InvalidDimension("dummy regression needs at least two units");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!panel.present().row(i).any()) {
      throw UnidentifiedModel("item '" + panel.items()[i] + "' is never observed");
    }
  }
  CheckConnected(panel);

  const auto order = BaseFirstOrder(panel);
  std::vector<Eigen::Index> unit_col(static_cast<std::size_t>(t), -1);
  for (std::size_t k = 1; k < order.size(); ++k) {
    unit_col[order[k]] = static_cast<Eigen::Index>(k - 1);
  }

  const auto m = panel.num_present();
  const auto p = (t - 1) + n;
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(m, p);
  Eigen::VectorXd y(m), w(m);
  const Eigen::RowVectorXd unit_totals = panel.values().colwise().sum();
  Eigen::Index row = 0;
  for (Eigen::Index j = 0; j < t; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!panel.present()(i, j)) continue;
      const double price = panel.values()(i, j) / panel.quantities()(i, j);
      if (!(price > 0.0) || !std::isfinite(price)) {
        throw InvalidPrice("non-positive price for (" + panel.items()[i] + ", " +
                           panel.units()[j] + ")");
      }
      y(row) = std::log(price);
      w(row) = weighted ? panel.values()(i, j) / unit_totals(j) : 1.0;
      if (unit_col[static_cast<std::size_t>(j)] >= 0) x(row, unit_col[static_cast<std::size_t>(j)]) = 1.0;
      x(row, t - 1 + i) = 1.0;
      ++row;
    }
  }

  const Eigen::VectorXd sw = w.cwiseSqrt();
  const Eigen::MatrixXd xw = sw.asDiagonal() * x;
  const Eigen::VectorXd yw = sw.cwiseProduct(y);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xw);
  qr.setThreshold(kPivotTolerance);
  if (qr.rank() < p) throw UnidentifiedModel("dummy regression design is rank deficient");
  const Eigen::VectorXd beta = qr.solve(yw);
  const double ssr = (yw - xw * beta).squaredNorm();

  DummyFit fit;
  fit.units = panel.units();
  fit.base_unit = panel.base_unit();
  fit.weighted = weighted;
  fit.dof = m - p;
  if (fit.dof > 0) fit.sigma2 = ssr / static_cast<double>(fit.dof);

  const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  const auto& perm = qr.colsPermutation();
  const Eigen::MatrixXd xtwx_inv = perm * (r_inv * r_inv.transpose()) * perm.transpose();

  fit.log_unit_effects = Eigen::VectorXd::Zero(t);
  fit.se = Eigen::VectorXd::Zero(t);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (Eigen::Index j = 0; j < t; ++j) {
    const auto c = unit_col[static_cast<std::size_t>(j)];
    if (c < 0) continue;
    fit.log_unit_effects(j) = beta(c);
    fit.se(j) = fit.sigma2 ? std::sqrt(*fit.sigma2 * xtwx_inv(c, c)) : nan;
  }
  fit.indexes = fit.log_unit_effects.array().exp().matrix();
  fit.item_effects = beta.tail(n);
  return fit;
}

}  // namespace mplindex
