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

#include <cmath>
#include <random>

#include <doctest.h>

#include <Eigen/Dense>

#include "mplindex/errors.hpp"
#include "mplindex/updating.hpp"
#include "test_support.hpp"

namespace mplindex {
namespace {

using testing::MakePanel;
using testing::MaxRelErr;
using testing::RandomPanel;
using testing::RelErr;

Panel F1() {
  Eigen::MatrixXd v(2, 2);
  v << 1, 2,  //
      2, 4;
  return MakePanel(v, Eigen::MatrixXd::Ones(2, 2));
}

NewUnit ColumnOf(const Panel& p, Eigen::Index j, const std::string& label) {
  return NewUnit{label, p.values().col(j), p.quantities().col(j)};
}

Panel Head(const Panel& p, Eigen::Index t) {
  std::vector<std::string> units(p.units().begin(), p.units().begin() + t);
  return Panel(p.items(), units, p.values().leftCols(t), p.quantities().leftCols(t), 0, p.mode());
}

// Least squares over (delta_new, prices) with the earlier deflators fixed.
Eigen::VectorXd ConstrainedOracle(const Panel& panel, const Eigen::VectorXd& fixed,
                                  const NewUnit& unit) {
  const auto n = panel.num_items(), t = panel.num_units();
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n * (t + 1), n + 1);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n * (t + 1));
  for (Eigen::Index j = 0; j < t; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      y(j * n + i) = panel.values()(i, j) * fixed(j);
      x(j * n + i, 1 + i) = panel.quantities()(i, j);
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    x(t * n + i, 0) = -unit.values(i);
    x(t * n + i, 1 + i) = unit.quantities(i);
  }
  return x.colPivHouseholderQr().solve(y);
}

TEST_SUITE("updating") {

TEST_CASE("new country with proportional prices") {
  const auto r = UpdateMultilateral(F1(), NewUnit{"t3", Eigen::Vector2d(3, 6),
                                                  Eigen::Vector2d(1, 1)});
  CHECK(MaxRelErr(r.estimate.indexes, Eigen::Vector3d(1, 2, 3)) <= 1e-14);
  CHECK(r.estimate.ssr <= 1e-24);
  CHECK(MaxRelErr(r.estimate.ref_prices, Eigen::Vector2d(1, 2)) <= 1e-14);
  CHECK(r.changed_mask.back());
  CHECK(r.panel.num_units() == 3);
}

TEST_CASE("new country duplicating the base") {
  const auto r = UpdateMultilateral(F1(), ColumnOf(F1(), 0, "dup"));
  CHECK(std::abs(r.estimate.indexes(2) - 1.0) <= 1e-14);
}

TEST_CASE("new country equals re-estimation") {
  std::mt19937_64 rng(41);
  for (int rep = 0; rep < 40; ++rep) {
    const Panel full = RandomPanel(rng, {3 + rep % 10, 3 + rep % 6, rep % 2 ? 0.2 : 0.0, 0.15},
                                   Mode::kSpace);
    const auto t = full.num_units();
    const Panel head = Head(full, t - 1);
    try {
      CheckBasket(head);
    } catch (const BasketViolation&) {
      continue;
    }
    const auto r = UpdateMultilateral(head, ColumnOf(full, t - 1, full.units().back()));
    const auto batch = EstimateDeflators(full);
    CHECK(MaxRelErr(r.estimate.deflators, batch.deflators) <= 1e-9);
    CHECK(MaxRelErr(r.estimate.ref_prices, batch.ref_prices) <= 1e-9);
    CHECK(RelErr(*r.estimate.sigma2 + 1.0, *batch.sigma2 + 1.0) <= 1e-9);
    CHECK(r.estimate.cov_deflators.isApprox(batch.cov_deflators, 1e-8));
  }
}

TEST_CASE("adding countries one at a time equals a batch fit") {
  std::mt19937_64 rng(43);
  for (int rep = 0; rep < 10; ++rep) {
    const Panel full = RandomPanel(rng, {6, 6, 0.0, 0.2}, Mode::kSpace);
    Panel current = Head(full, 2);
    DeflatorEstimate est = EstimateDeflators(current);
    for (Eigen::Index j = 2; j < full.num_units(); ++j) {
      auto r = UpdateMultilateral(current, ColumnOf(full, j, full.units()[j]));
      current = r.panel;
      est = r.estimate;
    }
    CHECK(MaxRelErr(est.deflators, EstimateDeflators(full).deflators) <= 1e-9);
  }
}

TEST_CASE("multilateral basket violations") {
  Eigen::MatrixXd v(2, 2);
  v << 1, 2,  //
      2, 4;
  const auto r = [&] {
    return UpdateMultilateral(MakePanel(v, v.cwiseSign()),
                              NewUnit{"t3", Eigen::Vector2d(3, 0), Eigen::Vector2d(1, 0)});
  };
  CHECK_NOTHROW(r());
  Eigen::MatrixXd w(3, 2);
  w << 1, 2,  //
      2, 4,   //
      0, 5;
  CHECK_THROWS_AS(UpdateMultilateral(MakePanel(w, w.cwiseSign()),
                                     NewUnit{"t3", Eigen::Vector3d(3, 6, 0),
                                             Eigen::Vector3d(1, 1, 0)}),
                  BasketViolation);
  CHECK_NOTHROW(UpdateMultilateral(MakePanel(w, w.cwiseSign()),
                                   NewUnit{"t3", Eigen::Vector3d(3, 6, 7),
                                           Eigen::Vector3d(1, 1, 1)}));
}

TEST_CASE("new period scalar example") {
  Eigen::MatrixXd v(1, 2);
  v << 10, 20;
  const Panel p = MakePanel(v, Eigen::MatrixXd::Ones(1, 2));
  const auto prior = EstimateDeflators(p);
  CHECK(RelErr(prior.deflators(1), 0.5) <= 1e-14);
  const auto r = UpdateMultiperiod(prior, p, NewUnit{"t3", Eigen::VectorXd::Constant(1, 20),
                                                     Eigen::VectorXd::Ones(1)});
  CHECK(RelErr(r.estimate.deflators(2), 0.5) <= 1e-14);
  CHECK(RelErr(r.estimate.indexes(2), 2.0) <= 1e-14);
  CHECK(r.changed_mask == std::vector<bool>{false, false, true});
}

TEST_CASE("new period keeps history and matches the constrained fit") {
  std::mt19937_64 rng(47);
  for (int rep = 0; rep < 40; ++rep) {
    const Panel full = RandomPanel(rng, {3 + rep % 10, 3 + rep % 6, rep % 2 ? 0.2 : 0.0, 0.15});
    const auto t = full.num_units();
    const Panel head = Head(full, t - 1);
    try {
      CheckBasket(head);
    } catch (const BasketViolation&) {
      continue;
    }
    const auto prior = EstimateDeflators(head);
    const auto unit = ColumnOf(full, t - 1, full.units().back());
    const auto r = UpdateMultiperiod(prior, head, unit);
    for (Eigen::Index j = 0; j < t - 1; ++j) {
      CHECK(r.estimate.indexes(j) == prior.indexes(j));
      CHECK(r.estimate.deflators(j) == prior.deflators(j));
      CHECK_FALSE(r.changed_mask[static_cast<std::size_t>(j)]);
    }
    CHECK(r.changed_mask.back());
    const auto oracle = ConstrainedOracle(head, prior.deflators, unit);
    CHECK(RelErr(r.estimate.deflators(t - 1), oracle(0)) <= 1e-9);
    CHECK(MaxRelErr(r.estimate.ref_prices, oracle.tail(head.num_items())) <= 1e-9);
    CHECK(r.estimate.dof == head.num_items() * t - (head.num_items() + 1));
    CHECK(r.estimate.covariance_stale);
    CHECK(r.estimate.cov_deflators.topLeftCorner(t - 2, t - 2) ==
          prior.cov_deflators);
  }
}

TEST_CASE("new period from a base-only prior equals the two-unit estimator") {
  std::mt19937_64 rng(53);
  for (int rep = 0; rep < 20; ++rep) {
    const Panel full = RandomPanel(rng, {2 + rep % 8, 2, 0.0, 0.2});
    const Panel head = Head(full, 1);
    const auto prior = BaseOnlyEstimate(head);
    const auto r = UpdateMultiperiod(prior, head, ColumnOf(full, 1, "t2"));
    const auto batch = EstimateDeflators(full);
    CHECK(RelErr(r.estimate.deflators(1), batch.deflators(1)) <= 1e-12);
    CHECK(MaxRelErr(r.estimate.ref_prices, batch.ref_prices) <= 1e-12);
    CHECK(RelErr(*r.estimate.sigma2, *batch.sigma2) <= 1e-9);
    CHECK(RelErr(r.estimate.cov_deflators(0, 0), batch.cov_deflators(0, 0)) <= 1e-9);
    CHECK_FALSE(r.estimate.covariance_stale);
  }
}

TEST_CASE("chained new periods never revise history") {
  std::mt19937_64 rng(59);
  const Panel full = RandomPanel(rng, {8, 7, 0.0, 0.2});
  Panel current = Head(full, 3);
  auto est = EstimateDeflators(current);
  const Eigen::VectorXd first = est.indexes;
  for (Eigen::Index j = 3; j < full.num_units(); ++j) {
    auto r = UpdateMultiperiod(est, current, ColumnOf(full, j, full.units()[j]));
    CHECK(r.estimate.indexes.head(j) == est.indexes);
    current = r.panel;
    est = r.estimate;
  }
  CHECK(est.indexes.head(3) == first);
}

TEST_CASE("multiperiod errors") {
  const auto prior = EstimateDeflators(F1());
  CHECK_THROWS_AS(UpdateMultiperiod(prior, Head(F1(), 1), ColumnOf(F1(), 1, "x")),
                  InvalidDimension);
  CHECK_THROWS_AS(UpdateMultiperiod(prior, F1(), ColumnOf(F1(), 1, "t2")), DuplicateObservation);
  CHECK_THROWS_AS(UpdateMultiperiod(prior, F1(), NewUnit{"t3", Eigen::Vector2d::Zero(),
                                                        Eigen::Vector2d::Zero()}),
                  ValidationError);
}

}  // TEST_SUITE

}  // namespace
}  // namespace mplindex
