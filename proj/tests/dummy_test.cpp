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
#include <numeric>
#include <random>
#include <string>

#include <doctest.h>

#include <Eigen/Dense>

#include "mplindex/dummy.hpp"
#include "mplindex/errors.hpp"
#include "test_support.hpp"

namespace mplindex {
namespace {

using testing::MakePanel;
using testing::MaxRelErr;
using testing::RandomPanel;
using testing::RelErr;

// Normal-equation WLS on present cells with an explicit base dummy column
// that is then dropped.
Eigen::VectorXd OracleEffects(const Panel& p, bool weighted) {
  const auto n = p.num_items(), t = p.num_units();
  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> ys, ws;
  for (Eigen::Index j = 0; j < t; ++j) {
    const double total = p.values().col(j).sum();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!p.present()(i, j)) continue;
      Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(t - 1 + n);
      if (j > 0) r(j - 1) = 1.0;
      r(t - 1 + i) = 1.0;
      rows.push_back(r);
      ys.push_back(std::log(p.values()(i, j) / p.quantities()(i, j)));
      ws.push_back(weighted ? p.values()(i, j) / total : 1.0);
    }
  }
  Eigen::MatrixXd x(rows.size(), t - 1 + n);
  Eigen::VectorXd y(rows.size()), w(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    x.row(k) = rows[k];
    y(k) = ys[k];
    w(k) = ws[k];
  }
  const Eigen::MatrixXd xtwx = x.transpose() * w.asDiagonal() * x;
  const Eigen::VectorXd beta = xtwx.fullPivLu().solve(x.transpose() * w.asDiagonal() * y);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(t);
  out.tail(t - 1) = beta.head(t - 1);
  return out;
}

TEST_SUITE("dummy") {

TEST_CASE("balanced two-period panel gives the geometric mean of relatives") {
  Eigen::MatrixXd v(2, 2);
  v << 1, 3,  //
      2, 4;
  const auto fit = FitDummyIndex(MakePanel(v, Eigen::MatrixXd::Ones(2, 2)), false);
  CHECK(RelErr(fit.indexes(1), std::sqrt(6.0)) <= 1e-14);
  CHECK(fit.indexes(0) == 1.0);
  CHECK(fit.dof == 1);
}

TEST_CASE("complete tableau: every index is the geometric mean of relatives") {
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 20; ++rep) {
    const Panel p = RandomPanel(rng, {2 + rep % 10, 2 + rep % 6, 0.0, 0.3});
    const auto fit = FitDummyIndex(p, false);
    const auto prices = ImpliedPrices(p).prices;
    for (Eigen::Index j = 0; j < p.num_units(); ++j) {
      const double log_mean =
          (prices.col(j).array().log() - prices.col(0).array().log()).mean();
      CHECK(RelErr(fit.indexes(j), std::exp(log_mean)) <= 1e-12);
    }
  }
}

TEST_CASE("doubled prices fit exactly") {
  std::mt19937_64 rng(2);
  const Panel p = RandomPanel(rng, {6, 2, 0.0, 0.3});
  Eigen::MatrixXd v = p.values();
  v.col(1) = 2.0 * v.col(0).cwiseProduct(p.quantities().col(1)).cwiseQuotient(p.quantities().col(0));
  for (bool weighted : {false, true}) {
    const auto fit = FitDummyIndex(p.WithValues(v), weighted);
    CHECK(RelErr(fit.indexes(1), 2.0) <= 1e-14);
    CHECK(*fit.sigma2 <= 1e-28);
  }
}

TEST_CASE("equal values make the weighted fit unweighted") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.5, 5.0);
  Eigen::MatrixXd v = Eigen::MatrixXd::Constant(5, 4, 7.0), q(5, 4);
  for (auto& x : q.reshaped()) x = u(rng);
  const Panel p = MakePanel(v, q);
  const auto a = FitDummyIndex(p, false);
  const auto b = FitDummyIndex(p, true);
  CHECK(MaxRelErr(b.indexes, a.indexes) <= 1e-12);
  CHECK(b.weighted);
}

TEST_CASE("matches a weighted least squares oracle on incomplete panels") {
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 40; ++rep) {
    const Panel p = RandomPanel(rng, {3 + rep % 10, 2 + rep % 6, 0.3, 0.3});
    for (bool weighted : {false, true}) {
      const auto fit = FitDummyIndex(p, weighted);
      CHECK(MaxRelErr(fit.log_unit_effects, OracleEffects(p, weighted)) <= 1e-9);
      CHECK(fit.dof == p.num_present() - (p.num_items() + p.num_units() - 1));
    }
  }
}

TEST_CASE("item order does not matter") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const Panel p = RandomPanel(rng, {7, 4, 0.2, 0.3});
    std::vector<std::size_t> perm(7);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto a = FitDummyIndex(p, true);
    const auto b = FitDummyIndex(p.WithItems(perm), true);
    CHECK(MaxRelErr(b.indexes, a.indexes) <= 1e-12);
    CHECK(MaxRelErr(b.se, a.se) <= 1e-9);
  }
}

TEST_CASE("absent cells carry no information") {
  // An absent cell with arbitrary stored quantities is still absent.
  std::mt19937_64 rng(6);
  const Panel p = RandomPanel(rng, {6, 4, 0.3, 0.3});
  const auto a = FitDummyIndex(p, false);
  const auto b = FitDummyIndex(p.WithValues(p.values()), false);
  CHECK(b.indexes == a.indexes);
  // Adding an item present in a single unit moves nothing but its own effect.
  Eigen::MatrixXd v(7, 4), q(7, 4);
  v << p.values(), Eigen::RowVector4d(0, 0, 3, 0);
  q << p.quantities(), Eigen::RowVector4d(0, 0, 1, 0);
  const auto c = FitDummyIndex(MakePanel(v, q), false);
  CHECK(MaxRelErr(c.indexes, a.indexes) <= 1e-12);
}

TEST_CASE("standard errors") {
  std::mt19937_64 rng(7);
  const Panel p = RandomPanel(rng, {8, 5, 0.0, 0.2});
  const auto fit = FitDummyIndex(p, false);
  CHECK(fit.se(0) == 0.0);
  CHECK((fit.se.tail(4).array() > 0.0).all());
  // Balanced design: var(alpha_t) = 2 sigma^2 / N.
  CHECK(RelErr(fit.se(2), std::sqrt(2.0 * *fit.sigma2 / 8.0)) <= 1e-12);
  CHECK(MaxRelErr(fit.IndexSe(), fit.indexes.cwiseProduct(fit.se)) == 0.0);

  Eigen::MatrixXd v(1, 2);
  v << 1, 2;
  const auto exact = FitDummyIndex(MakePanel(v, Eigen::MatrixXd::Ones(1, 2)), false);
  CHECK(exact.dof == 0);
  CHECK(std::isnan(exact.se(1)));
}

TEST_CASE("disconnected presence graph") {
  Eigen::MatrixXd v(4, 4);
  v << 1, 2, 0, 0,  //
      3, 4, 0, 0,   //
      0, 0, 5, 6,   //
      0, 0, 7, 8;
  try {
    FitDummyIndex(MakePanel(v, v.cwiseSign()), false);
    FAIL("expected UnidentifiedModel");
  } catch (const UnidentifiedModel& e) {
    CHECK(std::string(e.what()).find("{t1,t2} {t3,t4}") != std::string::npos);
  }
}

}  // TEST_SUITE

}  // namespace
}  // namespace mplindex
