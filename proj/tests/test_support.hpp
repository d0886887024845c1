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

#ifndef MPLINDEX_TESTS_TEST_SUPPORT_HPP_
#define MPLINDEX_TESTS_TEST_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "mplindex/panel.hpp"

namespace mplindex::testing {

inline double RelErr(double got, double want) {
  const double scale = std::max(std::abs(want), 1e-300);
  return std::abs(got - want) / scale;
}

inline double MaxRelErr(const Eigen::VectorXd& got, const Eigen::VectorXd& want) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < got.size(); ++i) {
    worst = std::max(worst, std::abs(got(i) - want(i)) / std::max(std::abs(want(i)), 1.0));
  }
  return worst;
}

// Items and units joined through present cells form one component.
inline bool Connected(const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>& mask) {
  const auto n = mask.rows(), t = mask.cols();
  std::vector<bool> unit_seen(t, false), item_seen(n, false);
  std::vector<Eigen::Index> stack{0};
  unit_seen[0] = true;
  while (!stack.empty()) {
    const auto j = stack.back();
    stack.pop_back();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!mask(i, j) || item_seen[i]) continue;
      item_seen[i] = true;
      for (Eigen::Index k = 0; k < t; ++k) {
        if (mask(i, k) && !unit_seen[k]) {
          unit_seen[k] = true;
          stack.push_back(k);
        }
      }
    }
  }
  return std::all_of(unit_seen.begin(), unit_seen.end(), [](bool b) { return b; });
}

struct PanelSpec {
  int n = 5;
  int t = 4;
  double missing = 0.0;  // probability of dropping a cell
  double noise = 0.05;   // log-price dispersion around the common trend
};

// Prices follow p_it = lambda_t * p_i * exp(noise); quantities are
// log-normal. Masks are redrawn until every item appears in >= 2 units,
// every unit has an item, and the presence graph is connected.
inline Panel RandomPanel(std::mt19937_64& rng, const PanelSpec& spec,
                         Mode mode = Mode::kTime) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto n = spec.n, t = spec.t;
  Eigen::MatrixXd v(n, t), q(n, t);
  Eigen::VectorXd ref(n), trend(t);
  for (int i = 0; i < n; ++i) ref(i) = std::exp(normal(rng));
  trend(0) = 1.0;
  for (int j = 1; j < t; ++j) trend(j) = trend(j - 1) * std::exp(0.05 + 0.1 * normal(rng));
  for (int j = 0; j < t; ++j) {
    for (int i = 0; i < n; ++i) {
      q(i, j) = std::exp(1.0 + normal(rng));
      v(i, j) = trend(j) * ref(i) * std::exp(spec.noise * normal(rng)) * q(i, j);
    }
  }
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> mask;
  while (true) {
    mask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, t, true);
    for (int j = 0; j < t; ++j) {
      for (int i = 0; i < n; ++i) {
        if (uni(rng) < spec.missing) mask(i, j) = false;
      }
    }
    bool ok = Connected(mask);
    for (int i = 0; i < n && ok; ++i) ok = mask.row(i).count() >= 2;
    for (int j = 0; j < t && ok; ++j) ok = mask.col(j).any();
    if (ok) break;
  }
  for (int j = 0; j < t; ++j) {
    for (int i = 0; i < n; ++i) {
      if (!mask(i, j)) v(i, j) = q(i, j) = 0.0;
    }
  }
  std::vector<std::string> items, units;
  for (int i = 0; i < n; ++i) items.push_back("item" + std::to_string(i));
  for (int j = 0; j < t; ++j) units.push_back("u" + std::to_string(j));
  return Panel(items, units, v, q, 0, mode);
}

inline Panel MakePanel(const Eigen::MatrixXd& v, const Eigen::MatrixXd& q, std::size_t base = 0,
                       Mode mode = Mode::kTime) {
  std::vector<std::string> items, units;
  for (Eigen::Index i = 0; i < v.rows(); ++i) items.push_back("i" + std::to_string(i + 1));
  for (Eigen::Index j = 0; j < v.cols(); ++j) units.push_back("t" + std::to_string(j + 1));
  return Panel(items, units, v, q, base, mode);
}

// Dense R'_n from its definition: column i is e_i (x) e_i.
inline Eigen::MatrixXd DenseTransition(Eigen::Index n) {
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(n * n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd e = Eigen::VectorXd::Unit(n, i);
    r.col(i) = Eigen::kroneckerProduct(e, e);
  }
  return r;
}

// The design matrix assembled literally with Kronecker products and
// transition matrices, base unit in column 0:
//   [ 0                          (q_1' (x) I_N) R'_N ]
//   [ (I_{T-1} (x) -V_1) R'_{T-1}  (Q_1' (x) I_N) R'_N ]
inline Eigen::MatrixXd KroneckerDesign(const Panel& panel) {
  const auto n = panel.num_items(), t = panel.num_units();
  const Eigen::MatrixXd& v = panel.values();
  const Eigen::MatrixXd& q = panel.quantities();
  const Eigen::MatrixXd in = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd rn = DenseTransition(n);
  const Eigen::MatrixXd rt = DenseTransition(t - 1);
  const Eigen::MatrixXd v1 = v.rightCols(t - 1);
  const Eigen::MatrixXd q1 = q.rightCols(t - 1);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n * t, n + t - 1);
  x.topRightCorner(n, n) =
      Eigen::MatrixXd(Eigen::kroneckerProduct(q.col(0).transpose(), in)) * rn;
  x.bottomLeftCorner(n * (t - 1), t - 1) =
      Eigen::MatrixXd(Eigen::kroneckerProduct(Eigen::MatrixXd::Identity(t - 1, t - 1),
                                              Eigen::MatrixXd(-v1))) * rt;
  x.bottomRightCorner(n * (t - 1), n) =
      Eigen::MatrixXd(Eigen::kroneckerProduct(q1.transpose(), in)) * rn;
  return x;
}

// Least squares by explicit normal equations with a full-pivot LU; an
// independent route from the library's QR and Schur solvers.
inline Eigen::VectorXd NormalEquationSolve(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const Eigen::MatrixXd xtx = x.transpose() * x;
  return xtx.fullPivLu().solve(x.transpose() * y);
}

}  // namespace mplindex::testing

#endif  // MPLINDEX_TESTS_TEST_SUPPORT_HPP_
