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

#include "mplindex/bilateral.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mplindex/errors.hpp"

namespace mplindex {
namespace {

void CheckInput(const BilateralInput& in) {
  const auto n = in.p1.size();
  if (n == 0 || in.p2.size() != n || in.q1.size() != n || in.q2.size() != n) {
    throw InvalidDimension("bilateral vectors must be non-empty and of equal length");
  }
  const auto positive = [](const Eigen::VectorXd& x) { return (x.array() > 0.0).all(); };
  if (!positive(in.p1) || !positive(in.p2) || !positive(in.q1) || !positive(in.q2)) {
    throw InvalidPrice("bilateral prices and quantities must be strictly positive");
  }
}

}  // namespace

const char* ToString(ClassicalKind kind) {
  switch (kind) {
    case ClassicalKind::kLaspeyres: return "laspeyres";
    case ClassicalKind::kPaasche: return "paasche";
    case ClassicalKind::kMarshallEdgeworth: return "marshall_edgeworth";
    case ClassicalKind::kWalsh: return "walsh";
  }
  return "?";
}

BilateralInput BilateralFromPanel(const Panel& panel, std::size_t target) {
  if (target >= panel.units().size()) throw InvalidDimension("target unit out of range");
  const auto base = static_cast<Eigen::Index>(panel.base_unit());
  const auto col = static_cast<Eigen::Index>(target);
  const auto prices = ImpliedPrices(panel).prices;
  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < panel.num_items(); ++i) {
    if (panel.present()(i, base) && panel.present()(i, col)) rows.push_back(i);
  }
  if (rows.empty()) throw EmptyBasket("base and target units share no items");
  const auto n = static_cast<Eigen::Index>(rows.size());
  BilateralInput in{Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd(n),
                    Eigen::VectorXd(n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto i = rows[static_cast<std::size_t>(k)];
    in.p1(k) = prices(i, base);
    in.p2(k) = prices(i, col);
    in.q1(k) = panel.quantities()(i, base);
    in.q2(k) = panel.quantities()(i, col);
  }
  return in;
}

double QuadraticFormIndex(const Eigen::VectorXd& p1, const Eigen::VectorXd& p2,
                          const Eigen::MatrixXd& a) {
  if (a.rows() != p1.size() || a.cols() != p1.size() || p2.size() != p1.size()) {
    throw InvalidDimension("quadratic form dimensions do not match");
  }
  const double denom = p1.dot(a * p1);
  if (!(denom > 0.0)) throw DegenerateForm("p1' A p1 must be positive");
  return p2.dot(a * p1) / denom;
}

double ClassicalIndex(const BilateralInput& in, ClassicalKind kind) {
  CheckInput(in);
  Eigen::VectorXd weights;
  switch (kind) {
    case ClassicalKind::kLaspeyres: weights = in.q1; break;
    case ClassicalKind::kPaasche: weights = in.q2; break;
    case ClassicalKind::kMarshallEdgeworth: weights = in.q1 + in.q2; break;
    case ClassicalKind::kWalsh: weights = in.q1.cwiseProduct(in.q2).cwiseSqrt(); break;
  }
  return in.p2.dot(weights) / in.p1.dot(weights);
}

TwoPeriodForms MplTwoPeriodForms(const BilateralInput& in) {
  CheckInput(in);
  const Eigen::ArrayXd q1 = in.q1.array(), q2 = in.q2.array();
  const Eigen::ArrayXd p1 = in.p1.array(), p2 = in.p2.array();
  const Eigen::ArrayXd v1 = p1 * q1, v2 = p2 * q2;
  const Eigen::ArrayXd d = q1.square() + q2.square();

  TwoPeriodForms out{};
  const Eigen::ArrayXd pi = 2.0 * p2 * q1.square() * q2.square() / d;
  out.ratio = (p2 * pi).sum() / (p1 * pi).sum();

  const Eigen::ArrayXd raw = v1 * v2 * q1 * q2 / d;
  out.weights = (raw / raw.sum()).matrix();
  out.convex = ((p2 / p1) * out.weights.array()).sum();

  const Eigen::ArrayXd qt1 = q1 / d.sqrt(), qt2 = q2 / d.sqrt();
  out.compact = (qt1 * v2).square().sum() / ((qt2 * v2) * (qt1 * v1)).sum();
  return out;
}

double MplTwoPeriod(const BilateralInput& input) {
  const auto f = MplTwoPeriodForms(input);
  const double scale = std::abs(f.ratio);
  if (std::abs(f.convex - f.ratio) > 1e-12 * scale ||
      std::abs(f.compact - f.ratio) > 1e-12 * scale) {
    throw std::logic_error("two-period MPL forms disagree");
  }
  return f.ratio;
}

}  // namespace mplindex
