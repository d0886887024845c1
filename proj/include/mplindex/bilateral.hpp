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

#ifndef MPLINDEX_BILATERAL_HPP_
#define MPLINDEX_BILATERAL_HPP_

#include <string>

#include <Eigen/Core>

#include "mplindex/panel.hpp"

namespace mplindex {

// Two-situation comparison on prices. All entries must be strictly positive.
struct BilateralInput {
  Eigen::VectorXd p1, p2;
  Eigen::VectorXd q1, q2;
};

enum class ClassicalKind { kLaspeyres, kPaasche, kMarshallEdgeworth, kWalsh };

const char* ToString(ClassicalKind kind);

// Builds the input from the base unit and `target` of a panel, restricted to
// items present in both.
BilateralInput BilateralFromPanel(const Panel& panel, std::size_t target);

// lambda minimizing (p2 - lambda p1)' A (p2 - lambda p1):
//   p2' A p1 / p1' A p1.
double QuadraticFormIndex(const Eigen::VectorXd& p1, const Eigen::VectorXd& p2,
                          const Eigen::MatrixXd& a);

double ClassicalIndex(const BilateralInput& input, ClassicalKind kind);

// The two-period MPL index in its three algebraically equal forms.
struct TwoPeriodForms {
  double ratio;      // sum p2 pi / sum p1 pi, pi_i = 2 p_i2 q_i1^2 q_i2^2 / (q_i1^2 + q_i2^2)
  double convex;     // sum (p2/p1) w_i with w summing to one
  double compact;    // (q~1 * v2)'(q~1 * v2) / (q~2 * v2)'(q~1 * v1), q~ = D^{-1/2} q
  Eigen::VectorXd weights;  // convex-combination weights w
};

TwoPeriodForms MplTwoPeriodForms(const BilateralInput& input);

// Ratio form; throws std::logic_error if the three forms disagree by more
// than 1e-12 relative.
double MplTwoPeriod(const BilateralInput& input);

}  // namespace mplindex

#endif  // MPLINDEX_BILATERAL_HPP_
