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

#ifndef MPLINDEX_STRUCTURED_HPP_
#define MPLINDEX_STRUCTURED_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "mplindex/panel.hpp"

namespace mplindex {

// How residual degrees of freedom are counted. kPaper counts every cell of
// the N x T grid (zero-filled cells included): NT - (N + T - 1). kObserved
// counts only present cells.
enum class DofRule { kPaper, kObserved };

const char* ToString(DofRule rule);
DofRule ParseDofRule(const std::string& text);

Eigen::Index ResidualDof(const Panel& panel, DofRule rule);

// Unit indices with the base first and the rest in panel order. All
// structured quantities below are laid out in this order.
std::vector<std::size_t> BaseFirstOrder(const Panel& panel);

// R'_n: the n^2 x n selection matrix whose column i is e_i (x) e_i. It maps
// Kronecker products to Hadamard products: A * B = R_n (A (x) B) R'_m.
Eigen::SparseMatrix<double> TransitionMatrix(Eigen::Index n);

// Stacked regression y = X beta + mu with beta = (deflators of the T-1
// non-base units, reference prices of the N items). Rows are unit-major in
// base-first order: row k*N + i is item i in the k-th unit.
struct DesignSystem {
  Eigen::VectorXd y;
  Eigen::SparseMatrix<double> X;
  Eigen::Index dof = 0;
  std::vector<std::string> column_labels;
  std::vector<std::size_t> unit_order;

  Eigen::Index num_deflators() const { return static_cast<Eigen::Index>(unit_order.size()) - 1; }
};

DesignSystem BuildDesignSystem(const Panel& panel, DofRule rule = DofRule::kPaper);

// Blocks of (X'X)^{-1} split at the deflator/price boundary.
struct BlockInverse {
  Eigen::MatrixXd l11;  // (T-1) x (T-1)
  Eigen::MatrixXd l12;  // (T-1) x N
  Eigen::MatrixXd l22;  // N x N
};

struct OlsResult {
  Eigen::VectorXd beta;
  Eigen::VectorXd residuals;
  double ssr = 0.0;
  std::optional<double> sigma2;  // empty when dof <= 0
  BlockInverse inverse;
};

// Dense least squares on the design matrix via column-pivoted QR. Used as
// the reference route against the structured closed form.
OlsResult FitOls(const DesignSystem& system);

// The pieces of X'X and X'y in their Hadamard-collapsed form:
//
//   X'X = [ diag(v_t'v_t)   -B ]      X'y = [     0     ]
//         [     -B'          D ]            [ q_b * v_b ]
//
// where B(t, i) = q_it v_it over non-base units t and D = diag(sum_t q_it^2)
// over all units.
struct NormalBlocks {
  Eigen::VectorXd deflator_diag;
  Eigen::MatrixXd cross;
  // v_it^2 and, per non-base unit t, sum over every other unit s of q_is^2.
  // They give the Schur diagonal sum_i v_it^2 (D_i - q_it^2) / D_i without
  // the cancellation in v_t'v_t - sum_i (q_it v_it)^2 / D_i. Optional.
  Eigen::MatrixXd value_sq;
  Eigen::MatrixXd others_q_sq;
  Eigen::VectorXd price_diag;
  Eigen::VectorXd price_rhs;
  std::vector<std::string> deflator_labels;
  std::vector<std::string> price_labels;
};

NormalBlocks BuildNormalBlocks(const Panel& panel);

Eigen::MatrixXd AssembleNormalMatrix(const NormalBlocks& blocks);
Eigen::VectorXd AssembleNormalRhs(const NormalBlocks& blocks);

// Solution of the normal equations by partitioned inversion. The N x N
// price block is diagonal, so only the (T-1) x (T-1) Schur complement
//   S = diag(v_t'v_t) - B D^{-1} B'
// is factorized.
struct SchurSolution {
  Eigen::MatrixXd l11;         // S^{-1}
  Eigen::VectorXd deflators;   // T-1 non-base deflators
  Eigen::VectorXd prices;      // reference prices
};

// Relative pivot threshold below which a system is declared singular.
inline constexpr double kPivotTolerance = 1e-12;

SchurSolution SolveSchur(const NormalBlocks& blocks);

// Lambda_12 = S^{-1} B D^{-1}. Deflators equal Lambda_12 (q_b * v_b).
Eigen::MatrixXd SchurBlock12(const NormalBlocks& blocks);

}  // namespace mplindex

#endif  // MPLINDEX_STRUCTURED_HPP_
