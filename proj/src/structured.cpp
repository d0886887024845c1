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

#include "mplindex/structured.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/QR>

#include "mplindex/errors.hpp"

namespace mplindex {

const char* ToString(DofRule rule) { return rule == DofRule::kPaper ? "paper" : "observed"; }

DofRule ParseDofRule(const std::string& text) {
  if (text == "paper") return DofRule::kPaper;
  if (text == "observed") return DofRule::kObserved;
  throw ValidationError("unknown dof rule '" + text + "' (expected paper|observed)");
}

Eigen::Index ResidualDof(const Panel& panel, DofRule rule) {
  const auto n = panel.num_items();
  const auto t = panel.num_units();
  const auto cells = rule == DofRule::kPaper ? n * t : panel.num_present();
  return cells - (n + t - 1);
}

std::vector<std::size_t> BaseFirstOrder(const Panel& panel) {
  std::vector<std::size_t> order{panel.base_unit()};
  for (std::size_t j = 0; j < panel.units().size(); ++j) {
    if (j != panel.base_unit()) order.push_back(j);
  }
  return order;
}

Eigen::SparseMatrix<double> TransitionMatrix(Eigen::Index n) {
  if (n < 1) throw InvalidDimension("transition matrix needs n >= 1");
  Eigen::SparseMatrix<double> r(n * n, n);
  r.reserve(Eigen::VectorXi::Constant(n, 1));
  for (Eigen::Index i = 0; i < n; ++i) r.insert(i * n + i, i) = 1.0;
  r.makeCompressed();
  return r;
}

DesignSystem BuildDesignSystem(const Panel& panel, DofRule rule) {
  const auto n = panel.num_items();
  const auto t = panel.num_units();
  if (t < 2) throw InvalidDimension("design system needs at least two units");

  DesignSystem sys;
  sys.unit_order = BaseFirstOrder(panel);
  sys.dof = ResidualDof(panel, rule);
  for (std::size_t k = 1; k < sys.unit_order.size(); ++k) {
    sys.column_labels.push_back("deflator:" + panel.units()[sys.unit_order[k]]);
  }
  for (const auto& item : panel.items()) sys.column_labels.push_back("price:" + item);

  const auto& v = panel.values();
  const auto& q = panel.quantities();
  const auto base = static_cast<Eigen::Index>(sys.unit_order[0]);
  sys.y = Eigen::VectorXd::Zero(n * t);
  sys.y.head(n) = v.col(base);

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(2 * panel.num_present()));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (q(i, base) != 0.0) entries.emplace_back(i, t - 1 + i, q(i, base));
  }
  for (Eigen::Index k = 1; k < t; ++k) {
    const auto col = static_cast<Eigen::Index>(sys.unit_order[k]);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (v(i, col) == 0.0) continue;
      entries.emplace_back(k * n + i, k - 1, -v(i, col));
      entries.emplace_back(k * n + i, t - 1 + i, q(i, col));
    }
  }
  sys.X.resize(n * t, n + t - 1);
  sys.X.setFromTriplets(entries.begin(), entries.end());
  return sys;
}

OlsResult FitOls(const DesignSystem& system) {
  const Eigen::MatrixXd x(system.X);
  const auto p = x.cols();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(kPivotTolerance);
  if (qr.rank() < p) {
    const auto dependent = qr.colsPermutation().indices()(qr.rank());
    throw SingularSystem("design matrix is rank deficient (rank " + std::to_string(qr.rank()) +
                         " < " + std::to_string(p) + "); dependent column '" +
                         system.column_labels[static_cast<std::size_t>(dependent)] + "'");
  }

  OlsResult out;
  out.beta = qr.solve(system.y);
  out.residuals = system.y - x * out.beta;
  out.ssr = out.residuals.squaredNorm();
  if (system.dof > 0) out.sigma2 = out.ssr / static_cast<double>(system.dof);

  const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  const auto& perm = qr.colsPermutation();
  const Eigen::MatrixXd inv = perm * (r_inv * r_inv.transpose()) * perm.transpose();
  const auto d = system.num_deflators();
  out.inverse.l11 = inv.topLeftCorner(d, d);
  out.inverse.l12 = inv.topRightCorner(d, p - d);
  out.inverse.l22 = inv.bottomRightCorner(p - d, p - d);
  return out;
}

NormalBlocks BuildNormalBlocks(const Panel& panel) {
  const auto n = panel.num_items();
  const auto t = panel.num_units();
  if (t < 2) throw InvalidDimension("normal equations need at least two units");
  const auto order = BaseFirstOrder(panel);
  const auto& v = panel.values();
  const auto& q = panel.quantities();
  const auto base = static_cast<Eigen::Index>(order[0]);

  NormalBlocks blocks;
  blocks.deflator_diag.resize(t - 1);
  blocks.cross.resize(t - 1, n);
  for (Eigen::Index k = 1; k < t; ++k) {
    const auto col = static_cast<Eigen::Index>(order[k]);
    blocks.deflator_diag(k - 1) = v.col(col).squaredNorm();
    blocks.cross.row(k - 1) = q.col(col).cwiseProduct(v.col(col)).transpose();
    blocks.deflator_labels.push_back(panel.units()[order[k]]);
  }
  blocks.price_diag = q.rowwise().squaredNorm();

  // Prefix and suffix sums over units in base-first order.
  const Eigen::MatrixXd q_sq = q.cwiseAbs2();
  Eigen::MatrixXd before = Eigen::MatrixXd::Zero(n, t), after = Eigen::MatrixXd::Zero(n, t);
  for (Eigen::Index k = 1; k < t; ++k) {
    before.col(k) = before.col(k - 1) + q_sq.col(static_cast<Eigen::Index>(order[k - 1]));
  }
  for (Eigen::Index k = t - 2; k >= 0; --k) {
    after.col(k) = after.col(k + 1) + q_sq.col(static_cast<Eigen::Index>(order[k + 1]));
  }
  blocks.value_sq.resize(t - 1, n);
  blocks.others_q_sq.resize(t - 1, n);
  for (Eigen::Index k = 1; k < t; ++k) {
    const auto col = static_cast<Eigen::Index>(order[k]);
    blocks.value_sq.row(k - 1) = v.col(col).cwiseAbs2().transpose();
    blocks.others_q_sq.row(k - 1) = (before.col(k) + after.col(k)).transpose();
  }
  blocks.price_rhs = q.col(base).cwiseProduct(v.col(base));
  blocks.price_labels = panel.items();
  return blocks;
}

Eigen::MatrixXd AssembleNormalMatrix(const NormalBlocks& blocks) {
  const auto d = blocks.deflator_diag.size();
  const auto n = blocks.price_diag.size();
  Eigen::MatrixXd xtx = Eigen::MatrixXd::Zero(d + n, d + n);
  xtx.topLeftCorner(d, d).diagonal() = blocks.deflator_diag;
  xtx.topRightCorner(d, n) = -blocks.cross;
  xtx.bottomLeftCorner(n, d) = -blocks.cross.transpose();
  xtx.bottomRightCorner(n, n).diagonal() = blocks.price_diag;
  return xtx;
}

Eigen::VectorXd AssembleNormalRhs(const NormalBlocks& blocks) {
  const auto d = blocks.deflator_diag.size();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d + blocks.price_diag.size());
  rhs.tail(blocks.price_diag.size()) = blocks.price_rhs;
  return rhs;
}

namespace {

Eigen::VectorXd InversePriceDiag(const NormalBlocks& blocks) {
  Eigen::VectorXd inv(blocks.price_diag.size());
  for (Eigen::Index i = 0; i < inv.size(); ++i) {
    if (!(blocks.price_diag(i) > 0.0)) {
      throw SingularSystem("item '" + blocks.price_labels[static_cast<std::size_t>(i)] +
                           "' has no positive quantity; its reference price is unidentified");
    }
    inv(i) = 1.0 / blocks.price_diag(i);
  }
  return inv;
}

Eigen::LDLT<Eigen::MatrixXd> FactorSchur(const NormalBlocks& blocks,
                                         const Eigen::VectorXd& d_inv) {
  const auto d = blocks.deflator_diag.size();
  if (d == 0) throw InvalidDimension("no non-base unit to estimate");
  Eigen::MatrixXd s = -blocks.cross * d_inv.asDiagonal() * blocks.cross.transpose();
  if (blocks.others_q_sq.rows() == d && blocks.value_sq.rows() == d) {
    s.diagonal() = (blocks.value_sq.cwiseProduct(blocks.others_q_sq) * d_inv.asDiagonal())
                       .rowwise()
                       .sum();
  } else {
    s.diagonal() += blocks.deflator_diag;
  }

  Eigen::LDLT<Eigen::MatrixXd> ldlt(s);
  const Eigen::VectorXd pivots = ldlt.vectorD();
  const double largest = pivots.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < d; ++k) {
    if (!(pivots(k) > kPivotTolerance * largest)) {
      const Eigen::VectorXi order = Eigen::VectorXi::LinSpaced(d, 0, static_cast<int>(d) - 1);
      const Eigen::VectorXi permuted = ldlt.transpositionsP() * order;
      const auto original = permuted(k);
      throw SingularSystem("Schur complement is singular; deflator of unit '" +
                           blocks.deflator_labels[static_cast<std::size_t>(original)] +
                           "' is not identified");
    }
  }
  return ldlt;
}

}  // namespace

SchurSolution SolveSchur(const NormalBlocks& blocks) {
  const Eigen::VectorXd d_inv = InversePriceDiag(blocks);
  const auto ldlt = FactorSchur(blocks, d_inv);
  const auto d = blocks.deflator_diag.size();

  SchurSolution out;
  out.l11 = ldlt.solve(Eigen::MatrixXd::Identity(d, d));
  out.l11 = 0.5 * (out.l11 + out.l11.transpose()).eval();
  out.deflators = ldlt.solve(blocks.cross * d_inv.cwiseProduct(blocks.price_rhs));
  out.prices = d_inv.cwiseProduct(blocks.price_rhs + blocks.cross.transpose() * out.deflators);
  return out;
}

Eigen::MatrixXd SchurBlock12(const NormalBlocks& blocks) {
  const Eigen::VectorXd d_inv = InversePriceDiag(blocks);
  const auto ldlt = FactorSchur(blocks, d_inv);
  return ldlt.solve(blocks.cross * d_inv.asDiagonal());
}

}  // namespace mplindex
