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

#ifndef MPLINDEX_SIMULATION_HPP_
#define MPLINDEX_SIMULATION_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mplindex/estimator.hpp"
#include "mplindex/panel.hpp"

namespace mplindex {

// kAdditiveOnBase adds independent noise to every non-base value.
// kRandomWalk builds each non-base column from the previous simulated one.
enum class Scheme { kAdditiveOnBase, kRandomWalk };

enum class EstimatorKind { kMpl, kTpd, kTpdWeighted };

const char* ToString(Scheme scheme);
Scheme ParseScheme(const std::string& text);
const char* ToString(EstimatorKind kind);
EstimatorKind ParseEstimatorKind(const std::string& text);

struct SimulationConfig {
  Scheme scheme = Scheme::kAdditiveOnBase;
  int replications = 1000;
  double noise_mean = 20000.0;
  // Each replication draws its noise sd uniformly from [0, noise_sd_max].
  double noise_sd_max = 1000.0;
  std::uint64_t seed = 0;
  double k = 3.0;
  std::vector<EstimatorKind> estimators{EstimatorKind::kMpl, EstimatorKind::kTpd};
  EstimateOptions mpl_options;
  int workers = 1;
  bool keep_draws = false;
  int max_redraws = 100;
};

struct EstimatorSummary {
  EstimatorKind kind = EstimatorKind::kMpl;
  int successes = 0;
  int failures = 0;
  Eigen::VectorXd mean_index;
  Eigen::VectorXd sd_index;  // across successful replications
  Eigen::VectorXd mean_se;   // model-based, averaged across replications
  Eigen::VectorXd lo_emp, hi_emp;
  Eigen::VectorXd lo_model, hi_model;
  // Index draws of successful replications, in replication order.
  std::vector<Eigen::VectorXd> draws;
};

struct SimulationReport {
  SimulationConfig config;
  std::vector<std::string> units;
  std::size_t base_unit = 0;
  std::vector<EstimatorSummary> estimators;
};

// Perturbed value matrix for one replication; exposed for testing.
Eigen::MatrixXd PerturbValues(const Panel& panel, const SimulationConfig& config,
                              std::uint64_t replication);

// Output is identical for any worker count: each replication has its own
// generator seeded from (seed, replication) and aggregation runs in
// replication order.
SimulationReport Simulate(const Panel& panel, const SimulationConfig& config);

}  // namespace mplindex

#endif  // MPLINDEX_SIMULATION_HPP_
