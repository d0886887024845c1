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

#include "mplindex/simulation.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <thread>

#include "mplindex/dummy.hpp"
#include "mplindex/errors.hpp"

namespace mplindex {

const char* ToString(Scheme scheme) {
  return scheme == Scheme::kAdditiveOnBase ? "additive_on_base" : "random_walk";
}

Scheme ParseScheme(const std::string& text) {
  if (text == "additive_on_base" || text == "additive") return Scheme::kAdditiveOnBase;
  if (text == "random_walk" || text == "random-walk") return Scheme::kRandomWalk;
  throw ValidationError("unknown scheme '" + text + "' (expected additive_on_base|random_walk)");
}

const char* ToString(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kMpl: return "mpl";
    case EstimatorKind::kTpd: return "tpd";
    case EstimatorKind::kTpdWeighted: return "tpd_weighted";
  }
  return "?";
}

EstimatorKind ParseEstimatorKind(const std::string& text) {
  if (text == "mpl") return EstimatorKind::kMpl;
  if (text == "tpd") return EstimatorKind::kTpd;
  if (text == "tpd_weighted") return EstimatorKind::kTpdWeighted;
  throw ValidationError("unknown estimator '" + text + "' (expected mpl|tpd|tpd_weighted)");
}

namespace {

std::mt19937_64 ReplicationEngine(std::uint64_t seed, std::uint64_t replication) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replication),
                    static_cast<std::uint32_t>(replication >> 32)};
  return std::mt19937_64(seq);
}

struct Draw {
  Eigen::VectorXd index;
  Eigen::VectorXd se;
};

// One replication's result per estimator; empty on estimator failure.
using ReplicationResult = std::vector<std::optional<Draw>>;

std::optional<Draw> RunEstimator(const Panel& panel, EstimatorKind kind,
                                 const SimulationConfig& config) {
  try {
    if (kind == EstimatorKind::kMpl) {
      const auto est = EstimateDeflators(panel, config.mpl_options);
      Eigen::VectorXd se = Eigen::VectorXd::Constant(est.num_units(),
                                                     std::numeric_limits<double>::quiet_NaN());
      if (est.sigma2) se = IndexVariance(est, est.variance_method).cwiseSqrt();
      return Draw{est.indexes, se};
    }
    const auto fit = FitDummyIndex(panel, kind == EstimatorKind::kTpdWeighted);
    return Draw{fit.indexes, fit.IndexSe()};
  } catch (const EstimationError&) {
    return std::nullopt;
  } catch (const ValidationError&) {
    return std::nullopt;
  }
}

}  // namespace

Eigen::MatrixXd PerturbValues(const Panel& panel, const SimulationConfig& config,
                              std::uint64_t replication) {
  auto engine = ReplicationEngine(config.seed, replication);
  const double sd = config.noise_sd_max > 0.0
                        ? std::uniform_real_distribution<double>(0.0, config.noise_sd_max)(engine)
                        : 0.0;
  std::normal_distribution<double> normal(config.noise_mean, sd > 0.0 ? sd : 1.0);
  const auto noise = [&] { return sd > 0.0 ? normal(engine) : config.noise_mean; };

  const auto& observed = panel.values();
  Eigen::MatrixXd v = observed;
  const auto base = static_cast<Eigen::Index>(panel.base_unit());
  for (Eigen::Index i = 0; i < panel.num_items(); ++i) {
    std::optional<double> previous;
    for (Eigen::Index j = 0; j < panel.num_units(); ++j) {
      if (!panel.present()(i, j)) continue;
      if (j == base) {
        previous = observed(i, j);
        continue;
      }
      const double start = config.scheme == Scheme::kRandomWalk && previous ? *previous
                                                                           : observed(i, j);
      int attempts = 0;
      double value = start + noise();
      while (!(value > 0.0)) {
        if (++attempts >= config.max_redraws) {
          throw RedrawExhausted("simulated value for (" + panel.items()[i] + ", " +
                                panel.units()[j] + ") stayed non-positive after " +
                                std::to_string(config.max_redraws) + " draws");
        }
        value = start + noise();
      }
      v(i, j) = value;
      previous = value;
    }
  }
  return v;
}

SimulationReport Simulate(const Panel& panel, const SimulationConfig& config) {
  if (config.replications < 1) throw ValidationError("replications must be >= 1");
  if (!(config.noise_sd_max >= 0.0)) throw ValidationError("noise_sd_max must be >= 0");
  if (config.estimators.empty()) throw ValidationError("no estimator selected");
  CheckBasket(panel);

  const auto reps = static_cast<std::size_t>(config.replications);
  std::vector<ReplicationResult> results(reps);
  std::vector<std::exception_ptr> errors(reps);

  const auto run = [&](std::size_t r) {
    try {
      const Panel perturbed = panel.WithValues(PerturbValues(panel, config, r));
      ReplicationResult out;
      for (const auto kind : config.estimators) out.push_back(RunEstimator(perturbed, kind, config));
      results[r] = std::move(out);
    } catch (...) {
      errors[r] = std::current_exception();
    }
  };

  const auto workers = static_cast<std::size_t>(std::max(1, config.workers));
  if (workers == 1) {
    for (std::size_t r = 0; r < reps; ++r) run(r);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t r = w; r < reps; r += workers) run(r);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SimulationReport report;
  report.config = config;
  report.units = panel.units();
  report.base_unit = panel.base_unit();
  const auto t = panel.num_units();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t e = 0; e < config.estimators.size(); ++e) {
    EstimatorSummary s;
    s.kind = config.estimators[e];
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(t), m2 = Eigen::VectorXd::Zero(t);
    Eigen::VectorXd mean_se = Eigen::VectorXd::Zero(t);
    for (std::size_t r = 0; r < reps; ++r) {
      const auto& draw = results[r][e];
      if (!draw) {
        ++s.failures;
        continue;
      }
      ++s.successes;
      const double n = s.successes;
      const Eigen::VectorXd delta = draw->index - mean;
      mean += delta / n;
      m2 += delta.cwiseProduct(draw->index - mean);
      mean_se += (draw->se - mean_se) / n;
      if (config.keep_draws) s.draws.push_back(draw->index);
    }
    if (s.successes == 0) {
      s.mean_index = s.sd_index = s.mean_se = Eigen::VectorXd::Constant(t, nan);
    } else {
      s.mean_index = mean;
      s.sd_index = s.successes > 1 ? (m2 / (s.successes - 1.0)).cwiseSqrt().eval()
                                   : Eigen::VectorXd::Zero(t).eval();
      s.mean_se = mean_se;
    }
    s.lo_emp = s.mean_index - config.k * s.sd_index;
    s.hi_emp = s.mean_index + config.k * s.sd_index;
    s.lo_model = s.mean_index - config.k * s.mean_se;
    s.hi_model = s.mean_index + config.k * s.mean_se;
    report.estimators.push_back(std::move(s));
  }
  return report;
}

}  // namespace mplindex
