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

#include "mplindex/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mplindex/bilateral.hpp"
#include "mplindex/dummy.hpp"
#include "mplindex/errors.hpp"
#include "mplindex/estimator.hpp"
#include "mplindex/panel.hpp"
#include "mplindex/report.hpp"
#include "mplindex/simulation.hpp"
#include "mplindex/updating.hpp"

namespace mplindex {
namespace {

struct CommonOptions {
  std::string input;
  std::string mode = "time";
  std::string base;
  std::vector<std::string> units;
  std::string variance = "full";
  double k = 3.0;
  std::string format = "json";
  std::string output;
  std::string dof = "paper";
};

struct SimulateOptions {
  std::string scheme = "additive_on_base";
  int reps = 1000;
  std::uint64_t seed = 0;
  double noise_mean = 20000.0;
  double noise_sd_max = 1000.0;
  std::vector<std::string> estimators{"mpl", "tpd"};
  int workers = 1;
  bool dump_draws = false;
};

void AddCommon(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--input", o.input, "Long-format CSV: item_id,unit_id,value,quantity")
      ->required();
  cmd->add_option("--mode", o.mode, "time|space")->check(CLI::IsMember({"time", "space"}));
  cmd->add_option("--base", o.base, "Base unit label (default: first unit)");
  cmd->add_option("--units", o.units, "Explicit unit ordering")->delimiter(',');
  cmd->add_option("--variance", o.variance, "corollary3|full")
      ->check(CLI::IsMember({"corollary3", "full"}));
  cmd->add_option("--k", o.k, "Confidence bound multiplier");
  cmd->add_option("--format", o.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--output", o.output, "Write the report here instead of stdout");
  cmd->add_option("--dof", o.dof, "paper|observed")->check(CLI::IsMember({"paper", "observed"}));
}

EstimateOptions EstimateOptionsFrom(const CommonOptions& o) {
  return EstimateOptions{ParseVarianceMethod(o.variance), ParseDofRule(o.dof)};
}

// Loads the panel and applies the reference-basket rule, warning about
// dropped items.
Panel LoadBasket(const CommonOptions& o, std::ostream& err) {
  LoadOptions load{ParseMode(o.mode), o.base, o.units};
  const Panel raw = LoadPanelFile(o.input, load);
  auto [panel, report] = BuildReferenceBasket(raw);
  for (const auto& item : report.dropped_items) {
    err << "warning: item '" << item << "' is present in fewer than two units; dropped\n";
  }
  return panel;
}

NewUnit LoadNew(const std::string& path, const Panel& panel) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return LoadNewUnit(in, panel.items());
}

void Write(const std::string& text, const CommonOptions& o, std::ostream& out) {
  if (o.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.output, std::ios::binary);
  file << text;
  file.flush();
  if (!file) throw std::ios_base::failure("cannot write '" + o.output + "'");
}

std::string ValidateSummary(const Panel& kept, const BasketReport& report,
                            DofRule dof) {
  std::ostringstream s;
  s << "items: " << kept.num_items() << " (dropped " << report.dropped_items.size() << ")\n";
  s << "units: " << kept.num_units() << "\n";
  s << "base: " << kept.units()[kept.base_unit()] << "\n";
  s << "present cells: " << kept.num_present() << " of " << kept.num_items() * kept.num_units()
    << "\n";
  s << "residual dof (" << ToString(dof) << "): " << ResidualDof(kept, dof) << "\n";
  for (const auto& item : report.absent_from_base) {
    s << "note: item '" << item << "' is absent from the base unit (zero-filled)\n";
  }
  return s.str();
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-period / multilateral price index estimation", "mplindex"};
  app.require_subcommand(1);

  CommonOptions common;
  SimulateOptions sim;
  std::string new_path;
  std::string target;
  bool weighted = false;

  auto* validate = app.add_subcommand("validate", "Check a panel and report its reference basket");
  auto* mpl = app.add_subcommand("mpl", "Estimate the MPL index series");
  auto* bilateral = app.add_subcommand("bilateral", "Classical bilateral indexes and two-period MPL");
  auto* tpd = app.add_subcommand("tpd", "Time/country product dummy index");
  auto* update_period = app.add_subcommand("update-period", "Append a period, keeping history fixed");
  auto* update_unit = app.add_subcommand("update-unit", "Append a country and re-estimate all units");
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo comparison of estimators");
  for (auto* cmd : {validate, mpl, bilateral, tpd, update_period, update_unit, simulate}) {
    AddCommon(cmd, common);
  }
  bilateral->add_option("--target", target, "Comparison unit (default: first non-base unit)");
  tpd->add_flag("--weighted", weighted, "Expenditure-share weighted regression");
  for (auto* cmd : {update_period, update_unit}) {
    cmd->add_option("--new", new_path, "CSV rows for the new unit")->required();
  }
  simulate->add_option("--scheme", sim.scheme, "additive_on_base|random_walk")
      ->check(CLI::IsMember({"additive_on_base", "additive", "random_walk", "random-walk"}));
  simulate->add_option("--reps", sim.reps, "Replications")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "Random seed");
  simulate->add_option("--noise-mean", sim.noise_mean, "Mean of the additive noise");
  simulate->add_option("--noise-sd-max", sim.noise_sd_max,
                       "Per-replication noise sd is drawn from [0, this]")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--estimators", sim.estimators, "mpl,tpd,tpd_weighted")->delimiter(',');
  simulate->add_option("--workers", sim.workers, "Worker threads")->check(CLI::PositiveNumber);
  simulate->add_flag("--dump-draws", sim.dump_draws, "Include per-replication draws (json)");
  simulate->add_flag("--weighted", weighted, "Shorthand for adding tpd_weighted");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    const auto format = ParseFormat(common.format);
    if (validate->parsed()) {
      LoadOptions load{ParseMode(common.mode), common.base, common.units};
      const Panel raw = LoadPanelFile(common.input, load);
      auto [kept, report] = BuildReferenceBasket(raw);
      for (const auto& item : report.dropped_items) {
        err << "warning: item '" << item << "' is present in fewer than two units; dropped\n";
      }
      Write(ValidateSummary(kept, report, ParseDofRule(common.dof)), common, out);
    } else if (mpl->parsed()) {
      const Panel panel = LoadBasket(common, err);
      const auto est = EstimateDeflators(panel, EstimateOptionsFrom(common));
      Write(EmitReport(ToIndexSeries(est, common.k), MetaFor(est), format), common, out);
    } else if (bilateral->parsed()) {
      const Panel panel = LoadBasket(common, err);
      std::size_t col = panel.base_unit() == 0 ? 1 : 0;
      if (!target.empty()) {
        const auto found = panel.FindUnit(target);
        if (!found) throw ValidationError("target unit '" + target + "' not in data");
        col = *found;
      }
      const auto in = BilateralFromPanel(panel, col);
      BilateralReport r{panel.units()[panel.base_unit()],
                        panel.units()[col],
                        ClassicalIndex(in, ClassicalKind::kLaspeyres),
                        ClassicalIndex(in, ClassicalKind::kPaasche),
                        ClassicalIndex(in, ClassicalKind::kMarshallEdgeworth),
                        ClassicalIndex(in, ClassicalKind::kWalsh),
                        MplTwoPeriod(in)};
      Write(EmitReport(r, format), common, out);
    } else if (tpd->parsed()) {
      const Panel panel = LoadBasket(common, err);
      const auto fit = FitDummyIndex(panel, weighted);
      Write(EmitReport(fit, panel.mode(), common.k, format), common, out);
    } else if (update_period->parsed() || update_unit->parsed()) {
      const Panel panel = LoadBasket(common, err);
      const NewUnit unit = LoadNew(new_path, panel);
      const auto options = EstimateOptionsFrom(common);
      UpdateResult result = [&] {
        if (update_unit->parsed()) return UpdateMultilateral(panel, unit, options);
        return UpdateMultiperiod(EstimateDeflators(panel, options), panel, unit);
      }();
      Write(EmitReport(ToIndexSeries(result.estimate, common.k), MetaFor(result.estimate), format,
                       &result.changed_mask),
            common, out);
    } else if (simulate->parsed()) {
      const Panel panel = LoadBasket(common, err);
      SimulationConfig cfg;
      cfg.scheme = ParseScheme(sim.scheme);
      cfg.replications = sim.reps;
      cfg.seed = sim.seed;
      cfg.noise_mean = sim.noise_mean;
      cfg.noise_sd_max = sim.noise_sd_max;
      cfg.k = common.k;
      cfg.estimators.clear();
      for (const auto& name : sim.estimators) cfg.estimators.push_back(ParseEstimatorKind(name));
      if (weighted) cfg.estimators.push_back(EstimatorKind::kTpdWeighted);
      cfg.mpl_options = EstimateOptionsFrom(common);
      cfg.workers = sim.workers;
      cfg.keep_draws = sim.dump_draws;
      const auto report = Simulate(panel, cfg);
      for (const auto& s : report.estimators) {
        if (s.failures > 0) {
          err << "warning: " << ToString(s.kind) << " failed in " << s.failures << " of "
              << cfg.replications << " replications; excluded from averages\n";
        }
      }
      Write(EmitReport(report, format), common, out);
    }
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const EstimationError& e) {
    err << "estimation error: " << e.what() << "\n";
    return kExitEstimation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitEstimation;
  }
  return kExitOk;
}

}  // namespace mplindex
