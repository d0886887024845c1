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

#include <sstream>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mplindex/bilateral.hpp"
#include "mplindex/cli.hpp"
#include "mplindex/dummy.hpp"
#include "mplindex/errors.hpp"
#include "mplindex/estimator.hpp"
#include "mplindex/panel.hpp"
#include "mplindex/report.hpp"
#include "mplindex/simulation.hpp"
#include "mplindex/updating.hpp"

namespace py = pybind11;
using namespace mplindex;

namespace {

Panel LoadPanelPy(const std::string& path, const std::string& mode, const std::string& base,
                  const std::vector<std::string>& units) {
  return LoadPanelFile(path, LoadOptions{ParseMode(mode), base, units});
}

Panel LoadPanelText(const std::string& text, const std::string& mode, const std::string& base,
                    const std::vector<std::string>& units) {
  std::istringstream in(text);
  return LoadPanel(in, LoadOptions{ParseMode(mode), base, units});
}

py::dict SeriesDict(const IndexSeries& s) {
  py::dict d;
  d["units"] = s.units;
  d["index"] = s.index;
  d["se"] = s.se;
  d["lo"] = s.lo;
  d["hi"] = s.hi;
  d["k"] = s.k;
  if (s.mode == Mode::kTime) d["pct_change"] = s.pct_change;
  return d;
}

py::dict SimulationDict(const SimulationReport& r) {
  py::dict out;
  out["units"] = r.units;
  py::dict estimators;
  for (const auto& s : r.estimators) {
    py::dict e;
    e["successes"] = s.successes;
    e["failures"] = s.failures;
    e["mean_index"] = s.mean_index;
    e["sd_index"] = s.sd_index;
    e["mean_se"] = s.mean_se;
    e["lo_emp"] = s.lo_emp;
    e["hi_emp"] = s.hi_emp;
    e["lo_model"] = s.lo_model;
    e["hi_model"] = s.hi_model;
    if (r.config.keep_draws) e["draws"] = s.draws;
    estimators[ToString(s.kind)] = e;
  }
  out["estimators"] = estimators;
  return out;
}

}  // namespace

PYBIND11_MODULE(_mplindex, m) {
  m.doc() = "Multi-period / multilateral price index estimation";

  auto validation = py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<EstimationError>(m, "EstimationError", PyExc_ArithmeticError);
  (void)validation;

  py::class_<Panel>(m, "Panel")
      .def(py::init([](std::vector<std::string> items, std::vector<std::string> units,
                       Eigen::MatrixXd values, Eigen::MatrixXd quantities,
                       std::size_t base_unit, const std::string& mode) {
             return Panel(std::move(items), std::move(units), std::move(values),
                          std::move(quantities), base_unit, ParseMode(mode));
           }),
           py::arg("items"), py::arg("units"), py::arg("values"), py::arg("quantities"),
           py::arg("base_unit") = 0, py::arg("mode") = "time")
      .def_property_readonly("items", &Panel::items)
      .def_property_readonly("units", &Panel::units)
      .def_property_readonly("values", &Panel::values)
      .def_property_readonly("quantities", &Panel::quantities)
      .def_property_readonly("present", &Panel::present)
      .def_property_readonly("base_unit", &Panel::base_unit)
      .def_property_readonly("mode", [](const Panel& p) { return std::string(ToString(p.mode())); })
      .def("to_csv", [](const Panel& p) {
        std::ostringstream out;
        EmitPanel(p, out);
        return out.str();
      });

  py::class_<DeflatorEstimate>(m, "DeflatorEstimate")
      .def_readonly("units", &DeflatorEstimate::units)
      .def_readonly("base_unit", &DeflatorEstimate::base_unit)
      .def_readonly("deflators", &DeflatorEstimate::deflators)
      .def_readonly("indexes", &DeflatorEstimate::indexes)
      .def_readonly("ref_prices", &DeflatorEstimate::ref_prices)
      .def_readonly("sigma2", &DeflatorEstimate::sigma2)
      .def_readonly("dof", &DeflatorEstimate::dof)
      .def_readonly("ssr", &DeflatorEstimate::ssr)
      .def_readonly("cov_deflators", &DeflatorEstimate::cov_deflators)
      .def_readonly("covariance_stale", &DeflatorEstimate::covariance_stale);

  m.def("load_panel", &LoadPanelPy, py::arg("path"), py::arg("mode") = "time",
        py::arg("base") = "", py::arg("units") = std::vector<std::string>{});
  m.def("load_panel_text", &LoadPanelText, py::arg("text"), py::arg("mode") = "time",
        py::arg("base") = "", py::arg("units") = std::vector<std::string>{});
  m.def("build_reference_basket", [](const Panel& p) {
    auto [kept, report] = BuildReferenceBasket(p);
    return py::make_tuple(kept, report.dropped_items, report.absent_from_base);
  });
  m.def("implied_prices", [](const Panel& p) { return ImpliedPrices(p).prices; });
  m.def("pseudo_reciprocal", &PseudoReciprocal);

  m.def(
      "estimate_deflators",
      [](const Panel& p, const std::string& variance, const std::string& dof) {
        return EstimateDeflators(p, EstimateOptions{ParseVarianceMethod(variance), ParseDofRule(dof)});
      },
      py::arg("panel"), py::arg("variance") = "full", py::arg("dof") = "paper");
  m.def(
      "deflator_covariance",
      [](const DeflatorEstimate& e, const std::string& method) {
        return DeflatorCovariance(e, ParseVarianceMethod(method));
      },
      py::arg("estimate"), py::arg("method") = "full");
  m.def(
      "index_variance",
      [](const DeflatorEstimate& e, const std::string& method) {
        return IndexVariance(e, ParseVarianceMethod(method));
      },
      py::arg("estimate"), py::arg("method") = "full");
  m.def(
      "index_series", [](const DeflatorEstimate& e, double k) { return SeriesDict(ToIndexSeries(e, k)); },
      py::arg("estimate"), py::arg("k") = 3.0);

  m.def(
      "update_multilateral",
      [](const Panel& p, const std::string& label, const Eigen::VectorXd& v, const Eigen::VectorXd& q) {
        auto r = UpdateMultilateral(p, NewUnit{label, v, q});
        return py::make_tuple(r.estimate, r.changed_mask);
      },
      py::arg("panel"), py::arg("label"), py::arg("values"), py::arg("quantities"));
  m.def(
      "update_multiperiod",
      [](const DeflatorEstimate& prior, const Panel& p, const std::string& label,
         const Eigen::VectorXd& v, const Eigen::VectorXd& q) {
        auto r = UpdateMultiperiod(prior, p, NewUnit{label, v, q});
        return py::make_tuple(r.estimate, r.changed_mask);
      },
      py::arg("prior"), py::arg("panel"), py::arg("label"), py::arg("values"), py::arg("quantities"));

  m.def("quadratic_form_index", &QuadraticFormIndex, py::arg("p1"), py::arg("p2"), py::arg("a"));
  m.def(
      "classical_index",
      [](const Eigen::VectorXd& p1, const Eigen::VectorXd& p2, const Eigen::VectorXd& q1,
         const Eigen::VectorXd& q2, const std::string& kind) {
        const BilateralInput in{p1, p2, q1, q2};
        for (auto k : {ClassicalKind::kLaspeyres, ClassicalKind::kPaasche,
                       ClassicalKind::kMarshallEdgeworth, ClassicalKind::kWalsh}) {
          if (kind == ToString(k)) return ClassicalIndex(in, k);
        }
        throw ValidationError("unknown index kind '" + kind + "'");
      },
      py::arg("p1"), py::arg("p2"), py::arg("q1"), py::arg("q2"), py::arg("kind"));
  m.def(
      "mpl_two_period",
      [](const Eigen::VectorXd& p1, const Eigen::VectorXd& p2, const Eigen::VectorXd& q1,
         const Eigen::VectorXd& q2) { return MplTwoPeriod(BilateralInput{p1, p2, q1, q2}); },
      py::arg("p1"), py::arg("p2"), py::arg("q1"), py::arg("q2"));

  m.def(
      "fit_dummy_index",
      [](const Panel& p, bool weighted) {
        const auto fit = FitDummyIndex(p, weighted);
        py::dict d;
        d["units"] = fit.units;
        d["indexes"] = fit.indexes;
        d["log_unit_effects"] = fit.log_unit_effects;
        d["se"] = fit.se;
        d["index_se"] = fit.IndexSe();
        d["item_effects"] = fit.item_effects;
        d["sigma2"] = fit.sigma2;
        return d;
      },
      py::arg("panel"), py::arg("weighted") = false);

  m.def(
      "simulate",
      [](const Panel& p, const std::string& scheme, int replications, double noise_mean,
         double noise_sd_max, std::uint64_t seed, double k, const std::vector<std::string>& estimators,
         int workers, bool keep_draws) {
        SimulationConfig cfg;
        cfg.scheme = ParseScheme(scheme);
        cfg.replications = replications;
        cfg.noise_mean = noise_mean;
        cfg.noise_sd_max = noise_sd_max;
        cfg.seed = seed;
        cfg.k = k;
        cfg.estimators.clear();
        for (const auto& e : estimators) cfg.estimators.push_back(ParseEstimatorKind(e));
        cfg.workers = workers;
        cfg.keep_draws = keep_draws;
        SimulationReport report;
        {
          py::gil_scoped_release release;
          report = Simulate(p, cfg);
        }
        return SimulationDict(report);
      },
      py::arg("panel"), py::arg("scheme") = "additive_on_base", py::arg("replications") = 1000,
      py::arg("noise_mean") = 20000.0, py::arg("noise_sd_max") = 1000.0, py::arg("seed") = 0,
      py::arg("k") = 3.0, py::arg("estimators") = std::vector<std::string>{"mpl", "tpd"},
      py::arg("workers") = 1, py::arg("keep_draws") = false);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = RunCli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));

#ifdef MPLINDEX_VERSION
  m.attr("__version__") = MPLINDEX_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
