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

#include "mplindex/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "mplindex/errors.hpp"

namespace mplindex {
namespace {

using nlohmann::json;

json Number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string Csv(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Format ParseFormat(const std::string& text) {
  if (text == "csv") return Format::kCsv;
  if (text == "json") return Format::kJson;
  throw ValidationError("unknown format '" + text + "' (expected json|csv)");
}

std::string FormatNumber(double x) {
  if (!std::isfinite(x)) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

ReportMeta MetaFor(const DeflatorEstimate& estimate) {
  return ReportMeta{estimate.mode, estimate.units[estimate.base_unit],
                    estimate.variance_method, estimate.dof_rule, estimate.covariance_stale};
}

std::string EmitReport(const IndexSeries& s, const ReportMeta& meta, Format format,
                       const std::vector<bool>* changed) {
  const auto t = s.units.size();
  const bool has_pct = meta.mode == Mode::kTime && s.pct_change.size() == t;
  if (format == Format::kJson) {
    json doc;
    doc["meta"] = {{"mode", ToString(meta.mode)},
                   {"base", meta.base},
                   {"variance_method", ToString(meta.variance)},
                   {"dof_rule", ToString(meta.dof)},
                   {"k", s.k}};
    if (meta.covariance_stale) doc["meta"]["covariance_stale"] = true;
    doc["series"] = json::array();
    for (std::size_t j = 0; j < t; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      json row = {{"unit", s.units[j]},
                  {"index", Number(s.index(jj))},
                  {"se", Number(s.se(jj))},
                  {"lo", Number(s.lo(jj))},
                  {"hi", Number(s.hi(jj))}};
      if (has_pct) row["pct_change"] = s.pct_change[j] ? Number(*s.pct_change[j]) : json(nullptr);
      if (changed) row["changed"] = static_cast<bool>((*changed)[j]);
      doc["series"].push_back(std::move(row));
    }
    return doc.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "unit,index,se,lo,hi,pct_change" << (changed ? ",changed" : "") << '\n';
  for (std::size_t j = 0; j < t; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    out << Csv(s.units[j]) << ',' << FormatNumber(s.index(jj)) << ',' << FormatNumber(s.se(jj))
        << ',' << FormatNumber(s.lo(jj)) << ',' << FormatNumber(s.hi(jj)) << ',';
    if (has_pct && s.pct_change[j]) out << FormatNumber(*s.pct_change[j]);
    if (changed) out << ',' << ((*changed)[j] ? "true" : "false");
    out << '\n';
  }
  return out.str();
}

std::string EmitReport(const DummyFit& fit, Mode mode, double k, Format format) {
  const Eigen::VectorXd se = fit.IndexSe();
  if (format == Format::kJson) {
    json doc;
    doc["meta"] = {{"mode", ToString(mode)},
                   {"base", fit.units[fit.base_unit]},
                   {"method", mode == Mode::kTime ? "tpd" : "cpd"},
                   {"weighted", fit.weighted},
                   {"dof", fit.dof},
                   {"k", k}};
    doc["series"] = json::array();
    for (std::size_t j = 0; j < fit.units.size(); ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      doc["series"].push_back({{"unit", fit.units[j]},
                               {"index", Number(fit.indexes(jj))},
                               {"se", Number(se(jj))},
                               {"lo", Number(fit.indexes(jj) - k * se(jj))},
                               {"hi", Number(fit.indexes(jj) + k * se(jj))},
                               {"log_effect", Number(fit.log_unit_effects(jj))},
                               {"log_se", Number(fit.se(jj))}});
    }
    return doc.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "unit,index,se,lo,hi,log_effect,log_se\n";
  for (std::size_t j = 0; j < fit.units.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    out << Csv(fit.units[j]) << ',' << FormatNumber(fit.indexes(jj)) << ','
        << FormatNumber(se(jj)) << ',' << FormatNumber(fit.indexes(jj) - k * se(jj)) << ','
        << FormatNumber(fit.indexes(jj) + k * se(jj)) << ','
        << FormatNumber(fit.log_unit_effects(jj)) << ',' << FormatNumber(fit.se(jj)) << '\n';
  }
  return out.str();
}

std::string EmitReport(const BilateralReport& r, Format format) {
  const std::pair<const char*, double> rows[] = {{"laspeyres", r.laspeyres},
                                                 {"paasche", r.paasche},
                                                 {"marshall_edgeworth", r.marshall_edgeworth},
                                                 {"walsh", r.walsh},
                                                 {"mpl", r.mpl}};
  if (format == Format::kJson) {
    json doc;
    doc["meta"] = {{"base", r.base}, {"target", r.target}};
    doc["indexes"] = json::object();
    for (const auto& [name, value] : rows) doc["indexes"][name] = Number(value);
    return doc.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "base,target,kind,index\n";
  for (const auto& [name, value] : rows) {
    out << Csv(r.base) << ',' << Csv(r.target) << ',' << name << ',' << FormatNumber(value)
        << '\n';
  }
  return out.str();
}

std::string EmitReport(const SimulationReport& report, Format format) {
  const auto& cfg = report.config;
  if (format == Format::kJson) {
    json doc;
    json estimators = json::array();
    for (const auto kind : cfg.estimators) estimators.push_back(ToString(kind));
    doc["meta"] = {{"scheme", ToString(cfg.scheme)},
                   {"replications", cfg.replications},
                   {"noise_mean", cfg.noise_mean},
                   {"noise_sd_max", cfg.noise_sd_max},
                   {"seed", cfg.seed},
                   {"k", cfg.k},
                   {"base", report.units[report.base_unit]},
                   {"variance_method", ToString(cfg.mpl_options.variance)},
                   {"dof_rule", ToString(cfg.mpl_options.dof)},
                   {"estimators", estimators}};
    doc["estimators"] = json::array();
    for (const auto& s : report.estimators) {
      json e = {{"name", ToString(s.kind)},
                {"successes", s.successes},
                {"failures", s.failures},
                {"series", json::array()}};
      for (std::size_t j = 0; j < report.units.size(); ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        e["series"].push_back({{"unit", report.units[j]},
                               {"mean_index", Number(s.mean_index(jj))},
                               {"sd_emp", Number(s.sd_index(jj))},
                               {"lo_emp", Number(s.lo_emp(jj))},
                               {"hi_emp", Number(s.hi_emp(jj))},
                               {"se_model", Number(s.mean_se(jj))},
                               {"lo_model", Number(s.lo_model(jj))},
                               {"hi_model", Number(s.hi_model(jj))}});
      }
      if (cfg.keep_draws) {
        e["draws"] = json::array();
        for (const auto& d : s.draws) {
          json row = json::array();
          for (Eigen::Index j = 0; j < d.size(); ++j) row.push_back(Number(d(j)));
          e["draws"].push_back(std::move(row));
        }
      }
      doc["estimators"].push_back(std::move(e));
    }
    return doc.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "estimator,unit,mean_index,sd_emp,lo_emp,hi_emp,se_model,lo_model,hi_model,successes,"
         "failures\n";
  for (const auto& s : report.estimators) {
    for (std::size_t j = 0; j < report.units.size(); ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      out << ToString(s.kind) << ',' << Csv(report.units[j]) << ','
          << FormatNumber(s.mean_index(jj)) << ',' << FormatNumber(s.sd_index(jj)) << ','
          << FormatNumber(s.lo_emp(jj)) << ',' << FormatNumber(s.hi_emp(jj)) << ','
          << FormatNumber(s.mean_se(jj)) << ',' << FormatNumber(s.lo_model(jj)) << ','
          << FormatNumber(s.hi_model(jj)) << ',' << s.successes << ',' << s.failures << '\n';
    }
  }
  return out.str();
}

}  // namespace mplindex
