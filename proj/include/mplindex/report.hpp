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

#ifndef MPLINDEX_REPORT_HPP_
#define MPLINDEX_REPORT_HPP_

#include <string>
#include <vector>

#include "mplindex/dummy.hpp"
#include "mplindex/estimator.hpp"
#include "mplindex/simulation.hpp"

namespace mplindex {

enum class Format { kCsv, kJson };

Format ParseFormat(const std::string& text);

// %.17g; empty for NaN.
std::string FormatNumber(double x);

struct ReportMeta {
  Mode mode = Mode::kTime;
  std::string base;
  VarianceMethod variance = VarianceMethod::kFullPartition;
  DofRule dof = DofRule::kPaper;
  bool covariance_stale = false;
};

ReportMeta MetaFor(const DeflatorEstimate& estimate);

// CSV columns: unit,index,se,lo,hi,pct_change[,changed]. JSON:
// {meta:{mode,base,variance_method,dof_rule}, series:[{unit,index,se,lo,hi,
// pct_change?}]}; pct_change is omitted in space mode and null for the first
// period. `changed`, when given, adds a per-unit flag.
std::string EmitReport(const IndexSeries& series, const ReportMeta& meta, Format format,
                       const std::vector<bool>* changed = nullptr);

std::string EmitReport(const DummyFit& fit, Mode mode, double k, Format format);

struct BilateralReport {
  std::string base;
  std::string target;
  double laspeyres = 0.0;
  double paasche = 0.0;
  double marshall_edgeworth = 0.0;
  double walsh = 0.0;
  double mpl = 0.0;
};

std::string EmitReport(const BilateralReport& report, Format format);

std::string EmitReport(const SimulationReport& report, Format format);

}  // namespace mplindex

#endif  // MPLINDEX_REPORT_HPP_
