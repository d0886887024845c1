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

#include "mplindex/panel.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "mplindex/errors.hpp"

namespace mplindex {
namespace {

constexpr const char* kHeader = "item_id,unit_id,value,quantity";

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::string_view Unquote(std::string_view s) {
  s = Trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s.remove_prefix(1);
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double ParseNumber(std::string_view text, std::size_t line, const char* what) {
  text = Unquote(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw FormatError(line, std::string("cannot parse ") + what + " '" +
                                std::string(text) + "'");
  }
  if (!std::isfinite(out)) {
    throw FormatError(line, std::string("non-finite ") + what);
  }
  return out;
}

struct Row {
  std::string item;
  std::string unit;
  double value;
  double quantity;
  std::size_t line;
};

// Parses data rows, skipping blank lines. The header must come first.
std::vector<Row> ReadRows(std::istream& in) {
  std::vector<Row> rows;
  std::string raw;
  std::size_t line = 0;
  bool seen_header = false;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text = Trim(raw);
    if (line == 1 && text.size() >= 3 &&
        static_cast<unsigned char>(text[0]) == 0xEF) {
      text.remove_prefix(3);  // UTF-8 BOM
    }
    if (text.empty()) continue;
    if (!seen_header) {
      std::string normalized;
      for (auto field : SplitFields(text)) {
        if (!normalized.empty()) normalized += ',';
        normalized += Unquote(field);
      }
      if (normalized != kHeader) {
        throw FormatError(line, std::string("expected header '") + kHeader + "'");
      }
      seen_header = true;
      continue;
    }
    const auto fields = SplitFields(text);
    if (fields.size() != 4) {
      throw FormatError(line, "expected 4 fields, got " + std::to_string(fields.size()));
    }
    Row row{std::string(Unquote(fields[0])), std::string(Unquote(fields[1])),
            ParseNumber(fields[2], line, "value"),
            ParseNumber(fields[3], line, "quantity"), line};
    if (row.item.empty() || row.unit.empty()) {
      throw FormatError(line, "empty item_id or unit_id");
    }
    rows.push_back(std::move(row));
  }
  if (!seen_header) throw FormatError(line == 0 ? 1 : line, "missing header");
  return rows;
}

void CheckCell(double value, double quantity, const std::string& item,
               const std::string& unit) {
  const bool ok = (value > 0.0 && quantity > 0.0) || (value == 0.0 && quantity == 0.0);
  if (!ok || !std::isfinite(value) || !std::isfinite(quantity)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "inconsistent cell (" << item << ", " << unit << "): value=" << value
        << " quantity=" << quantity;
    throw InconsistentCell(msg.str());
  }
}

std::string FormatNumber(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

const char* ToString(Mode mode) { return mode == Mode::kTime ? "time" : "space"; }

Mode ParseMode(const std::string& text) {
  if (text == "time") return Mode::kTime;
  if (text == "space") return Mode::kSpace;
  throw ValidationError("unknown mode '" + text + "' (expected time|space)");
}

Panel::Panel(std::vector<std::string> items, std::vector<std::string> units,
             Eigen::MatrixXd values, Eigen::MatrixXd quantities,
             std::size_t base_unit, Mode mode)
    : items_(std::move(items)),
      units_(std::move(units)),
      values_(std::move(values)),
      quantities_(std::move(quantities)),
      base_unit_(base_unit),
      mode_(mode) {
  const auto n = static_cast<Eigen::Index>(items_.size());
  const auto t = static_cast<Eigen::Index>(units_.size());
  if (n < 1 || t < 1) throw InvalidDimension("panel needs at least one item and one unit");
  if (values_.rows() != n || values_.cols() != t || quantities_.rows() != n ||
      quantities_.cols() != t) {
    throw InvalidDimension("value/quantity matrices must be " + std::to_string(n) +
                           "x" + std::to_string(t));
  }
  if (base_unit_ >= units_.size()) throw InvalidDimension("base unit out of range");
  present_.resize(n, t);
  for (Eigen::Index j = 0; j < t; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      CheckCell(values_(i, j), quantities_(i, j), items_[i], units_[j]);
      present_(i, j) = values_(i, j) > 0.0;
    }
    if (!present_.col(j).any()) {
      throw BasketViolation("unit '" + units_[j] + "' has no observed items");
    }
  }
}

std::optional<std::size_t> Panel::FindUnit(const std::string& label) const {
  for (std::size_t j = 0; j < units_.size(); ++j) {
    if (units_[j] == label) return j;
  }
  return std::nullopt;
}

Panel Panel::WithValues(Eigen::MatrixXd values) const {
  return Panel(items_, units_, std::move(values), quantities_, base_unit_, mode_);
}

Panel Panel::WithBase(std::size_t base_unit) const {
  return Panel(items_, units_, values_, quantities_, base_unit, mode_);
}

Panel Panel::WithUnitOrder(const std::vector<std::size_t>& order) const {
  if (order.size() != units_.size()) throw InvalidDimension("unit order size mismatch");
  std::vector<std::string> units;
  Eigen::MatrixXd v(num_items(), num_units());
  Eigen::MatrixXd q(num_items(), num_units());
  std::size_t base = 0;
  std::vector<bool> used(units_.size(), false);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto j = order[k];
    if (j >= units_.size() || used[j]) throw InvalidDimension("unit order is not a permutation");
    used[j] = true;
    units.push_back(units_[j]);
    v.col(k) = values_.col(j);
    q.col(k) = quantities_.col(j);
    if (j == base_unit_) base = k;
  }
  return Panel(items_, std::move(units), std::move(v), std::move(q), base, mode_);
}

Panel Panel::WithItems(const std::vector<std::size_t>& rows) const {
  std::vector<std::string> items;
  Eigen::MatrixXd v(rows.size(), num_units());
  Eigen::MatrixXd q(rows.size(), num_units());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] >= items_.size()) throw InvalidDimension("item index out of range");
    items.push_back(items_[rows[k]]);
    v.row(k) = values_.row(rows[k]);
    q.row(k) = quantities_.row(rows[k]);
  }
  return Panel(std::move(items), units_, std::move(v), std::move(q), base_unit_, mode_);
}

Panel Panel::AppendUnit(const std::string& label, const Eigen::VectorXd& values,
                        const Eigen::VectorXd& quantities) const {
  if (values.size() != num_items() || quantities.size() != num_items()) {
    throw InvalidDimension("new unit must have " + std::to_string(num_items()) + " items");
  }
  if (FindUnit(label)) throw DuplicateObservation("unit '" + label + "' already in panel");
  auto units = units_;
  units.push_back(label);
  Eigen::MatrixXd v(num_items(), num_units() + 1);
  Eigen::MatrixXd q(num_items(), num_units() + 1);
  v << values_, values;
  q << quantities_, quantities;
  return Panel(items_, std::move(units), std::move(v), std::move(q), base_unit_, mode_);
}

Panel LoadPanel(std::istream& in, const LoadOptions& options) {
  const auto rows = ReadRows(in);
  std::vector<std::string> items, units;
  std::unordered_map<std::string, std::size_t> item_pos, unit_pos;
  for (const auto& row : rows) {
    if (item_pos.emplace(row.item, items.size()).second) items.push_back(row.item);
    if (unit_pos.emplace(row.unit, units.size()).second) units.push_back(row.unit);
  }
  if (!options.unit_order.empty()) {
    std::unordered_map<std::string, std::size_t> ordered;
    for (const auto& u : options.unit_order) {
      if (!ordered.emplace(u, ordered.size()).second) {
        throw ValidationError("unit '" + u + "' listed twice in unit order");
      }
      if (!unit_pos.count(u)) throw ValidationError("unit '" + u + "' not in data");
    }
    if (ordered.size() != units.size()) {
      throw ValidationError("unit order must list every unit in the data");
    }
    units = options.unit_order;
    unit_pos = std::move(ordered);
  }
  if (items.empty()) throw FormatError(1, "no data rows");

  const auto n = static_cast<Eigen::Index>(items.size());
  const auto t = static_cast<Eigen::Index>(units.size());
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, t);
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, t);
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> seen;
  for (const auto& row : rows) {
    const auto i = item_pos.at(row.item);
    const auto j = unit_pos.at(row.unit);
    if (auto [it, inserted] = seen.emplace(std::pair{i, j}, row.line); !inserted) {
      throw DuplicateObservation("duplicate observation (" + row.item + ", " + row.unit +
                                 ") on lines " + std::to_string(it->second) + " and " +
                                 std::to_string(row.line));
    }
    CheckCell(row.value, row.quantity, row.item, row.unit);
    v(i, j) = row.value;
    q(i, j) = row.quantity;
  }

  std::size_t base = 0;
  if (!options.base.empty()) {
    auto it = unit_pos.find(options.base);
    if (it == unit_pos.end()) throw ValidationError("base unit '" + options.base + "' not in data");
    base = it->second;
  }
  return Panel(std::move(items), std::move(units), std::move(v), std::move(q), base,
               options.mode);
}

Panel LoadPanelFile(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return LoadPanel(in, options);
}

NewUnit LoadNewUnit(std::istream& in, const std::vector<std::string>& items) {
  const auto rows = ReadRows(in);
  if (rows.empty()) throw FormatError(1, "no data rows");
  std::unordered_map<std::string, std::size_t> item_pos;
  for (std::size_t i = 0; i < items.size(); ++i) item_pos.emplace(items[i], i);
  NewUnit out{rows.front().unit, Eigen::VectorXd::Zero(items.size()),
              Eigen::VectorXd::Zero(items.size())};
  std::vector<bool> seen(items.size(), false);
  for (const auto& row : rows) {
    if (row.unit != out.label) {
      throw FormatError(row.line, "new-unit file mixes units '" + out.label + "' and '" +
                                      row.unit + "'");
    }
    auto it = item_pos.find(row.item);
    if (it == item_pos.end()) {
      throw BasketViolation("item '" + row.item + "' is not in the reference basket");
    }
    if (seen[it->second]) {
      throw DuplicateObservation("duplicate observation (" + row.item + ", " + row.unit + ")");
    }
    seen[it->second] = true;
    CheckCell(row.value, row.quantity, row.item, row.unit);
    out.values[it->second] = row.value;
    out.quantities[it->second] = row.quantity;
  }
  return out;
}

void EmitPanel(const Panel& panel, std::ostream& out) {
  out << kHeader << '\n';
  for (Eigen::Index j = 0; j < panel.num_units(); ++j) {
    for (Eigen::Index i = 0; i < panel.num_items(); ++i) {
      if (!panel.present()(i, j)) continue;
      out << panel.items()[i] << ',' << panel.units()[j] << ','
          << FormatNumber(panel.values()(i, j)) << ','
          << FormatNumber(panel.quantities()(i, j)) << '\n';
    }
  }
}

void CheckBasket(const Panel& panel) {
  for (Eigen::Index i = 0; i < panel.num_items(); ++i) {
    const auto count = panel.present().row(i).count();
    if (count < 2) {
      throw BasketViolation("item '" + panel.items()[i] + "' is present in " +
                            std::to_string(count) + " unit(s); at least 2 required");
    }
  }
}

std::pair<Panel, BasketReport> BuildReferenceBasket(const Panel& panel) {
  BasketReport report;
  std::vector<std::size_t> keep;
  for (Eigen::Index i = 0; i < panel.num_items(); ++i) {
    if (panel.present().row(i).count() >= 2) {
      keep.push_back(static_cast<std::size_t>(i));
    } else {
      report.dropped_items.push_back(panel.items()[i]);
    }
  }
  if (keep.empty()) throw EmptyBasket("no item is present in two or more units");

  Panel kept = keep.size() == panel.items().size() ? panel : panel.WithItems(keep);
  const Eigen::MatrixXi mask = kept.present().cast<int>();
  report.pair_intersections = mask.transpose() * mask;
  for (Eigen::Index i = 0; i < kept.num_items(); ++i) {
    if (!kept.present()(i, static_cast<Eigen::Index>(kept.base_unit()))) {
      report.absent_from_base.push_back(kept.items()[i]);
    }
  }
  return {std::move(kept), std::move(report)};
}

PriceMatrix ImpliedPrices(const Panel& panel) {
  PriceMatrix out{Eigen::MatrixXd::Zero(panel.num_items(), panel.num_units())};
  for (Eigen::Index j = 0; j < panel.num_units(); ++j) {
    for (Eigen::Index i = 0; i < panel.num_items(); ++i) {
      if (panel.present()(i, j)) {
        out.prices(i, j) = panel.values()(i, j) / panel.quantities()(i, j);
      }
    }
  }
  return out;
}

}  // namespace mplindex
