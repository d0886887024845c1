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

#ifndef MPLINDEX_PANEL_HPP_
#define MPLINDEX_PANEL_HPP_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace mplindex {

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Units are periods in time mode and countries/areas in space mode.
enum class Mode { kTime, kSpace };

const char* ToString(Mode mode);
Mode ParseMode(const std::string& text);

// Item x unit panel of values and quantities.
//
// Absent cells hold exact zeros in both matrices; a cell is present iff its
// value and quantity are both strictly positive. Construction validates the
// cell invariant and that every unit has at least one observed item. The
// basket rule (each item seen in >= 2 units) is checked separately by
// CheckBasket, because raw panels may legitimately violate it before
// BuildReferenceBasket.
class Panel {
 public:
  Panel(std::vector<std::string> items, std::vector<std::string> units,
        Eigen::MatrixXd values, Eigen::MatrixXd quantities,
        std::size_t base_unit = 0, Mode mode = Mode::kTime);

  const std::vector<std::string>& items() const { return items_; }
  const std::vector<std::string>& units() const { return units_; }
  const Eigen::MatrixXd& values() const { return values_; }
  const Eigen::MatrixXd& quantities() const { return quantities_; }
  const BoolMatrix& present() const { return present_; }
  std::size_t base_unit() const { return base_unit_; }
  Mode mode() const { return mode_; }

  Eigen::Index num_items() const { return values_.rows(); }
  Eigen::Index num_units() const { return values_.cols(); }
  Eigen::Index num_present() const { return present_.count(); }

  std::optional<std::size_t> FindUnit(const std::string& label) const;

  // Copies with one aspect changed; all re-validate.
  Panel WithValues(Eigen::MatrixXd values) const;
  Panel WithBase(std::size_t base_unit) const;
  Panel WithUnitOrder(const std::vector<std::size_t>& order) const;
  Panel WithItems(const std::vector<std::size_t>& rows) const;
  Panel AppendUnit(const std::string& label, const Eigen::VectorXd& values,
                   const Eigen::VectorXd& quantities) const;

 private:
  std::vector<std::string> items_;
  std::vector<std::string> units_;
  Eigen::MatrixXd values_;
  Eigen::MatrixXd quantities_;
  BoolMatrix present_;
  std::size_t base_unit_;
  Mode mode_;
};

// Per-unit data for a unit not yet in a panel, aligned to the panel's items.
struct NewUnit {
  std::string label;
  Eigen::VectorXd values;
  Eigen::VectorXd quantities;
};

struct PriceMatrix {
  Eigen::MatrixXd prices;
};

struct BasketReport {
  std::vector<std::string> dropped_items;
  // Kept items that are missing from the base unit (zero-filled there).
  std::vector<std::string> absent_from_base;
  // Number of items shared by each pair of units; the diagonal holds basket
  // sizes.
  Eigen::MatrixXi pair_intersections;
};

struct LoadOptions {
  Mode mode = Mode::kTime;
  // Base unit label; the first unit when empty.
  std::string base;
  // Explicit unit ordering. Every unit in the data must be listed.
  std::vector<std::string> unit_order;
};

// Reads long-format CSV with header item_id,unit_id,value,quantity.
Panel LoadPanel(std::istream& in, const LoadOptions& options = {});
Panel LoadPanelFile(const std::string& path, const LoadOptions& options = {});

// Reads rows for a single new unit and aligns them to `items`. Items not in
// the rows are zero-filled; unknown items are rejected.
NewUnit LoadNewUnit(std::istream& in, const std::vector<std::string>& items);

// Writes present cells in long format with 17 significant digits.
void EmitPanel(const Panel& panel, std::ostream& out);

// Throws BasketViolation unless every item is present in >= 2 units.
void CheckBasket(const Panel& panel);

// Drops items present in fewer than two units.
std::pair<Panel, BasketReport> BuildReferenceBasket(const Panel& panel);

PriceMatrix ImpliedPrices(const Panel& panel);

}  // namespace mplindex

#endif  // MPLINDEX_PANEL_HPP_
