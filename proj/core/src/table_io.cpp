// Copyright (c) 2026 pnspec developers
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdio>
#include <ostream>

#include "pnspec/error_analysis.hpp"

namespace pnspec {
namespace {

std::string sci(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*E", digits - 1, v);
  return buf;
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

void ConvergenceTable::write_csv(std::ostream& os, int digits) const {
  os << "# table " << quantity << " ic " << ic << " t " << t;
  if (fixed_order >= 0) os << " N " << fixed_order;
  os << "\n";
  for (std::size_t c = 0; c < col_labels.size(); ++c) {
    os << "# block " << col_labels[c] << "\n";
    os << "eps,error,order\n";
    for (std::size_t r = 0; r < eps_rows.size(); ++r) {
      const Cell& cell = cells[r][c];
      os << eps_rows[r].str() << ',' << sci(cell.value, digits) << ',';
      if (cell.below_floor)
        os << "below-floor";
      else if (cell.has_order)
        os << fixed2(cell.order);
      os << "\n";
    }
  }
}

void ConvergenceTable::write_markdown(std::ostream& os) const {
  os << "### " << ic << ", " << quantity;
  if (fixed_order >= 0) os << " (P" << fixed_order << ")";
  os << ", t = " << t << "\n\n";
  os << "| eps |";
  for (const std::string& label : col_labels) os << ' ' << label << " | order |";
  os << "\n|---|";
  for (std::size_t c = 0; c < col_labels.size(); ++c) os << "---|---|";
  os << "\n";
  for (std::size_t r = 0; r < eps_rows.size(); ++r) {
    os << "| " << eps_rows[r].str() << " |";
    for (std::size_t c = 0; c < col_labels.size(); ++c) {
      const Cell& cell = cells[r][c];
      os << ' ' << sci(cell.value, 3);
      if (cell.below_floor) os << " (below floor)";
      os << " | ";
      os << (cell.has_order ? fixed2(cell.order) : std::string("--"));
      os << " |";
    }
    os << "\n";
  }
  os << "\n";
}

}  // namespace pnspec
