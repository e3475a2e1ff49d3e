#include "surffv/table.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "surffv/types.hpp"

namespace surffv {

double eoc_step(double coarse_error, double fine_error, double coarse_h, double fine_h) {
  if (!(coarse_h > fine_h) || !(fine_h > 0.0)) {
    throw ParameterError("eoc_step: mesh widths must decrease");
  }
  if (fine_error == 0.0) return std::numeric_limits<double>::infinity();
  return std::log(coarse_error / fine_error) / std::log(coarse_h / fine_h);
}

void ConvergenceTable::add(int level, double h, int ncells, double l1) {
  ConvergenceRow row;
  row.level = level;
  row.h = h;
  row.ncells = ncells;
  row.l1 = l1;
  if (!rows.empty()) {
    row.eoc = eoc_step(rows.back().l1, l1, rows.back().h, h);
  }
  rows.push_back(row);
}

const ConvergenceRow& ConvergenceTable::finest() const {
  if (rows.empty()) throw ParameterError("empty convergence table");
  return rows.back();
}

namespace {
std::string format_rows(const ConvergenceTable& table, char sep) {
  std::ostringstream out;
  char buf[128];
  for (const auto& row : table.rows) {
    std::snprintf(buf, sizeof(buf), "%d%c%.6g%c%d%c%.6g%c", row.level, sep, row.h, sep,
                  row.ncells, sep, row.l1, sep);
    out << buf;
    if (row.eoc) {
      if (std::isinf(*row.eoc)) {
        out << "inf";
      } else {
        std::snprintf(buf, sizeof(buf), "%.3f", *row.eoc);
        out << buf;
      }
    }
    out << "\n";
  }
  return out.str();
}
}  // namespace

void write_table_csv(const ConvergenceTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot open " + path);
  out << "level,h,ncells,l1,eoc\n" << format_rows(table, ',');
}

std::string format_table(const ConvergenceTable& table) {
  std::ostringstream out;
  out << "level\th\tncells\tl1\teoc\n" << format_rows(table, '\t');
  return out.str();
}

}  // namespace surffv
