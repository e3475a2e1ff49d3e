#ifndef SURFFV_TABLE_HPP
#define SURFFV_TABLE_HPP

#include <optional>
#include <string>
#include <vector>

namespace surffv {

struct ConvergenceRow {
  int level = 0;
  double h = 0.0;
  int ncells = 0;
  double l1 = 0.0;
  std::optional<double> eoc;  // absent on the first row
};

struct ConvergenceTable {
  std::string label;
  std::vector<ConvergenceRow> rows;

  // Appends a row, deriving the EOC from the previous one.
  void add(int level, double h, int ncells, double l1);

  const ConvergenceRow& finest() const;
};

// log(E_l / E_l1) / log(h_l / h_l1); infinite when the finer error vanishes.
double eoc_step(double coarse_error, double fine_error, double coarse_h, double fine_h);

// CSV with header level,h,ncells,l1,eoc; l1 with six significant digits,
// EOC with three decimals, blank on the first row.
void write_table_csv(const ConvergenceTable& table, const std::string& path);

std::string format_table(const ConvergenceTable& table);

}  // namespace surffv

#endif
