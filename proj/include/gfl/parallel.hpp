#pragma once

#include <vector>

namespace gfl::detail {

/// Sum of per_row(r) over r in [0, rows). Rows are computed in parallel but
/// combined serially in row order, so the result does not depend on the
/// number of threads.
template <class PerRow>
double sum_rows(int rows, PerRow&& per_row) {
  std::vector<double> partial(static_cast<std::size_t>(rows));
#pragma omp parallel for schedule(static) if (rows >= 64)
  for (int r = 0; r < rows; ++r) {
    partial[static_cast<std::size_t>(r)] = per_row(r);
  }
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

} // namespace gfl::detail
