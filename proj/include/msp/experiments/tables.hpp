#ifndef MSP_EXPERIMENTS_TABLES_HPP
#define MSP_EXPERIMENTS_TABLES_HPP

#include "msp/bounds/poly.hpp"
#include "msp/experiments/report.hpp"

#include <string>
#include <vector>

namespace msp {

/// The interval hulls I_{k+1}, k = 1..max_k, as reports with no computed
/// spectrum, so that they go through the common CSV and JSON writers.
inline std::vector<ExperimentReport> bounds_table_reports(int max_k)
{
  std::vector<ExperimentReport> out;
  for (const auto& row : bounds_table(max_k)) {
    ExperimentReport r;
    r.label = "interval_I" + std::to_string(row.k + 1);
    r.bounds = row.interval;
    r.extras = {{"k", double(row.k)}};
    out.push_back(std::move(r));
  }
  return out;
}

} // namespace msp

#endif
