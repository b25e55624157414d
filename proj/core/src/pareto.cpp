// SPDX-License-Identifier: Apache-2.0

#include "hyperred/pareto.hpp"

namespace hyperred {

ParetoSet pareto_extract(std::vector<RunRecord> records) {
  require(!records.empty(), "pareto_extract: no records");

  ParetoSet out;
  out.records = std::move(records);
  const Index n = static_cast<Index>(out.records.size());
  for (Index i = 0; i < n; ++i) {
    const double ti = out.records[i].relative_online_time;
    const double ei = out.records[i].combined_error;
    bool dominated = false;
    for (Index j = 0; j < n && !dominated; ++j) {
      if (j == i) continue;
      const double tj = out.records[j].relative_online_time;
      const double ej = out.records[j].combined_error;
      dominated = tj <= ti && ej <= ei && (tj < ti || ej < ei);
    }
    if (!dominated) out.front.push_back(i);
  }
  return out;
}

}  // namespace hyperred
