#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace domeloc {

// Median with the usual even-count convention (mean of the two middle values).
inline double median_of(std::vector<double> values) {
  if (values.empty()) throw std::domain_error("median of empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace domeloc
