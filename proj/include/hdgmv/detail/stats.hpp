#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace hdgmv::detail {

struct MeanAndError {
  double mean = 0.0;
  double std_error = 0.0;
};

// Mean and standard error accumulated in container order.
inline MeanAndError mean_and_error(const std::vector<double>& values) {
  MeanAndError out;
  const std::size_t n = values.size();
  if (n == 0) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(n);
  if (n < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.std_error = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  return out;
}

}  // namespace hdgmv::detail
