#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

namespace hdgmv::detail {

// Shortest round-trip decimal representation; parsing it back recovers the
// exact double, which is what makes rerun outputs byte-identical.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace hdgmv::detail
