#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

namespace hdgmv::detail {

// Proleptic Gregorian civil date from a day count (days since 1970-01-01).
inline std::string iso_date_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const std::int64_t doe = z - era * 146097;
  const std::int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = yoe + era * 400;
  const std::int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const std::int64_t mp = (5 * doy + 2) / 153;
  const std::int64_t d = doy - (153 * mp + 2) / 5 + 1;
  const std::int64_t m = mp < 10 ? mp + 3 : mp - 9;
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%04lld-%02lld-%02lld",
                static_cast<long long>(m <= 2 ? y + 1 : y), static_cast<long long>(m),
                static_cast<long long>(d));
  return buf;
}

// T consecutive calendar days starting at the given day count
// (default 2000-01-01 = day 10957).
inline std::vector<std::string> synthetic_dates(std::int64_t count, std::int64_t start_day = 10957) {
  std::vector<std::string> dates;
  dates.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) dates.push_back(iso_date_from_days(start_day + i));
  return dates;
}

}  // namespace hdgmv::detail
