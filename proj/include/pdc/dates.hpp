#pragma once

#include <chrono>
#include <compare>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "pdc/errors.hpp"

namespace pdc {

// Calendar date stored as days since 1970-01-01.
struct Date {
  int serial = 0;

  static Date from_ymd(int y, int m, int d) {
    using namespace std::chrono;
    year_month_day ymd{year{y}, month{unsigned(m)}, day{unsigned(d)}};
    if (!ymd.ok()) throw InvalidArgument("invalid calendar date");
    return Date{int(sys_days{ymd}.time_since_epoch().count())};
  }

  // Strict "YYYY-MM-DD".
  static Date parse(std::string_view s) {
    int y = 0, m = 0, d = 0;
    char tail = 0;
    if (std::sscanf(std::string(s).c_str(), "%4d-%2d-%2d%c", &y, &m, &d, &tail) != 3)
      throw InvalidArgument("bad date '" + std::string(s) + "', want YYYY-MM-DD");
    return from_ymd(y, m, d);
  }

  std::string iso() const {
    using namespace std::chrono;
    year_month_day ymd{sys_days{days{serial}}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", int(ymd.year()), unsigned(ymd.month()),
                  unsigned(ymd.day()));
    return buf;
  }

  // Monday = 0 ... Sunday = 6.
  int weekday() const {
    using namespace std::chrono;
    return int(std::chrono::weekday{sys_days{days{serial}}}.iso_encoding()) - 1;
  }

  friend auto operator<=>(const Date&, const Date&) = default;
};

inline Date operator+(Date a, int days) { return Date{a.serial + days}; }
inline int operator-(Date a, Date b) { return a.serial - b.serial; }

// "HH:MM" -> minute of day.
inline int parse_minute_of_day(std::string_view s) {
  int h = 0, m = 0;
  char tail = 0;
  if (std::sscanf(std::string(s).c_str(), "%2d:%2d%c", &h, &m, &tail) != 2 || h < 0 || h > 23 ||
      m < 0 || m > 59)
    throw InvalidArgument("bad time '" + std::string(s) + "', want HH:MM");
  return h * 60 + m;
}

// Order timestamps: "YYYY-MM-DDTHH:MM" (minute precision).
struct Timestamp {
  Date day;
  int minute = 0;  // minute of day

  static Timestamp parse(std::string_view s) {
    auto t = s.find('T');
    if (t == std::string_view::npos)
      throw InvalidArgument("bad timestamp '" + std::string(s) + "', want YYYY-MM-DDTHH:MM");
    return Timestamp{Date::parse(s.substr(0, t)), parse_minute_of_day(s.substr(t + 1))};
  }

  std::string iso() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "T%02d:%02d", minute / 60, minute % 60);
    return day.iso() + buf;
  }

  long long abs_minute() const { return (long long)day.serial * 1440 + minute; }

  friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

}  // namespace pdc
