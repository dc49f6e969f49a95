#include "adlens/date.h"

#include <cstdio>

namespace adlens {
namespace {

bool digits(std::string_view s, std::size_t pos, std::size_t n, int &value) {
  if (pos + n > s.size()) return false;
  value = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    value = value * 10 + (s[i] - '0');
  }
  return true;
}

std::optional<Date> make_date(int y, int m, int d) {
  const std::chrono::year_month_day ymd{std::chrono::year{y},
                                        std::chrono::month{static_cast<unsigned>(m)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date(std::chrono::sys_days{ymd}.time_since_epoch().count());
}

std::optional<std::int64_t> make_seconds(int y, int mo, int d, int h, int mi,
                                         int s) {
  auto date = make_date(y, mo, d);
  if (!date || h > 23 || mi > 59 || s > 60) return std::nullopt;
  return static_cast<std::int64_t>(date->days()) * 86400 + h * 3600 + mi * 60 + s;
}

}  // namespace

Date Date::FromYmd(int year, unsigned month, unsigned day) {
  return *make_date(year, static_cast<int>(month), static_cast<int>(day));
}

std::optional<Date> Date::Parse(std::string_view text) {
  int y, m, d;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  if (!digits(text, 0, 4, y) || !digits(text, 5, 2, m) || !digits(text, 8, 2, d))
    return std::nullopt;
  return make_date(y, m, d);
}

std::chrono::year_month_day Date::ymd() const {
  return std::chrono::year_month_day{std::chrono::sys_days{std::chrono::days{days_}}};
}

std::string Date::ToString() const {
  const auto v = ymd();
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(v.year()),
                static_cast<unsigned>(v.month()), static_cast<unsigned>(v.day()));
  return buf;
}

std::optional<DateTime> DateTime::Parse(std::string_view text) {
  if (text.size() == 10) {
    auto d = Date::Parse(text);
    if (!d) return std::nullopt;
    return DateTime(static_cast<std::int64_t>(d->days()) * 86400);
  }
  int y, mo, d, h, mi, s;
  if (text.size() < 19 || text[4] != '-' || text[7] != '-' ||
      (text[10] != 'T' && text[10] != ' ') || text[13] != ':' || text[16] != ':')
    return std::nullopt;
  if (!digits(text, 0, 4, y) || !digits(text, 5, 2, mo) || !digits(text, 8, 2, d) ||
      !digits(text, 11, 2, h) || !digits(text, 14, 2, mi) || !digits(text, 17, 2, s))
    return std::nullopt;
  auto secs = make_seconds(y, mo, d, h, mi, s);
  if (!secs) return std::nullopt;
  std::string_view zone = text.substr(19);
  std::int64_t offset = 0;
  if (zone.empty() || zone == "Z") {
    offset = 0;
  } else if (zone[0] == '+' || zone[0] == '-') {
    int oh, om;
    if (zone.size() == 5 && digits(zone, 1, 2, oh) && digits(zone, 3, 2, om)) {
    } else if (zone.size() == 6 && zone[3] == ':' && digits(zone, 1, 2, oh) &&
               digits(zone, 4, 2, om)) {
    } else {
      return std::nullopt;
    }
    offset = (oh * 3600 + om * 60) * (zone[0] == '-' ? -1 : 1);
  } else {
    return std::nullopt;
  }
  return DateTime(*secs - offset);
}

std::optional<DateTime> DateTime::ParseCompact(std::string_view text) {
  int y, mo, d, h, mi, s;
  if (text.size() != 14) return std::nullopt;
  if (!digits(text, 0, 4, y) || !digits(text, 4, 2, mo) || !digits(text, 6, 2, d) ||
      !digits(text, 8, 2, h) || !digits(text, 10, 2, mi) || !digits(text, 12, 2, s))
    return std::nullopt;
  auto secs = make_seconds(y, mo, d, h, mi, s);
  if (!secs) return std::nullopt;
  return DateTime(*secs);
}

Date DateTime::date() const {
  std::int64_t days = seconds_ / 86400;
  if (seconds_ % 86400 < 0) --days;
  return Date(static_cast<std::int32_t>(days));
}

std::string DateTime::ToString() const {
  const Date d = date();
  const std::int64_t rem = seconds_ - static_cast<std::int64_t>(d.days()) * 86400;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02d+0000", d.ToString().c_str(),
                static_cast<int>(rem / 3600), static_cast<int>(rem / 60 % 60),
                static_cast<int>(rem % 60));
  return buf;
}

std::string DateTime::ToCompact() const {
  const Date d = date();
  const auto v = d.ymd();
  const std::int64_t rem = seconds_ - static_cast<std::int64_t>(d.days()) * 86400;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d%02u%02u%02d%02d%02d", static_cast<int>(v.year()),
                static_cast<unsigned>(v.month()), static_cast<unsigned>(v.day()),
                static_cast<int>(rem / 3600), static_cast<int>(rem / 60 % 60),
                static_cast<int>(rem % 60));
  return buf;
}

}  // namespace adlens
