#ifndef ADLENS_DATE_H_
#define ADLENS_DATE_H_

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace adlens {

// Calendar date stored as days since 1970-01-01.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::int32_t days_since_epoch)
      : days_(days_since_epoch) {}

  static Date FromYmd(int year, unsigned month, unsigned day);

  // Strict "YYYY-MM-DD".
  static std::optional<Date> Parse(std::string_view text);

  std::int32_t days() const { return days_; }
  std::chrono::year_month_day ymd() const;
  std::string ToString() const;

  Date operator+(std::int32_t n) const { return Date(days_ + n); }
  Date operator-(std::int32_t n) const { return Date(days_ - n); }
  std::int32_t operator-(Date other) const { return days_ - other.days_; }

  auto operator<=>(const Date &) const = default;

 private:
  std::int32_t days_ = 0;
};

// UTC instant at one-second resolution.
class DateTime {
 public:
  constexpr DateTime() = default;
  constexpr explicit DateTime(std::int64_t seconds_since_epoch)
      : seconds_(seconds_since_epoch) {}

  // Accepts "YYYY-MM-DD", "YYYY-MM-DDTHH:MM:SS" with an optional "Z",
  // "+HHMM" or "+HH:MM" offset.
  static std::optional<DateTime> Parse(std::string_view text);

  // Strict 14-digit "YYYYMMDDHHMMSS" stamp.
  static std::optional<DateTime> ParseCompact(std::string_view text);

  std::int64_t seconds() const { return seconds_; }
  Date date() const;
  // "YYYY-MM-DDTHH:MM:SS+0000".
  std::string ToString() const;
  // "YYYYMMDDHHMMSS".
  std::string ToCompact() const;

  auto operator<=>(const DateTime &) const = default;

 private:
  std::int64_t seconds_ = 0;
};

}  // namespace adlens

#endif  // ADLENS_DATE_H_
