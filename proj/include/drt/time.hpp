#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace drt {

/// A calendar date (proleptic Gregorian, UTC).
struct Date {
    int year = 1970;
    unsigned month = 1;
    unsigned day = 1;

    auto operator<=>(const Date&) const = default;

    /// Days since 1970-01-01.
    std::int64_t serial() const;
    static Date from_serial(std::int64_t days);
    /// Parses `YYYY-MM-DD`.
    static Date parse(std::string_view text);
    std::string str() const;
};

/// One hourly lag: hours since 1970-01-01T00 UTC.
class HourStamp {
public:
    constexpr HourStamp() = default;
    constexpr explicit HourStamp(std::int64_t hours) : hours_(hours) {}

    static HourStamp from(const Date& date, int hour);
    /// Parses `YYYY-MM-DDTHH`, optionally followed by `:00` or `:00:00`.
    static HourStamp parse(std::string_view text);

    constexpr std::int64_t hours() const noexcept { return hours_; }
    Date date() const;
    /// Hour of day, 0..23.
    int hour() const noexcept;
    /// Day of week, 0 = Monday .. 6 = Sunday.
    int weekday() const noexcept;
    /// `YYYY-MM-DDTHH`.
    std::string str() const;

    constexpr HourStamp operator+(std::int64_t h) const { return HourStamp(hours_ + h); }
    constexpr HourStamp operator-(std::int64_t h) const { return HourStamp(hours_ - h); }
    constexpr std::int64_t operator-(HourStamp other) const { return hours_ - other.hours_; }
    constexpr auto operator<=>(const HourStamp&) const = default;

private:
    std::int64_t hours_ = 0;
};

/// Inclusive date interval.
struct DateRange {
    Date first;
    Date last;

    bool contains(const Date& d) const { return first <= d && d <= last; }
    bool contains(HourStamp t) const { return contains(t.date()); }
    bool operator==(const DateRange&) const = default;
};

}  // namespace drt
