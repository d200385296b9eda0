#include "drt/time.hpp"

#include <charconv>
#include <cstdio>

#include "drt/error.hpp"

namespace drt {

namespace {

using namespace std::chrono;

int parse_int(std::string_view text, std::string_view whole) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw DataError("invalid date/time '" + std::string(whole) + "'");
    }
    return value;
}

}  // namespace

std::int64_t Date::serial() const {
    const year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                             std::chrono::day{day}};
    return sys_days{ymd}.time_since_epoch().count();
}

Date Date::from_serial(std::int64_t days) {
    const year_month_day ymd{sys_days{std::chrono::days{days}}};
    return Date{static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day())};
}

Date Date::parse(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw DataError("invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
    }
    Date d{parse_int(text.substr(0, 4), text), static_cast<unsigned>(parse_int(text.substr(5, 2), text)),
           static_cast<unsigned>(parse_int(text.substr(8, 2), text))};
    const year_month_day ymd{std::chrono::year{d.year}, std::chrono::month{d.month},
                             std::chrono::day{d.day}};
    if (!ymd.ok()) {
        throw DataError("invalid calendar date '" + std::string(text) + "'");
    }
    return d;
}

std::string Date::str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year, month, day);
    return buf;
}

HourStamp HourStamp::from(const Date& date, int hour) {
    if (hour < 0 || hour > 23) {
        throw DataError("hour out of range: " + std::to_string(hour));
    }
    return HourStamp(date.serial() * 24 + hour);
}

HourStamp HourStamp::parse(std::string_view text) {
    if (text.size() < 13 || text[10] != 'T') {
        throw DataError("invalid timestamp '" + std::string(text) + "', expected YYYY-MM-DDTHH");
    }
    const std::string_view rest = text.substr(13);
    if (!(rest.empty() || rest == ":00" || rest == ":00:00")) {
        throw DataError("timestamp '" + std::string(text) + "' is not on an hour boundary");
    }
    return from(Date::parse(text.substr(0, 10)), parse_int(text.substr(11, 2), text));
}

Date HourStamp::date() const {
    std::int64_t days = hours_ / 24;
    if (hours_ % 24 < 0) {
        --days;
    }
    return Date::from_serial(days);
}

int HourStamp::hour() const noexcept {
    const auto h = static_cast<int>(hours_ % 24);
    return h < 0 ? h + 24 : h;
}

int HourStamp::weekday() const noexcept {
    std::int64_t days = hours_ / 24;
    if (hours_ % 24 < 0) {
        --days;
    }
    const std::chrono::weekday wd{sys_days{std::chrono::days{days}}};
    return static_cast<int>(wd.iso_encoding()) - 1;
}

std::string HourStamp::str() const {
    char buf[8];
    std::snprintf(buf, sizeof buf, "T%02d", hour());
    return date().str() + buf;
}

}  // namespace drt
