#include "siting/timeutil.hpp"

#include <cstdio>
#include <stdexcept>

namespace siting {

namespace {

constexpr std::int64_t kSecPerDay = 86400;

// Civil-calendar day arithmetic (proleptic Gregorian), no timezone.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
    y = static_cast<int>(yy + (m <= 2));
}

int days_in_month(int y, int m) {
    static const int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2) {
        const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
        return leap ? 29 : 28;
    }
    return lengths[m - 1];
}

bool all_digits(std::string_view s) {
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return !s.empty();
}

int to_int(std::string_view s) {
    int v = 0;
    for (char c : s) v = v * 10 + (c - '0');
    return v;
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view s) {
    // "YYYYMMDD HH:MM:SS" is exactly 17 characters.
    if (s.size() != 17 || s[8] != ' ' || s[11] != ':' || s[14] != ':') return std::nullopt;
    const std::string_view ymd = s.substr(0, 8);
    const std::string_view hh = s.substr(9, 2);
    const std::string_view mi = s.substr(12, 2);
    const std::string_view ss = s.substr(15, 2);
    if (!all_digits(ymd) || !all_digits(hh) || !all_digits(mi) || !all_digits(ss)) {
        return std::nullopt;
    }
    const int year = to_int(ymd.substr(0, 4));
    const int month = to_int(ymd.substr(4, 2));
    const int day = to_int(ymd.substr(6, 2));
    const int hour = to_int(hh);
    const int minute = to_int(mi);
    const int second = to_int(ss);
    if (month < 1 || month > 12) return std::nullopt;
    if (day < 1 || day > days_in_month(year, month)) return std::nullopt;
    if (hour > 23 || minute > 59 || second > 59) return std::nullopt;
    return days_from_civil(year, month, day) * kSecPerDay +
           hour * 3600 + minute * 60 + second;
}

Timestamp parse_timestamp_or_throw(std::string_view s) {
    const auto t = parse_timestamp(s);
    if (!t) throw std::invalid_argument("bad timestamp: " + std::string(s));
    return *t;
}

std::string format_timestamp(Timestamp t) {
    std::int64_t days = t / kSecPerDay;
    std::int64_t rem = t % kSecPerDay;
    if (rem < 0) {
        rem += kSecPerDay;
        days -= 1;
    }
    int y, m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d%02d%02d %02d:%02d:%02d", y, m, d,
                  static_cast<int>(rem / 3600), static_cast<int>((rem / 60) % 60),
                  static_cast<int>(rem % 60));
    return buf;
}

int seconds_of_day(Timestamp t) {
    std::int64_t rem = t % kSecPerDay;
    if (rem < 0) rem += kSecPerDay;
    return static_cast<int>(rem);
}

}  // namespace siting
