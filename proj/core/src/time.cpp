// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#include "moc/time.hpp"

#include <cctype>
#include <cstdio>

#include "moc/errors.hpp"

namespace moc {
namespace detail {

// Howard Hinnant's civil-days algorithms.
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y = static_cast<int>(yy + (m <= 2));
}

namespace {

bool is_valid_civil(int y, unsigned m, unsigned d) {
    if (m < 1 || m > 12 || d < 1) return false;
    static const unsigned lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    unsigned max_d = lengths[m - 1];
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    if (m == 2 && leap) max_d = 29;
    return d <= max_d;
}

// Parses exactly n digits starting at s[i]; advances i.
bool take_digits(const std::string& s, std::size_t& i, int n, long& out) {
    long v = 0;
    for (int k = 0; k < n; ++k) {
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        v = v * 10 + (s[i] - '0');
        ++i;
    }
    out = v;
    return true;
}

bool take_char(const std::string& s, std::size_t& i, char c) {
    if (i >= s.size() || s[i] != c) return false;
    ++i;
    return true;
}

}  // namespace
}  // namespace detail

Date Date::from_civil(int year, unsigned month, unsigned day) {
    if (!detail::is_valid_civil(year, month, day)) {
        throw Error("invalid calendar date " + std::to_string(year) + "-" +
                    std::to_string(month) + "-" + std::to_string(day));
    }
    return Date(detail::days_from_civil(year, month, day));
}

Date Date::parse(const std::string& s) {
    std::size_t i = 0;
    long y, m, d;
    if (!detail::take_digits(s, i, 4, y) || !detail::take_char(s, i, '-') ||
        !detail::take_digits(s, i, 2, m) || !detail::take_char(s, i, '-') ||
        !detail::take_digits(s, i, 2, d) || i != s.size()) {
        throw Error("malformed date '" + s + "', expected YYYY-MM-DD");
    }
    return from_civil(static_cast<int>(y), static_cast<unsigned>(m), static_cast<unsigned>(d));
}

std::string Date::to_string() const {
    int y;
    unsigned m, d;
    detail::civil_from_days(days_, y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", y, m, d);
    return buf;
}

Instant Instant::parse(const std::string& s) {
    std::size_t i = 0;
    long y, mo, d, h, mi, se;
    const bool ok = detail::take_digits(s, i, 4, y) && detail::take_char(s, i, '-') &&
                    detail::take_digits(s, i, 2, mo) && detail::take_char(s, i, '-') &&
                    detail::take_digits(s, i, 2, d) &&
                    (detail::take_char(s, i, 'T') || detail::take_char(s, i, ' ')) &&
                    detail::take_digits(s, i, 2, h) && detail::take_char(s, i, ':') &&
                    detail::take_digits(s, i, 2, mi) && detail::take_char(s, i, ':') &&
                    detail::take_digits(s, i, 2, se);
    if (!ok) throw Error("malformed timestamp '" + s + "'");
    if (!detail::is_valid_civil(static_cast<int>(y), static_cast<unsigned>(mo),
                                static_cast<unsigned>(d)) ||
        h > 23 || mi > 59 || se > 60) {
        throw Error("timestamp out of range '" + s + "'");
    }
    // Fractional seconds: accepted, truncated to second precision.
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    }
    // Offset is mandatory: "Z" or +-HH:MM.
    std::int64_t offset_secs = 0;
    if (i < s.size() && (s[i] == 'Z' || s[i] == 'z')) {
        ++i;
    } else if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        const int sign = s[i] == '+' ? 1 : -1;
        ++i;
        long oh, om;
        if (!detail::take_digits(s, i, 2, oh)) throw Error("malformed offset in '" + s + "'");
        if (i < s.size() && s[i] == ':') ++i;
        if (!detail::take_digits(s, i, 2, om)) throw Error("malformed offset in '" + s + "'");
        offset_secs = sign * (oh * 3600 + om * 60);
    } else {
        throw Error("timestamp '" + s + "' lacks an explicit UTC offset");
    }
    if (i != s.size()) throw Error("trailing characters in timestamp '" + s + "'");

    const std::int64_t days = detail::days_from_civil(
        static_cast<int>(y), static_cast<unsigned>(mo), static_cast<unsigned>(d));
    const std::int64_t local = days * 86400 + h * 3600 + mi * 60 + (se == 60 ? 59 : se);
    return Instant(local - offset_secs);
}

std::string Instant::to_string() const {
    std::int64_t days = secs_ / 86400;
    std::int64_t rem = secs_ % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    int y;
    unsigned m, d;
    detail::civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", y, m, d,
                  static_cast<long long>(rem / 3600), static_cast<long long>((rem / 60) % 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

Date Instant::date() const {
    std::int64_t days = secs_ / 86400;
    if (secs_ % 86400 < 0) --days;
    return Date(days);
}

}  // namespace moc
