// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace moc {

/// UTC calendar date, stored as days since 1970-01-01.
class Date {
public:
    Date() = default;
    explicit Date(std::int64_t days_since_epoch) : days_(days_since_epoch) {}

    static Date from_civil(int year, unsigned month, unsigned day);
    /// Parses "YYYY-MM-DD". Throws moc::Error on malformed input.
    static Date parse(const std::string& s);

    std::int64_t days_since_epoch() const noexcept { return days_; }
    /// "YYYY-MM-DD"
    std::string to_string() const;

    Date operator+(std::int64_t days) const { return Date(days_ + days); }
    Date operator-(std::int64_t days) const { return Date(days_ - days); }
    /// Difference in days, this minus other.
    std::int64_t operator-(Date other) const { return days_ - other.days_; }
    auto operator<=>(const Date&) const = default;

private:
    std::int64_t days_ = 0;
};

/// UTC instant with second precision, stored as seconds since the epoch.
class Instant {
public:
    Instant() = default;
    explicit Instant(std::int64_t seconds_since_epoch) : secs_(seconds_since_epoch) {}

    /// Parses ISO-8601 with an explicit offset: "2020-03-01T12:30:00Z" or
    /// "2020-03-01T12:30:00+05:30". Fractional seconds are accepted and
    /// truncated. Throws moc::Error on malformed input.
    static Instant parse(const std::string& s);

    std::int64_t seconds_since_epoch() const noexcept { return secs_; }
    /// Canonical form "YYYY-MM-DDTHH:MM:SSZ".
    std::string to_string() const;
    /// UTC calendar day containing this instant.
    Date date() const;

    auto operator<=>(const Instant&) const = default;

private:
    std::int64_t secs_ = 0;
};

namespace detail {
// Proleptic Gregorian conversions (valid far beyond any plausible post date).
std::int64_t days_from_civil(int y, unsigned m, unsigned d);
void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d);
}  // namespace detail

}  // namespace moc
