// SPDX-License-Identifier: Apache-2.0

#ifndef HESTON_DATES_HPP
#define HESTON_DATES_HPP

#include <compare>
#include <string>

namespace heston {

// Calendar date. Arithmetic is in calendar days (365-day year convention
// for maturities; see year_fraction).
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    // Days since 1970-01-01 (proleptic Gregorian).
    long serial() const;
    static Date from_serial(long serial);

    Date plus_days(int n) const { return from_serial(serial() + n); }

    // "YYYY-MM-DD"
    std::string iso() const;
    static Date parse_iso(const std::string& text); // throws ConfigError
};

inline int days_between(const Date& from, const Date& to) {
    return static_cast<int>(to.serial() - from.serial());
}

// Calendar days / 365.
inline double year_fraction(int calendar_days) {
    return static_cast<double>(calendar_days) / 365.0;
}

} // namespace heston

#endif // HESTON_DATES_HPP
