// SPDX-License-Identifier: Apache-2.0

#include "heston/dates.hpp"
#include "heston/errors.hpp"

#include <chrono>
#include <cstdio>

namespace heston {

namespace {
namespace chr = std::chrono;

chr::year_month_day to_ymd(const Date& d) {
    return chr::year_month_day(chr::year(d.year), chr::month(static_cast<unsigned>(d.month)),
                               chr::day(static_cast<unsigned>(d.day)));
}
} // namespace

long Date::serial() const {
    const auto ymd = to_ymd(*this);
    return chr::sys_days(ymd).time_since_epoch().count();
}

Date Date::from_serial(long serial) {
    const chr::year_month_day ymd{chr::sys_days{chr::days{serial}}};
    return Date{int(ymd.year()), int(unsigned(ymd.month())), int(unsigned(ymd.day()))};
}

std::string Date::iso() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

Date Date::parse_iso(const std::string& text) {
    int y = 0, m = 0, d = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%4d-%2d-%2d%c", &y, &m, &d, &tail) != 3) {
        throw ConfigError("not an ISO-8601 date: '" + text + "'");
    }
    const Date date{y, m, d};
    if (!to_ymd(date).ok()) {
        throw ConfigError("invalid calendar date: '" + text + "'");
    }
    return date;
}

} // namespace heston
