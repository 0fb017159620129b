// SPDX-License-Identifier: Apache-2.0

#ifndef HESTON_CSV_HPP
#define HESTON_CSV_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace heston {

// Shortest round-trippable decimal form of a double (printf %.17g with a
// precision walk-down); output is locale-independent and deterministic.
std::string fmt_double(double x);

// FNV-1a 64-bit hash; used to stamp outputs with their config fingerprint.
std::uint64_t fnv1a(const std::string& s);

std::string hex64(std::uint64_t x);

// Splits a CSV line on commas. The schemas used here never quote fields.
std::vector<std::string> split_csv(const std::string& line);

// Strict numeric parsing: the whole token must be consumed.
bool parse_double(const std::string& s, double& out);
bool parse_long(const std::string& s, long& out);

} // namespace heston

#endif // HESTON_CSV_HPP
