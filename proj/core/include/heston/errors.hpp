// SPDX-License-Identifier: Apache-2.0

#ifndef HESTON_ERRORS_HPP
#define HESTON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace heston {

// Invalid model/config inputs (constraint violations).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Non-finite intermediate while evaluating the characteristic function.
class DomainError : public std::runtime_error {
public:
    DomainError(const std::string& what, double phi_real, double phi_imag)
        : std::runtime_error(what), phi_real(phi_real), phi_imag(phi_imag) {}
    double phi_real;
    double phi_imag;
};

// Adaptive quadrature did not converge; carries the partial estimate.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double partial)
        : std::runtime_error(what), partial(partial) {}
    double partial;
};

// Frequency grid hits a zero of the Carr-Madan denominator.
class GridError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// CSV schema violation; line is 1-based within the offending file.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::string file, long line)
        : std::runtime_error(what), file(std::move(file)), line(line) {}
    std::string file;
    long line;
};

// Per-day calibration / Fisher assembly failure naming the date.
class DayError : public std::runtime_error {
public:
    DayError(const std::string& what, std::string date)
        : std::runtime_error(what), date(std::move(date)) {}
    std::string date;
};

} // namespace heston

#endif // HESTON_ERRORS_HPP
