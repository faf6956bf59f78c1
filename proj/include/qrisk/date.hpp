#pragma once

#include <compare>
#include <string>

namespace qrisk {

/// Calendar date (ISO-8601 "YYYY-MM-DD" on the wire).
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    /// Parse a strict "YYYY-MM-DD" string. Throws ParseError on malformed input.
    static Date parse(const std::string& text);

    std::string to_string() const;
};

}  // namespace qrisk
