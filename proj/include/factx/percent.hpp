// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The factx Authors

#ifndef FACTX_PERCENT_HPP
#define FACTX_PERCENT_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace factx {

/// `part / whole` as a percentage string ("77.68%"), rounded half-up to
/// `decimals` places with integer arithmetic so ties round consistently.
inline std::string format_percent(std::uint64_t part, std::uint64_t whole, int decimals = 2, bool with_sign = true) {
    if (whole == 0) throw std::invalid_argument("format_percent: zero denominator");
    if (decimals < 0 || decimals > 6) throw std::invalid_argument("format_percent: decimals out of range");
    std::uint64_t scale = 100;
    for (int i = 0; i < decimals; ++i) scale *= 10;
    const auto scaled = static_cast<unsigned __int128>(part) * scale;
    auto units = static_cast<std::uint64_t>(scaled / whole);
    const auto remainder = static_cast<std::uint64_t>(scaled % whole);
    if (2 * static_cast<unsigned __int128>(remainder) >= whole) ++units;

    std::uint64_t divisor = 1;
    for (int i = 0; i < decimals; ++i) divisor *= 10;
    std::string out = std::to_string(units / divisor);
    if (decimals > 0) {
        std::string frac = std::to_string(units % divisor);
        out += '.' + std::string(static_cast<std::size_t>(decimals) - frac.size(), '0') + frac;
    }
    if (with_sign) out += '%';
    return out;
}

}  // namespace factx

#endif  // FACTX_PERCENT_HPP
