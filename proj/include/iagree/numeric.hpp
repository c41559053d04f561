#pragma once

#include <algorithm>
#include <cmath>
#include <string>

namespace iagree {

/// Round to `dp` decimal places. Decimal ties (x.xx5) round to the odd
/// neighbor; everything else rounds to nearest. Ties are detected with a
/// small snap window so that doubles sitting half an ulp off their decimal
/// value (3.115 is stored as 3.1150000000000002) are still treated as ties.
inline double round_dp(double value, int dp) {
    double scale = std::pow(10.0, dp);
    double scaled = std::fabs(value) * scale;
    double lower = std::floor(scaled);
    double rounded;
    if (std::fabs(scaled - (lower + 0.5)) < 1e-6) {
        bool lower_is_odd = std::fmod(lower, 2.0) != 0.0;
        rounded = lower_is_odd ? lower : lower + 1.0;
    } else {
        rounded = std::floor(scaled + 0.5);
    }
    return std::copysign(rounded / scale, value);
}

inline double clamp_to(double value, double lo, double hi) {
    return std::min(std::max(value, lo), hi);
}

/// Fixed-point decimal formatting (locale-free, no scientific notation).
std::string format_fixed(double value, int dp);

} // namespace iagree
