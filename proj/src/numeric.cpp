#include "iagree/numeric.hpp"

#include <cstdio>

namespace iagree {

std::string format_fixed(double value, int dp) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", dp, value);
    return buf;
}

} // namespace iagree
