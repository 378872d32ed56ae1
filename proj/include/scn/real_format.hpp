#pragma once

#include <cstdio>
#include <string>

namespace scn {

// 17 significant digits: enough for an exact double round trip through text.
inline std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace scn
