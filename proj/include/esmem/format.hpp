#pragma once

#include <cstdio>
#include <string>

namespace esmem {

// Round-trip-safe text form used in every CSV the project writes.
inline std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace esmem
