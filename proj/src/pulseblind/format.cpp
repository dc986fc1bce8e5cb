#include "pulseblind/format.hpp"

#include <cstdio>

namespace pulseblind {

std::string fmt_sci(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.8e", value);
    std::string s(buf);
    // guard against a non-C numeric locale in the host process
    for (auto& c : s)
        if (c == ',') c = '.';
    return s;
}

std::string fmt_int(std::int64_t value) { return std::to_string(value); }

} // namespace pulseblind
