#pragma once

#include <cstdint>
#include <string>

namespace pulseblind {

// 9 significant digits, scientific, '.' decimal separator regardless of
// locale. All numeric CSV output goes through this to keep files byte-stable.
std::string fmt_sci(double value);

std::string fmt_int(std::int64_t value);

} // namespace pulseblind
