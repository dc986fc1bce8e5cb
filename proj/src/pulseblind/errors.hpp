#pragma once

#include <stdexcept>
#include <string>

namespace pulseblind {

// Error conditions surfaced by the library. The C API maps these onto
// pb_status codes; C++ callers catch pulseblind::Error.
enum class Errc {
    InvalidArgument,
    Config,
    Io,
    DegenerateResponse,
    GridTooNarrow,
    CalibrationAmbiguous,
    InsufficientSpan,
    NotBlindable,
    UndefinedQber,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace pulseblind
