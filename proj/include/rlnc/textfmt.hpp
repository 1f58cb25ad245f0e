#ifndef RLNC_TEXTFMT_HPP
#define RLNC_TEXTFMT_HPP

#include <charconv>
#include <string>
#include <system_error>

namespace rlnc {

/// Locale-independent shortest round-trip formatting; identical bytes on
/// every run for the same value.
inline std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string fmt_long(long long v) { return std::to_string(v); }

}  // namespace rlnc

#endif
