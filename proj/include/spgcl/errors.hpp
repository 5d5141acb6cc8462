#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace spgcl {

// All library errors carry a short code that becomes the message prefix.
// The CLI maps codes to exit statuses, tests match on prefixes.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

inline constexpr const char* kErrIo = "E_IO";          // missing/unreadable/unwritable files
inline constexpr const char* kErrParse = "E_PARSE";    // malformed file contents (incl. NaN/Inf)
inline constexpr const char* kErrShape = "E_SHAPE";    // dimension mismatches
inline constexpr const char* kErrDomain = "E_DOMAIN";  // precondition violations on values
inline constexpr const char* kErrConfig = "E_CONFIG";  // bad configuration or flags
inline constexpr const char* kErrNumeric = "E_NUMERIC";// numerical failure (singular, no convergence)

[[noreturn]] inline void fail(const char* code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace spgcl
