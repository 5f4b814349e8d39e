#pragma once

#include <stdexcept>
#include <string>

namespace conceft {

// Error categories mirror the process exit codes used by the CLI
// (0 success, 2 config, 3 numeric, 4 I/O).
enum class ErrorCode : int {
    Invalid = 1,
    Config = 2,
    Numeric = 3,
    Io = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

struct InvalidArgumentError : Error {
    explicit InvalidArgumentError(const std::string& msg) : Error(ErrorCode::Invalid, msg) {}
};
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(ErrorCode::Config, msg) {}
};
struct NumericError : Error {
    explicit NumericError(const std::string& msg) : Error(ErrorCode::Numeric, msg) {}
};
struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(ErrorCode::Io, msg) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw InvalidArgumentError(msg);
}

}  // namespace conceft
