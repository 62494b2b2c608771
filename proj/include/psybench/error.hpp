#pragma once

#include <stdexcept>
#include <string>

namespace psybench {

// Error categories map 1:1 onto process exit codes and C API status codes.
enum class ErrorCode : int {
    ok = 0,
    config = 2,
    data = 3,
    internal = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorCode::config, what) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(ErrorCode::data, what) {}
};

class InternalError : public Error {
public:
    explicit InternalError(const std::string& what) : Error(ErrorCode::internal, what) {}
};

}  // namespace psybench
