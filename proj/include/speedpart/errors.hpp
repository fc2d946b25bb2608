#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace speedpart {

// Input or validation failure (CLI exit code 2).
class DataError : public std::runtime_error {
public:
    DataError(std::string code, const std::string& detail)
        : std::runtime_error(detail), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

// Broken internal invariant, e.g. a violated theoretical bound
// (CLI exit code 3).
class InternalError : public std::runtime_error {
public:
    InternalError(std::string code, const std::string& detail)
        : std::runtime_error(detail), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

} // namespace speedpart
