#pragma once

#include <stdexcept>
#include <string>

namespace pearls {

enum class ErrorCode {
    InvalidRadius,
    NotABall,
    NotInPage,
    InvalidHalfSpace,
    EmptyNecklace,
    ConstructionInfeasible,
    OverlapViolation,
    ValidationRequired,
    InsufficientDepth,
    InvalidEpsilon,
    OddWord,
    NotLiftable,
    BudgetExceeded,
    IOError,
    ParseError,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace pearls
