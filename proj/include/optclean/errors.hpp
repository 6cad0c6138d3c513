#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace optclean {

/// Base class for every error raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// model
struct NegativeField final : Error { using Error::Error; };
struct ZeroMaturity final : Error { using Error::Error; };

// numerics
struct InsufficientPoints final : Error { using Error::Error; };
struct SingularDesign final : Error { using Error::Error; };
struct DegenerateResiduals final : Error { using Error::Error; };
struct OutOfDomain final : Error { using Error::Error; };

// ingest
struct IoError final : Error { using Error::Error; };
struct NonPositivePrice final : Error { using Error::Error; };
struct TooShort final : Error { using Error::Error; };

/// One malformed input row (1-based file line number).
struct RowIssue {
    std::size_t line = 0;
    std::string message;
};

/// Structural failure while parsing a file; carries the offending location.
class ParseError final : public Error {
public:
    ParseError(std::string message, std::size_t line, std::size_t column = 0)
        : Error(std::move(message)), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Aggregate of all rows that failed validation in one file.
class ValidationError final : public Error {
public:
    ValidationError(std::string message, std::vector<RowIssue> issues)
        : Error(std::move(message)), issues_(std::move(issues)) {}

    const std::vector<RowIssue>& issues() const noexcept { return issues_; }

private:
    std::vector<RowIssue> issues_;
};

// synthgen
struct SpecInfeasible final : Error { using Error::Error; };
struct TooManyInjections final : Error { using Error::Error; };

}  // namespace optclean
