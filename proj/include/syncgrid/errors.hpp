#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace syncgrid {

enum class ErrorCode {
    DisconnectedGraph,
    DegenerateGraph,
    InvalidGraph,
    DimensionMismatch,
    NonZeroMeanFrequencies,
    GammaOutOfRange,
    NotAcyclic,
    NotACycle,
    PsiOutOfRange,
    NotAnEquilibrium,
    NonFiniteState,
    InvalidNetwork,
    NoSyncInBracket,
    ConnectivityRetryExceeded,
    MarginRetryExceeded,
    ParseError,
    InconsistentCase,
    NonLosslessCase,
    SingularSystem,
    NoAdjustableSources,
    IslandingDetected,
    InvalidLevel,
    InvalidArgument,
    IoError,
};

std::string_view to_string(ErrorCode code);

/// Base error for every failure the library reports by exception.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Parse failure with a 1-based source location.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error(ErrorCode::ParseError,
                what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
          line_(line), column_(column) {}

    [[nodiscard]] int line() const noexcept { return line_; }
    [[nodiscard]] int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace syncgrid
