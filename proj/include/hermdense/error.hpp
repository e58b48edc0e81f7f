#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hermdense {

enum class ErrorKind {
    InvalidArgument,
    OddPrimeRequired,
    DivisionByZero,
    NotIntegral,
    Degenerate,
    ParamMismatch,
    RankOrder,
    NotStabilized,
    FitNotStabilized,
    CountInfeasible,
    SplitClass,
    OddRank,
    InPiM,
    NotInLattice,
    MalformedInput,
    Internal,
};

std::string_view to_string(ErrorKind kind);

/// Library-wide exception; `kind()` drives the CLI exit-code contract.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace hermdense
