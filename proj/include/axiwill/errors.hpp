#pragma once

#include <stdexcept>
#include <string>

namespace axiwill {

enum class ErrorKind {
    DegenerateElement,
    ZeroAveragedNormal,
    DivisionByAxis,
    NotClosed,
    AxisContact,
    AssemblyDomainError,
    SingularSystem,
    NonFiniteSolution,
    NewtonDivergence,
    SingularConstraintJacobian,
    RootBracketFailure,
    InvalidPresetParams,
    DimensionMismatch,
    InvalidConfig,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace axiwill
