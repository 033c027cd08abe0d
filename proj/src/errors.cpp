#include "axiwill/errors.hpp"

namespace axiwill {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DegenerateElement: return "DegenerateElement";
        case ErrorKind::ZeroAveragedNormal: return "ZeroAveragedNormal";
        case ErrorKind::DivisionByAxis: return "DivisionByAxis";
        case ErrorKind::NotClosed: return "NotClosed";
        case ErrorKind::AxisContact: return "AxisContact";
        case ErrorKind::AssemblyDomainError: return "AssemblyDomainError";
        case ErrorKind::SingularSystem: return "SingularSystem";
        case ErrorKind::NonFiniteSolution: return "NonFiniteSolution";
        case ErrorKind::NewtonDivergence: return "NewtonDivergence";
        case ErrorKind::SingularConstraintJacobian: return "SingularConstraintJacobian";
        case ErrorKind::RootBracketFailure: return "RootBracketFailure";
        case ErrorKind::InvalidPresetParams: return "InvalidPresetParams";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

}  // namespace axiwill
