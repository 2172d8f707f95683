#include "sodac/diagnostics.hpp"

namespace sodac {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnexpectedCharacter: return "UnexpectedCharacter";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::SemanticError: return "SemanticError";
        case ErrorCode::IterateShapeError: return "IterateShapeError";
        case ErrorCode::EmptyRegion: return "EmptyRegion";
        case ErrorCode::UnrollMismatch: return "UnrollMismatch";
        case ErrorCode::TooManyTaps: return "TooManyTaps";
        case ErrorCode::InfeasibleBudget: return "InfeasibleBudget";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::EmptySpace: return "EmptySpace";
        case ErrorCode::PlanMismatch: return "PlanMismatch";
        case ErrorCode::Deadlock: return "Deadlock";
        case ErrorCode::GuardExceeded: return "GuardExceeded";
        case ErrorCode::DivisionByZero: return "DivisionByZero";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::Internal: return "InternalError";
    }
    return "Error";
}

}  // namespace sodac
