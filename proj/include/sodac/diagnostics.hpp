// Source positions, error codes, and the toolkit-wide exception type.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sodac {

struct SourcePos {
    int line = 0;    // 1-based; 0 = no position
    int column = 0;  // 1-based

    bool valid() const { return line > 0; }
    std::string str() const {
        if (!valid()) return "<no position>";
        return std::to_string(line) + ":" + std::to_string(column);
    }
};

enum class ErrorCode {
    // dsl_frontend
    UnexpectedCharacter,
    SyntaxError,
    SemanticError,
    // stencil_ir
    IterateShapeError,
    EmptyRegion,
    // reuse_planner
    UnrollMismatch,
    // compute_reuse
    TooManyTaps,
    InfeasibleBudget,
    // perf_model
    BudgetExceeded,
    // dse_engine
    EmptySpace,
    // codegen
    PlanMismatch,
    // dataflow_sim
    Deadlock,
    GuardExceeded,
    DivisionByZero,
    // cli / config
    ConfigError,
    IoError,
    // defensive checks; maps to exit code 2 in the CLI
    Internal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message, SourcePos pos = {})
        : std::runtime_error(render(code, message, pos)),
          code_(code),
          pos_(pos),
          message_(std::move(message)) {}

    ErrorCode code() const { return code_; }
    SourcePos pos() const { return pos_; }
    const std::string& message() const { return message_; }

    // User errors exit with 1, internal invariant failures with 2.
    bool is_internal() const { return code_ == ErrorCode::Internal; }

private:
    static std::string render(ErrorCode code, const std::string& message, SourcePos pos) {
        std::string out = error_code_name(code);
        if (pos.valid()) out += " at " + pos.str();
        out += ": ";
        out += message;
        return out;
    }

    ErrorCode code_;
    SourcePos pos_;
    std::string message_;
};

}  // namespace sodac
