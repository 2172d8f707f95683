// Parsed representation of a stencil kernel program.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sodac/diagnostics.hpp"
#include "sodac/rational.hpp"

namespace sodac {

enum class ElemType { i32, i64, f32, f64 };

const char* elem_type_name(ElemType t);          // "int32", ...
const char* elem_type_c_name(ElemType t);        // "int32_t", "float", ...
int elem_type_bits(ElemType t);
bool elem_type_is_integer(ElemType t);
std::optional<ElemType> elem_type_from_name(const std::string& name);

// Reference to a neighboring element of a named array, e.g. image(1, 0).
struct TapRef {
    std::string array;
    std::vector<int64_t> offsets;

    bool operator==(const TapRef& o) const { return array == o.array && offsets == o.offsets; }
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class BinOp { add, sub, mul, div };

// Immutable expression tree over taps and rational literals.
struct Expr {
    enum class Kind { literal, tap, binary };

    Kind kind;
    SourcePos pos;
    Rational literal;  // kind == literal
    TapRef tap;        // kind == tap
    BinOp op{};        // kind == binary
    ExprPtr lhs, rhs;

    static ExprPtr make_literal(Rational v, SourcePos p);
    static ExprPtr make_tap(TapRef t, SourcePos p);
    static ExprPtr make_binary(BinOp op, ExprPtr l, ExprPtr r, SourcePos p);
};

bool expr_equal(const Expr& a, const Expr& b);
const char* bin_op_symbol(BinOp op);

struct ArrayDecl {
    std::string name;
    ElemType elem_type{};
    // Concrete extents; -1 marks the single allowed unbounded trailing dim ("*").
    std::vector<int64_t> tile_shape;
    SourcePos pos;

    size_t rank() const { return tile_shape.size(); }
};

struct StageDecl {
    std::string name;
    ElemType elem_type{};
    ExprPtr expr;
    bool is_output = false;
    SourcePos pos;
};

struct StencilProgram {
    std::string kernel_name;
    int64_t unroll_factor = 1;
    int64_t iterate_factor = 1;
    std::vector<ArrayDecl> inputs;
    std::vector<StageDecl> locals;
    std::vector<StageDecl> outputs;  // exactly one stage

    size_t rank() const { return inputs.empty() ? 0 : inputs.front().rank(); }
    const ArrayDecl* find_input(const std::string& name) const;
    const StageDecl* find_stage(const std::string& name) const;
    // Declared tile shape (shared by all inputs; validated at parse time).
    const std::vector<int64_t>& tile_shape() const { return inputs.front().tile_shape; }
};

// Precedence-aware text form; parses back to a structurally identical program.
std::string pretty_print(const StencilProgram& program);
std::string pretty_print(const Expr& expr);

}  // namespace sodac
