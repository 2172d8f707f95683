#include "sodac/ast.hpp"

#include <sstream>

namespace sodac {

const char* elem_type_name(ElemType t) {
    switch (t) {
        case ElemType::i32: return "int32";
        case ElemType::i64: return "int64";
        case ElemType::f32: return "float32";
        case ElemType::f64: return "float64";
    }
    return "?";
}

const char* elem_type_c_name(ElemType t) {
    switch (t) {
        case ElemType::i32: return "int32_t";
        case ElemType::i64: return "int64_t";
        case ElemType::f32: return "float";
        case ElemType::f64: return "double";
    }
    return "?";
}

int elem_type_bits(ElemType t) {
    switch (t) {
        case ElemType::i32:
        case ElemType::f32: return 32;
        case ElemType::i64:
        case ElemType::f64: return 64;
    }
    return 0;
}

bool elem_type_is_integer(ElemType t) { return t == ElemType::i32 || t == ElemType::i64; }

std::optional<ElemType> elem_type_from_name(const std::string& name) {
    if (name == "int32") return ElemType::i32;
    if (name == "int64") return ElemType::i64;
    if (name == "float32" || name == "float") return ElemType::f32;
    if (name == "float64" || name == "double") return ElemType::f64;
    return std::nullopt;
}

ExprPtr Expr::make_literal(Rational v, SourcePos p) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::literal;
    e->literal = v;
    e->pos = p;
    return e;
}

ExprPtr Expr::make_tap(TapRef t, SourcePos p) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::tap;
    e->tap = std::move(t);
    e->pos = p;
    return e;
}

ExprPtr Expr::make_binary(BinOp op, ExprPtr l, ExprPtr r, SourcePos p) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::binary;
    e->op = op;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    e->pos = p;
    return e;
}

bool expr_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Expr::Kind::literal: return a.literal == b.literal;
        case Expr::Kind::tap: return a.tap == b.tap;
        case Expr::Kind::binary:
            return a.op == b.op && expr_equal(*a.lhs, *b.lhs) && expr_equal(*a.rhs, *b.rhs);
    }
    return false;
}

const char* bin_op_symbol(BinOp op) {
    switch (op) {
        case BinOp::add: return "+";
        case BinOp::sub: return "-";
        case BinOp::mul: return "*";
        case BinOp::div: return "/";
    }
    return "?";
}

const ArrayDecl* StencilProgram::find_input(const std::string& name) const {
    for (const auto& in : inputs)
        if (in.name == name) return &in;
    return nullptr;
}

const StageDecl* StencilProgram::find_stage(const std::string& name) const {
    for (const auto& s : locals)
        if (s.name == name) return &s;
    for (const auto& s : outputs)
        if (s.name == name) return &s;
    return nullptr;
}

namespace {

int precedence(BinOp op) { return (op == BinOp::add || op == BinOp::sub) ? 1 : 2; }

// The grammar is left-associative, so a right child at equal precedence is
// parenthesized to keep the reparsed tree structurally identical.
void print_expr(std::ostream& os, const Expr& e, int parent_prec, bool is_rhs) {
    switch (e.kind) {
        case Expr::Kind::literal:
            // Non-integer rationals print as a quotient, which re-folds to the
            // same literal when parsed.
            if (e.literal.is_integer())
                os << e.literal.num();
            else
                os << "(" << e.literal.num() << " / " << e.literal.den() << ")";
            return;
        case Expr::Kind::tap: {
            os << e.tap.array << "(";
            for (size_t i = 0; i < e.tap.offsets.size(); ++i) {
                if (i) os << ", ";
                os << e.tap.offsets[i];
            }
            os << ")";
            return;
        }
        case Expr::Kind::binary: break;
    }
    int prec = precedence(e.op);
    bool need_parens = prec < parent_prec || (prec == parent_prec && is_rhs);
    if (need_parens) os << "(";
    print_expr(os, *e.lhs, prec, false);
    os << " " << bin_op_symbol(e.op) << " ";
    print_expr(os, *e.rhs, prec, true);
    if (need_parens) os << ")";
}

void print_stage(std::ostream& os, const StageDecl& stage, size_t rank) {
    os << (stage.is_output ? "output " : "local ") << elem_type_name(stage.elem_type) << ": "
       << stage.name << "(";
    for (size_t d = 0; d < rank; ++d) {
        if (d) os << ", ";
        os << "0";
    }
    os << ") = ";
    print_expr(os, *stage.expr, 0, false);
    os << "\n";
}

}  // namespace

std::string pretty_print(const Expr& expr) {
    std::ostringstream os;
    print_expr(os, expr, 0, false);
    return os.str();
}

std::string pretty_print(const StencilProgram& program) {
    std::ostringstream os;
    os << "kernel: " << program.kernel_name << "\n";
    os << "unroll factor: " << program.unroll_factor << "\n";
    os << "iterate factor: " << program.iterate_factor << "\n";
    for (const auto& in : program.inputs) {
        os << "input " << elem_type_name(in.elem_type) << ": " << in.name << "(";
        for (size_t d = 0; d < in.tile_shape.size(); ++d) {
            if (d) os << ", ";
            if (in.tile_shape[d] < 0)
                os << "*";
            else
                os << in.tile_shape[d];
        }
        os << ")\n";
    }
    for (const auto& s : program.locals) print_stage(os, s, program.rank());
    for (const auto& s : program.outputs) print_stage(os, s, program.rank());
    return os.str();
}

}  // namespace sodac
