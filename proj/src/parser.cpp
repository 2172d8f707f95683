#include "sodac/parser.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>

namespace sodac {

namespace {

constexpr int kMaxRank = 3;
constexpr int kMaxExprDepth = 200;

// Exact rational value of a decimal literal, e.g. "2.5" -> 5/2, "1e-3" -> 1/1000.
Rational rational_from_decimal_text(const std::string& text, SourcePos pos) {
    std::string digits;
    int frac_digits = 0;
    int64_t exponent = 0;
    bool negative = false;
    size_t i = 0;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) negative = text[i++] == '-';
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i)
        digits.push_back(text[i]);
    if (i < text.size() && text[i] == '.') {
        for (++i; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
            digits.push_back(text[i]);
            ++frac_digits;
        }
    }
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        exponent = std::strtoll(text.c_str() + i + 1, nullptr, 10);
        i = text.size();
    }
    try {
        Rational mantissa(0);
        for (char d : digits) mantissa = mantissa * Rational(10) + Rational(d - '0');
        int64_t net = exponent - frac_digits;
        Rational scale(1);
        for (int64_t n = 0; n < std::llabs(net); ++n) scale = scale * Rational(10);
        Rational value = net >= 0 ? mantissa * scale : mantissa / scale;
        return negative ? -value : value;
    } catch (const Error&) {
        throw Error(ErrorCode::SemanticError, "numeric literal out of range", pos);
    }
}

class Parser {
public:
    explicit Parser(const std::vector<Token>& tokens) : tokens_(tokens) {}

    StencilProgram run() {
        prescan_declared_names();
        while (!at(TokenKind::end_of_file)) {
            if (at(TokenKind::newline)) {
                advance();
                continue;
            }
            parse_declaration();
        }
        finish_validation();
        return std::move(program_);
    }

private:
    // ---- token plumbing ----

    const Token& peek(size_t ahead = 0) const {
        size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
        return tokens_[i];
    }
    bool at(TokenKind kind) const { return peek().kind == kind; }
    const Token& advance() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }

    const Token& expect(TokenKind kind, const char* context) {
        if (!at(kind)) {
            throw Error(ErrorCode::SyntaxError,
                        std::string("expected ") + token_kind_name(kind) + " in " + context +
                            ", found " + token_kind_name(peek().kind),
                        peek().pos);
        }
        return advance();
    }

    void expect_end_of_line(const char* context) {
        if (!at(TokenKind::newline) && !at(TokenKind::end_of_file)) {
            throw Error(ErrorCode::SyntaxError,
                        std::string("expected end of line after ") + context + ", found " +
                            token_kind_name(peek().kind),
                        peek().pos);
        }
        if (at(TokenKind::newline)) advance();
    }

    // ---- declarations ----

    void parse_declaration() {
        switch (peek().kind) {
            case TokenKind::kw_kernel: parse_kernel_line(); return;
            case TokenKind::kw_unroll: parse_factor_line(true); return;
            case TokenKind::kw_iterate: parse_factor_line(false); return;
            case TokenKind::kw_input: parse_input_line(); return;
            case TokenKind::kw_local: parse_stage_line(false); return;
            case TokenKind::kw_output: parse_stage_line(true); return;
            default:
                throw Error(ErrorCode::SyntaxError,
                            std::string("expected a declaration keyword, found ") +
                                token_kind_name(peek().kind),
                            peek().pos);
        }
    }

    void parse_kernel_line() {
        SourcePos pos = advance().pos;
        expect(TokenKind::colon, "kernel declaration");
        const Token& name = expect(TokenKind::ident, "kernel declaration");
        if (seen_kernel_)
            throw Error(ErrorCode::SemanticError, "duplicate kernel declaration", pos);
        seen_kernel_ = true;
        program_.kernel_name = name.text;
        expect_end_of_line("kernel declaration");
    }

    void parse_factor_line(bool is_unroll) {
        SourcePos pos = advance().pos;
        expect(TokenKind::kw_factor, "factor declaration");
        expect(TokenKind::colon, "factor declaration");
        const Token& value = expect(TokenKind::int_lit, "factor declaration");
        bool& seen = is_unroll ? seen_unroll_ : seen_iterate_;
        if (seen)
            throw Error(ErrorCode::SemanticError,
                        std::string("duplicate ") + (is_unroll ? "unroll" : "iterate") +
                            " factor declaration",
                        pos);
        seen = true;
        if (value.int_value < 1)
            throw Error(ErrorCode::SemanticError,
                        std::string(is_unroll ? "unroll" : "iterate") +
                            " factor must be a positive integer",
                        value.pos);
        (is_unroll ? program_.unroll_factor : program_.iterate_factor) = value.int_value;
        expect_end_of_line("factor declaration");
    }

    ElemType parse_elem_type() {
        const Token& tok = expect(TokenKind::ident, "type name");
        auto type = elem_type_from_name(tok.text);
        if (!type)
            throw Error(ErrorCode::SemanticError,
                        "unknown element type '" + tok.text +
                            "' (supported: int32, int64, float32, float64)",
                        tok.pos);
        return *type;
    }

    void parse_input_line() {
        advance();
        ArrayDecl decl;
        decl.elem_type = parse_elem_type();
        expect(TokenKind::colon, "input declaration");
        const Token& name = expect(TokenKind::ident, "input declaration");
        decl.name = name.text;
        decl.pos = name.pos;
        declare_name(name.text, name.pos);
        referencable_.insert(name.text);

        expect(TokenKind::lparen, "tile shape");
        while (true) {
            if (at(TokenKind::star)) {
                decl.tile_shape.push_back(-1);
                advance();
            } else {
                const Token& extent = expect(TokenKind::int_lit, "tile shape");
                if (extent.int_value < 1)
                    throw Error(ErrorCode::SemanticError, "tile extent must be positive",
                                extent.pos);
                decl.tile_shape.push_back(extent.int_value);
            }
            if (at(TokenKind::comma)) {
                advance();
                continue;
            }
            break;
        }
        expect(TokenKind::rparen, "tile shape");
        expect_end_of_line("input declaration");

        validate_tile_shape(decl);
        program_.inputs.push_back(std::move(decl));
    }

    void validate_tile_shape(const ArrayDecl& decl) {
        if (decl.rank() > kMaxRank)
            throw Error(ErrorCode::SemanticError,
                        "rank " + std::to_string(decl.rank()) + " exceeds the supported maximum of " +
                            std::to_string(kMaxRank),
                        decl.pos);
        if (decl.tile_shape.front() < 1)
            throw Error(ErrorCode::SemanticError, "tile width (first extent) must be concrete",
                        decl.pos);
        for (size_t d = 0; d + 1 < decl.tile_shape.size(); ++d)
            if (decl.tile_shape[d] < 0)
                throw Error(ErrorCode::SemanticError,
                            "only the last tile extent may be unbounded ('*')", decl.pos);
        if (!program_.inputs.empty()) {
            const ArrayDecl& first = program_.inputs.front();
            if (first.tile_shape != decl.tile_shape)
                throw Error(ErrorCode::SemanticError,
                            "input '" + decl.name + "' must share the tile shape of '" +
                                first.name + "'",
                            decl.pos);
        }
    }

    void parse_stage_line(bool is_output) {
        advance();
        StageDecl stage;
        stage.is_output = is_output;
        stage.elem_type = parse_elem_type();
        expect(TokenKind::colon, "stage declaration");
        const Token& name = expect(TokenKind::ident, "stage declaration");
        stage.name = name.text;
        stage.pos = name.pos;

        if (program_.inputs.empty())
            throw Error(ErrorCode::SemanticError,
                        "stage '" + stage.name + "' declared before any input", name.pos);

        // LHS index: the stage defines its value at the origin.
        expect(TokenKind::lparen, "stage index");
        size_t rank = 0;
        while (true) {
            const Token& idx = expect(TokenKind::int_lit, "stage index");
            if (idx.int_value != 0)
                throw Error(ErrorCode::SemanticError,
                            "stage is defined at the origin; index must be 0", idx.pos);
            ++rank;
            if (at(TokenKind::comma)) {
                advance();
                continue;
            }
            break;
        }
        expect(TokenKind::rparen, "stage index");
        if (rank != program_.rank())
            throw Error(ErrorCode::SemanticError,
                        "stage '" + stage.name + "' has rank " + std::to_string(rank) +
                            " but the tile has rank " + std::to_string(program_.rank()),
                        name.pos);

        declare_name(name.text, name.pos);
        expect(TokenKind::equals, "stage declaration");
        stage.expr = fold(parse_expr(0), stage.elem_type);
        expect_end_of_line("stage declaration");

        if (is_output) {
            if (!program_.outputs.empty())
                throw Error(ErrorCode::SemanticError, "more than one output stage declared",
                            stage.pos);
            program_.outputs.push_back(std::move(stage));
        } else {
            if (!program_.outputs.empty())
                throw Error(ErrorCode::SemanticError,
                            "local stage declared after the output stage", stage.pos);
            program_.locals.push_back(std::move(stage));
            referencable_.insert(name.text);
        }
    }

    void declare_name(const std::string& name, SourcePos pos) {
        if (!declared_.insert(name).second)
            throw Error(ErrorCode::SemanticError, "duplicate declaration of '" + name + "'", pos);
    }

    // ---- expressions ----

    ExprPtr parse_expr(int depth) {
        if (depth > kMaxExprDepth)
            throw Error(ErrorCode::SyntaxError, "expression too deeply nested", peek().pos);
        ExprPtr lhs = parse_term(depth + 1);
        while (at(TokenKind::plus) || at(TokenKind::minus)) {
            BinOp op = at(TokenKind::plus) ? BinOp::add : BinOp::sub;
            SourcePos pos = advance().pos;
            ExprPtr rhs = parse_term(depth + 1);
            lhs = Expr::make_binary(op, lhs, rhs, pos);
        }
        return lhs;
    }

    ExprPtr parse_term(int depth) {
        if (depth > kMaxExprDepth)
            throw Error(ErrorCode::SyntaxError, "expression too deeply nested", peek().pos);
        ExprPtr lhs = parse_factor(depth + 1);
        while (at(TokenKind::star) || at(TokenKind::slash)) {
            BinOp op = at(TokenKind::star) ? BinOp::mul : BinOp::div;
            SourcePos pos = advance().pos;
            ExprPtr rhs = parse_factor(depth + 1);
            lhs = Expr::make_binary(op, lhs, rhs, pos);
        }
        return lhs;
    }

    ExprPtr parse_factor(int depth) {
        if (depth > kMaxExprDepth)
            throw Error(ErrorCode::SyntaxError, "expression too deeply nested", peek().pos);
        if (at(TokenKind::minus)) {  // unary minus: normalize to 0 - x
            SourcePos pos = advance().pos;
            ExprPtr operand = parse_factor(depth + 1);
            return Expr::make_binary(BinOp::sub, Expr::make_literal(Rational(0), pos), operand,
                                     pos);
        }
        return parse_primary(depth + 1);
    }

    ExprPtr parse_primary(int depth) {
        if (at(TokenKind::int_lit)) {
            const Token& tok = advance();
            return Expr::make_literal(Rational(tok.int_value), tok.pos);
        }
        if (at(TokenKind::float_lit)) {
            const Token& tok = advance();
            return Expr::make_literal(rational_from_decimal_text(tok.text, tok.pos), tok.pos);
        }
        if (at(TokenKind::lparen)) {
            advance();
            ExprPtr inner = parse_expr(depth + 1);
            expect(TokenKind::rparen, "parenthesized expression");
            return inner;
        }
        if (at(TokenKind::ident)) {
            const Token& name = advance();
            return parse_tap(name, depth);
        }
        throw Error(ErrorCode::SyntaxError,
                    std::string("expected a number, tap reference, or '(', found ") +
                        token_kind_name(peek().kind),
                    peek().pos);
    }

    // Distinguishes a forward reference from a truly unknown name using the
    // prescan of declared identifiers.
    void prescan_declared_names() {
        for (size_t i = 0; i + 3 < tokens_.size(); ++i) {
            TokenKind k = tokens_[i].kind;
            bool line_start = i == 0 || tokens_[i - 1].kind == TokenKind::newline;
            if (!line_start) continue;
            if (k != TokenKind::kw_input && k != TokenKind::kw_local && k != TokenKind::kw_output)
                continue;
            if (tokens_[i + 1].kind == TokenKind::ident &&
                tokens_[i + 2].kind == TokenKind::colon &&
                tokens_[i + 3].kind == TokenKind::ident)
                all_declared_names_.insert(tokens_[i + 3].text);
        }
    }

    ExprPtr parse_tap(const Token& name, int) {
        if (referencable_.count(name.text) == 0) {
            if (declared_.count(name.text) != 0 || all_declared_names_.count(name.text) != 0)
                throw Error(ErrorCode::SemanticError,
                            "'" + name.text + "' referenced before its declaration", name.pos);
            throw Error(ErrorCode::SemanticError, "undeclared array '" + name.text + "'",
                        name.pos);
        }
        TapRef tap;
        tap.array = name.text;
        expect(TokenKind::lparen, "tap reference");
        while (true) {
            const Token& off = expect(TokenKind::int_lit, "tap offset");
            tap.offsets.push_back(off.int_value);
            if (at(TokenKind::comma)) {
                advance();
                continue;
            }
            break;
        }
        expect(TokenKind::rparen, "tap reference");
        if (tap.offsets.size() != program_.rank())
            throw Error(ErrorCode::SemanticError,
                        "tap '" + name.text + "' has rank " + std::to_string(tap.offsets.size()) +
                            " but the tile has rank " + std::to_string(program_.rank()),
                        name.pos);
        return Expr::make_tap(std::move(tap), name.pos);
    }

    // ---- constant folding ----

    // Folds literal-only subtrees. Integer stages use C truncating division
    // and require every literal to be a whole number; float stages fold in
    // exact rational arithmetic.
    ExprPtr fold(const ExprPtr& expr, ElemType type) {
        bool integer = elem_type_is_integer(type);
        ExprPtr folded = fold_rec(expr, integer);
        check_no_zero_divisor(folded);
        return folded;
    }

    ExprPtr fold_rec(const ExprPtr& expr, bool integer) {
        switch (expr->kind) {
            case Expr::Kind::literal:
                if (integer && !expr->literal.is_integer())
                    throw Error(ErrorCode::SemanticError,
                                "non-integer literal " + expr->literal.str() +
                                    " in an integer-typed stage",
                                expr->pos);
                return expr;
            case Expr::Kind::tap:
                return expr;
            case Expr::Kind::binary: break;
        }
        ExprPtr lhs = fold_rec(expr->lhs, integer);
        ExprPtr rhs = fold_rec(expr->rhs, integer);
        if (lhs->kind == Expr::Kind::literal && rhs->kind == Expr::Kind::literal) {
            return Expr::make_literal(eval_const(expr->op, lhs->literal, rhs->literal,
                                                 integer, expr->pos),
                                      expr->pos);
        }
        if (lhs == expr->lhs && rhs == expr->rhs) return expr;
        return Expr::make_binary(expr->op, lhs, rhs, expr->pos);
    }

    Rational eval_const(BinOp op, const Rational& a, const Rational& b, bool integer,
                        SourcePos pos) {
        try {
            switch (op) {
                case BinOp::add: return a + b;
                case BinOp::sub: return a - b;
                case BinOp::mul: return a * b;
                case BinOp::div:
                    if (b.is_zero())
                        throw Error(ErrorCode::SemanticError, "division by zero constant", pos);
                    if (!integer) return a / b;
                    // C semantics: truncation toward zero.
                    return Rational(a.num() / b.num());
            }
        } catch (const Error& e) {
            throw Error(e.code(), e.message(), e.pos().valid() ? e.pos() : pos);
        }
        throw Error(ErrorCode::Internal, "unreachable fold case", pos);
    }

    void check_no_zero_divisor(const ExprPtr& expr) {
        if (expr->kind != Expr::Kind::binary) return;
        if (expr->op == BinOp::div && expr->rhs->kind == Expr::Kind::literal &&
            expr->rhs->literal.is_zero())
            throw Error(ErrorCode::SemanticError, "division by zero constant", expr->rhs->pos);
        check_no_zero_divisor(expr->lhs);
        check_no_zero_divisor(expr->rhs);
    }

    // ---- program-level validation ----

    void finish_validation() {
        SourcePos end = tokens_.empty() ? SourcePos{} : tokens_.back().pos;
        if (!seen_kernel_)
            throw Error(ErrorCode::SemanticError, "missing 'kernel:' declaration", end);
        if (program_.inputs.empty())
            throw Error(ErrorCode::SemanticError, "program declares no input array", end);
        if (program_.outputs.empty())
            throw Error(ErrorCode::SemanticError, "program declares no output stage", end);
    }

    const std::vector<Token>& tokens_;
    size_t pos_ = 0;
    StencilProgram program_;
    bool seen_kernel_ = false;
    bool seen_unroll_ = false;
    bool seen_iterate_ = false;
    std::set<std::string> declared_;            // names declared so far
    std::set<std::string> referencable_;        // inputs + locals declared so far
    std::set<std::string> all_declared_names_;  // prescan over the whole file
};

}  // namespace

StencilProgram parse(const std::vector<Token>& tokens) { return Parser(tokens).run(); }

StencilProgram parse_source(const std::string& source) { return parse(tokenize(source)); }

}  // namespace sodac
