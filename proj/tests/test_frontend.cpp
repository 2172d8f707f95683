#include <cstdint>
#include <string>
#include <vector>

#include "doctest.h"
#include "sodac/lexer.hpp"
#include "sodac/parser.hpp"
#include "support/corpus.hpp"
#include "support/fixtures.hpp"

using namespace sodac;
using namespace sodac::testing;

namespace {

std::vector<TokenKind> kinds_of(const std::string& src) {
    std::vector<TokenKind> kinds;
    for (const auto& tok : tokenize(src))
        if (tok.kind != TokenKind::end_of_file) kinds.push_back(tok.kind);
    return kinds;
}

bool program_equal(const StencilProgram& a, const StencilProgram& b) {
    if (a.kernel_name != b.kernel_name || a.unroll_factor != b.unroll_factor ||
        a.iterate_factor != b.iterate_factor)
        return false;
    if (a.inputs.size() != b.inputs.size() || a.locals.size() != b.locals.size() ||
        a.outputs.size() != b.outputs.size())
        return false;
    for (size_t i = 0; i < a.inputs.size(); ++i) {
        if (a.inputs[i].name != b.inputs[i].name ||
            a.inputs[i].elem_type != b.inputs[i].elem_type ||
            a.inputs[i].tile_shape != b.inputs[i].tile_shape)
            return false;
    }
    auto stages_equal = [](const std::vector<StageDecl>& x, const std::vector<StageDecl>& y) {
        for (size_t i = 0; i < x.size(); ++i) {
            if (x[i].name != y[i].name || x[i].elem_type != y[i].elem_type ||
                !expr_equal(*x[i].expr, *y[i].expr))
                return false;
        }
        return true;
    };
    return stages_equal(a.locals, b.locals) && stages_equal(a.outputs, b.outputs);
}

// Test-local evaluator, independent of the compiler's evaluation paths.
// Integer types wrap like two's-complement hardware; division truncates.
double eval_double(const Expr& e, const std::vector<double>& tap_values, size_t& next_tap) {
    switch (e.kind) {
        case Expr::Kind::literal: return e.literal.to_double();
        case Expr::Kind::tap: return tap_values[next_tap++ % tap_values.size()];
        case Expr::Kind::binary: break;
    }
    double l = eval_double(*e.lhs, tap_values, next_tap);
    double r = eval_double(*e.rhs, tap_values, next_tap);
    switch (e.op) {
        case BinOp::add: return l + r;
        case BinOp::sub: return l - r;
        case BinOp::mul: return l * r;
        case BinOp::div: return l / r;
    }
    return 0;
}

int64_t eval_int(const Expr& e, const std::vector<int64_t>& tap_values, size_t& next_tap,
                 bool& div_by_zero) {
    switch (e.kind) {
        case Expr::Kind::literal: return e.literal.num();
        case Expr::Kind::tap: return tap_values[next_tap++ % tap_values.size()];
        case Expr::Kind::binary: break;
    }
    int64_t l = eval_int(*e.lhs, tap_values, next_tap, div_by_zero);
    int64_t r = eval_int(*e.rhs, tap_values, next_tap, div_by_zero);
    auto wrap = [](uint64_t v) { return static_cast<int64_t>(v); };
    switch (e.op) {
        case BinOp::add: return wrap(static_cast<uint64_t>(l) + static_cast<uint64_t>(r));
        case BinOp::sub: return wrap(static_cast<uint64_t>(l) - static_cast<uint64_t>(r));
        case BinOp::mul: return wrap(static_cast<uint64_t>(l) * static_cast<uint64_t>(r));
        case BinOp::div:
            if (r == 0) {
                div_by_zero = true;
                return 0;
            }
            return l / r;
    }
    return 0;
}

// Minimal test-local expression parser that performs no folding at all.
// Serves as the independent oracle for the folding-preserves-value property.
struct MiniParser {
    const std::vector<Token>& toks;
    size_t i = 0;

    const Token& peek() const { return toks[std::min(i, toks.size() - 1)]; }
    bool at(TokenKind k) const { return peek().kind == k; }
    const Token& take() { return toks[i++]; }

    ExprPtr expr() {
        ExprPtr l = term();
        while (at(TokenKind::plus) || at(TokenKind::minus)) {
            BinOp op = at(TokenKind::plus) ? BinOp::add : BinOp::sub;
            take();
            l = Expr::make_binary(op, l, term(), {});
        }
        return l;
    }
    ExprPtr term() {
        ExprPtr l = factor();
        while (at(TokenKind::star) || at(TokenKind::slash)) {
            BinOp op = at(TokenKind::star) ? BinOp::mul : BinOp::div;
            take();
            l = Expr::make_binary(op, l, factor(), {});
        }
        return l;
    }
    ExprPtr factor() {
        if (at(TokenKind::minus)) {
            take();
            return Expr::make_binary(BinOp::sub, Expr::make_literal(Rational(0), {}), factor(),
                                     {});
        }
        return primary();
    }
    ExprPtr primary() {
        if (at(TokenKind::int_lit)) {
            const Token& t = take();
            return Expr::make_literal(Rational(t.int_value), {});
        }
        if (at(TokenKind::float_lit)) {
            const Token& t = take();
            // decimal text -> exact rational, digit by digit
            Rational v(0);
            Rational scale(1);
            bool frac = false;
            for (char c : t.text) {
                if (c == '.') {
                    frac = true;
                    continue;
                }
                v = v * Rational(10) + Rational(c - '0');
                if (frac) scale = scale * Rational(10);
            }
            return Expr::make_literal(v / scale, {});
        }
        if (at(TokenKind::lparen)) {
            take();
            ExprPtr e = expr();
            take();  // rparen
            return e;
        }
        // tap
        const Token& name = take();
        TapRef tap;
        tap.array = name.text;
        take();  // lparen
        while (!at(TokenKind::rparen)) {
            if (at(TokenKind::comma)) {
                take();
                continue;
            }
            tap.offsets.push_back(take().int_value);
        }
        take();  // rparen
        return Expr::make_tap(tap, {});
    }
};

ExprPtr parse_unfolded(const std::string& expr_src) {
    auto toks = tokenize(expr_src);
    MiniParser mp{toks};
    return mp.expr();
}

}  // namespace

TEST_CASE("tokenize: kernel header line") {
    auto toks = tokenize("kernel: blur");
    REQUIRE(toks.size() == 4);  // + EOF
    CHECK(toks[0].kind == TokenKind::kw_kernel);
    CHECK(toks[1].kind == TokenKind::colon);
    CHECK(toks[2].kind == TokenKind::ident);
    CHECK(toks[2].text == "blur");
}

TEST_CASE("tokenize: tile shape with unbounded extent") {
    auto kinds = kinds_of("image(3000, *)");
    std::vector<TokenKind> want = {TokenKind::ident,  TokenKind::lparen, TokenKind::int_lit,
                                   TokenKind::comma, TokenKind::star,   TokenKind::rparen};
    CHECK(kinds == want);
    CHECK(tokenize("image(3000, *)")[2].int_value == 3000);
}

TEST_CASE("tokenize: negative offsets fold into the literal") {
    auto toks = tokenize("blur_x(0, -1)");
    REQUIRE(toks.size() == 7);
    CHECK(toks[0].kind == TokenKind::ident);
    CHECK(toks[1].kind == TokenKind::lparen);
    CHECK(toks[2].kind == TokenKind::int_lit);
    CHECK(toks[2].int_value == 0);
    CHECK(toks[3].kind == TokenKind::comma);
    CHECK(toks[4].kind == TokenKind::int_lit);
    CHECK(toks[4].int_value == -1);
    CHECK(toks[5].kind == TokenKind::rparen);
}

TEST_CASE("tokenize: binary minus is not a signed literal") {
    auto kinds = kinds_of("a - 1");
    std::vector<TokenKind> want = {TokenKind::ident, TokenKind::minus, TokenKind::int_lit};
    CHECK(kinds == want);
}

TEST_CASE("tokenize: comments strip, positions recorded") {
    auto toks = tokenize("kernel: b # comment here\nunroll factor: 2");
    CHECK(toks[3].kind == TokenKind::newline);
    CHECK(toks[4].kind == TokenKind::kw_unroll);
    CHECK(toks[4].pos.line == 2);
    CHECK(toks[4].pos.column == 1);
}

TEST_CASE("tokenize: unexpected character carries position") {
    try {
        tokenize("kernel: a\n@bad");
        FAIL("expected UnexpectedCharacter");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnexpectedCharacter);
        CHECK(e.pos().line == 2);
        CHECK(e.pos().column == 1);
    }
}

TEST_CASE("parse: full blur program") {
    StencilProgram p = parse_source(kBlurSource);
    CHECK(p.kernel_name == "blur");
    CHECK(p.unroll_factor == 16);
    CHECK(p.iterate_factor == 1);
    REQUIRE(p.inputs.size() == 1);
    CHECK(p.inputs[0].name == "image");
    CHECK(p.inputs[0].elem_type == ElemType::f32);
    CHECK(p.inputs[0].tile_shape == std::vector<int64_t>{3000, -1});
    REQUIRE(p.locals.size() == 1);
    CHECK(p.locals[0].name == "blur_x");
    REQUIRE(p.outputs.size() == 1);
    CHECK(p.outputs[0].name == "blur_y");
}

TEST_CASE("parse: undeclared array") {
    const char* src = "kernel: k\ninput float: a(8, *)\noutput float: o(0, 0) = img(0, 0)\n";
    try {
        parse_source(src);
        FAIL("expected SemanticError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SemanticError);
        CHECK(e.pos().line == 3);
    }
}

TEST_CASE("parse: use before declaration") {
    const char* src =
        "kernel: k\ninput float: in(8, *)\n"
        "local float: a(0, 0) = b(0, 0)\n"
        "local float: b(0, 0) = in(0, 0)\n"
        "output float: o(0, 0) = a(0, 0)\n";
    try {
        parse_source(src);
        FAIL("expected SemanticError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SemanticError);
        CHECK(e.message().find("before") != std::string::npos);
    }
}

TEST_CASE("parse: division by literal zero is rejected") {
    const char* direct = "kernel: k\ninput float: a(8, *)\noutput float: o(0, 0) = a(0, 0) / 0\n";
    CHECK_THROWS_AS(parse_source(direct), Error);
    // Folding exposes it too: (2 - 2) becomes 0.
    const char* folded =
        "kernel: k\ninput float: a(8, *)\noutput float: o(0, 0) = a(0, 0) / (2 - 2)\n";
    CHECK_THROWS_AS(parse_source(folded), Error);
}

TEST_CASE("parse: rank above 3 rejected, rank mismatch rejected") {
    CHECK_THROWS_AS(parse_source("kernel: k\ninput float: a(8, 8, 8, *)\n"
                                 "output float: o(0, 0, 0, 0) = a(0, 0, 0, 0)\n"),
                    Error);
    CHECK_THROWS_AS(parse_source("kernel: k\ninput float: a(8, *)\n"
                                 "output float: o(0, 0) = a(0)\n"),
                    Error);
}

TEST_CASE("parse: exactly one output, at least one input") {
    CHECK_THROWS_AS(parse_source("kernel: k\ninput float: a(8, *)\n"), Error);
    CHECK_THROWS_AS(parse_source("kernel: k\noutput float: o(0) = 1\n"), Error);
    CHECK_THROWS_AS(parse_source("kernel: k\ninput float: a(8)\n"
                                 "output float: o(0) = a(0)\noutput float: p(0) = a(0)\n"),
                    Error);
}

TEST_CASE("parse: only last extent may be unbounded; width must be concrete") {
    CHECK_THROWS_AS(parse_source("kernel: k\ninput float: a(*, 8)\noutput float: o(0,0)=a(0,0)\n"),
                    Error);
    CHECK_THROWS_AS(
        parse_source("kernel: k\ninput float: a(8, *, 8)\noutput float: o(0,0,0)=a(0,0,0)\n"),
        Error);
}

TEST_CASE("parse: integer stages reject fractional literals") {
    CHECK_THROWS_AS(parse_source("kernel: k\ninput int32: a(8, *)\n"
                                 "output int32: o(0, 0) = a(0, 0) * 2.5\n"),
                    Error);
}

TEST_CASE("parse: integer constant folding truncates like C") {
    StencilProgram p = parse_source(
        "kernel: k\ninput int32: a(8, *)\noutput int32: o(0, 0) = (7 / 2) * a(0, 0)\n");
    const Expr& e = *p.outputs[0].expr;
    REQUIRE(e.kind == Expr::Kind::binary);
    REQUIRE(e.lhs->kind == Expr::Kind::literal);
    CHECK(e.lhs->literal == Rational(3));
}

TEST_CASE("parse: float constant folding is exact rational") {
    StencilProgram p = parse_source(
        "kernel: k\ninput float: a(8, *)\noutput float: o(0, 0) = (1 / 3) * a(0, 0)\n");
    const Expr& e = *p.outputs[0].expr;
    REQUIRE(e.lhs->kind == Expr::Kind::literal);
    CHECK(e.lhs->literal == Rational(1, 3));
}

TEST_CASE("parse: deep nesting yields an error, not a crash") {
    std::string src = "kernel: k\ninput float: a(8, *)\noutput float: o(0, 0) = ";
    for (int i = 0; i < 5000; ++i) src += "(";
    src += "a(0, 0)";
    for (int i = 0; i < 5000; ++i) src += ")";
    src += "\n";
    try {
        parse_source(src);
        FAIL("expected SyntaxError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SyntaxError);
    }
}

TEST_CASE("property: pretty-print round-trips to a structurally identical program") {
    Rng rng(20240811);
    for (int iter = 0; iter < 300; ++iter) {
        std::string src = random_program_source(rng);
        CAPTURE(src);
        StencilProgram p1 = parse_source(src);
        std::string printed = pretty_print(p1);
        CAPTURE(printed);
        StencilProgram p2 = parse_source(printed);
        CHECK(program_equal(p1, p2));
        // And printing is a fixpoint from then on.
        CHECK(pretty_print(p2) == printed);
    }
}

TEST_CASE("property: constant folding preserves value") {
    Rng rng(99123);
    int int_checked = 0, float_checked = 0;
    for (int iter = 0; iter < 400; ++iter) {
        bool integer = rand_bool(rng);
        std::string type = integer ? "int32" : "float32";
        std::string expr_src = random_expr_source(rng, {"a"}, 2, integer, 3);
        std::string src =
            "kernel: k\ninput " + type + ": a(8, *)\noutput " + type + ": o(0, 0) = " + expr_src +
            "\n";
        StencilProgram folded;
        try {
            folded = parse_source(src);
        } catch (const Error&) {
            continue;  // e.g. a folded subtree hit division by zero
        }
        ExprPtr unfolded = parse_unfolded(expr_src);
        if (integer) {
            std::vector<int64_t> taps;
            for (int i = 0; i < 8; ++i) taps.push_back(rand_int(rng, -50, 50));
            size_t n1 = 0, n2 = 0;
            bool dz1 = false, dz2 = false;
            int64_t v1 = eval_int(*folded.outputs[0].expr, taps, n1, dz1);
            int64_t v2 = eval_int(*unfolded, taps, n2, dz2);
            if (!dz1 && !dz2) {
                CHECK(v1 == v2);
                ++int_checked;
            }
        } else {
            std::vector<double> taps;
            for (int i = 0; i < 8; ++i) taps.push_back(rand_int(rng, -50, 50) / 4.0);
            size_t n1 = 0, n2 = 0;
            double v1 = eval_double(*folded.outputs[0].expr, taps, n1);
            double v2 = eval_double(*unfolded, taps, n2);
            if (std::isfinite(v1) && std::isfinite(v2)) {
                CHECK(v1 == doctest::Approx(v2).epsilon(1e-9));
                ++float_checked;
            }
        }
    }
    CHECK(int_checked > 50);
    CHECK(float_checked > 50);
}

TEST_CASE("property: parsing is total on mutated inputs") {
    Rng rng(777);
    std::string base = kBlurSource;
    int ok = 0, err = 0;
    for (int iter = 0; iter < 1000; ++iter) {
        std::string mutated = base;
        int edits = static_cast<int>(rand_int(rng, 1, 6));
        for (int e = 0; e < edits; ++e) {
            size_t pos = rand_int(rng, 0, mutated.size() - 1);
            switch (rand_int(rng, 0, 2)) {
                case 0: mutated[pos] = static_cast<char>(rand_int(rng, 1, 255)); break;
                case 1: mutated.insert(pos, 1, static_cast<char>(rand_int(rng, 32, 126))); break;
                default: mutated.erase(pos, 1); break;
            }
        }
        try {
            parse_source(mutated);
            ++ok;
        } catch (const Error&) {
            ++err;  // positioned error: acceptable outcome
        }
        // any other exception escapes and fails the test
    }
    CHECK(ok + err == 1000);
}
