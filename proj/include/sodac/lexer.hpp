// Tokenizer for the stencil DSL. Line-oriented: newlines are tokens,
// '#' starts a comment running to end of line.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sodac/diagnostics.hpp"

namespace sodac {

enum class TokenKind {
    kw_kernel,
    kw_unroll,
    kw_iterate,
    kw_factor,
    kw_input,
    kw_local,
    kw_output,
    ident,
    int_lit,
    float_lit,
    colon,
    comma,
    lparen,
    rparen,
    equals,
    plus,
    minus,
    star,
    slash,
    newline,
    end_of_file,
};

const char* token_kind_name(TokenKind kind);

struct Token {
    TokenKind kind;
    SourcePos pos;
    std::string text;      // raw spelling (identifiers, numbers)
    int64_t int_value = 0; // int_lit

    bool is(TokenKind k) const { return kind == k; }
};

// Throws Error(UnexpectedCharacter) with position on bad input.
std::vector<Token> tokenize(const std::string& source);

}  // namespace sodac
