#include "sodac/lexer.hpp"

#include <cctype>
#include <unordered_map>

namespace sodac {

const char* token_kind_name(TokenKind kind) {
    switch (kind) {
        case TokenKind::kw_kernel: return "'kernel'";
        case TokenKind::kw_unroll: return "'unroll'";
        case TokenKind::kw_iterate: return "'iterate'";
        case TokenKind::kw_factor: return "'factor'";
        case TokenKind::kw_input: return "'input'";
        case TokenKind::kw_local: return "'local'";
        case TokenKind::kw_output: return "'output'";
        case TokenKind::ident: return "identifier";
        case TokenKind::int_lit: return "integer";
        case TokenKind::float_lit: return "number";
        case TokenKind::colon: return "':'";
        case TokenKind::comma: return "','";
        case TokenKind::lparen: return "'('";
        case TokenKind::rparen: return "')'";
        case TokenKind::equals: return "'='";
        case TokenKind::plus: return "'+'";
        case TokenKind::minus: return "'-'";
        case TokenKind::star: return "'*'";
        case TokenKind::slash: return "'/'";
        case TokenKind::newline: return "end of line";
        case TokenKind::end_of_file: return "end of input";
    }
    return "?";
}

namespace {

const std::unordered_map<std::string, TokenKind>& keyword_table() {
    static const std::unordered_map<std::string, TokenKind> kw = {
        {"kernel", TokenKind::kw_kernel},   {"unroll", TokenKind::kw_unroll},
        {"iterate", TokenKind::kw_iterate}, {"factor", TokenKind::kw_factor},
        {"input", TokenKind::kw_input},     {"local", TokenKind::kw_local},
        {"output", TokenKind::kw_output},
    };
    return kw;
}

// A '-' directly followed by a digit begins a signed literal unless the
// previous token could end a value; "blur_x(0, -1)" lexes INT(-1) while
// "a - 1" stays a binary minus.
bool value_ended(const std::vector<Token>& tokens) {
    if (tokens.empty()) return false;
    switch (tokens.back().kind) {
        case TokenKind::ident:
        case TokenKind::int_lit:
        case TokenKind::float_lit:
        case TokenKind::rparen:
            return true;
        default:
            return false;
    }
}

class Cursor {
public:
    explicit Cursor(const std::string& src) : src_(src) {}

    bool done() const { return i_ >= src_.size(); }
    char peek(size_t ahead = 0) const {
        return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0';
    }
    char take() {
        char c = src_[i_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }
    SourcePos pos() const { return {line_, col_}; }

private:
    const std::string& src_;
    size_t i_ = 0;
    int line_ = 1;
    int col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(const std::string& source) {
    std::vector<Token> tokens;
    Cursor cur(source);

    auto push = [&](TokenKind kind, SourcePos pos, std::string text = {}) {
        tokens.push_back(Token{kind, pos, std::move(text), 0});
    };

    auto lex_number = [&](SourcePos pos, bool negative) {
        std::string text;
        if (negative) text.push_back('-');
        bool is_float = false;
        while (std::isdigit(static_cast<unsigned char>(cur.peek()))) text.push_back(cur.take());
        if (cur.peek() == '.' && std::isdigit(static_cast<unsigned char>(cur.peek(1)))) {
            is_float = true;
            text.push_back(cur.take());
            while (std::isdigit(static_cast<unsigned char>(cur.peek()))) text.push_back(cur.take());
        }
        if ((cur.peek() == 'e' || cur.peek() == 'E') &&
            (std::isdigit(static_cast<unsigned char>(cur.peek(1))) ||
             ((cur.peek(1) == '+' || cur.peek(1) == '-') &&
              std::isdigit(static_cast<unsigned char>(cur.peek(2)))))) {
            is_float = true;
            text.push_back(cur.take());
            if (cur.peek() == '+' || cur.peek() == '-') text.push_back(cur.take());
            while (std::isdigit(static_cast<unsigned char>(cur.peek()))) text.push_back(cur.take());
        }
        Token tok{is_float ? TokenKind::float_lit : TokenKind::int_lit, pos, text, 0};
        if (!is_float) {
            errno = 0;
            char* end = nullptr;
            long long v = std::strtoll(text.c_str(), &end, 10);
            if (errno != 0 || end == text.c_str() || *end != '\0')
                throw Error(ErrorCode::UnexpectedCharacter, "integer literal out of range", pos);
            tok.int_value = v;
        }
        tokens.push_back(std::move(tok));
    };

    while (!cur.done()) {
        SourcePos pos = cur.pos();
        char c = cur.peek();
        if (c == '\n') {
            cur.take();
            push(TokenKind::newline, pos);
            continue;
        }
        if (c == '\r') {  // tolerate CRLF
            cur.take();
            continue;
        }
        if (c == ' ' || c == '\t') {
            cur.take();
            continue;
        }
        if (c == '#') {
            while (!cur.done() && cur.peek() != '\n') cur.take();
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            lex_number(pos, false);
            continue;
        }
        if (c == '-' && std::isdigit(static_cast<unsigned char>(cur.peek(1))) &&
            !value_ended(tokens)) {
            cur.take();
            lex_number(pos, true);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string text;
            while (std::isalnum(static_cast<unsigned char>(cur.peek())) || cur.peek() == '_')
                text.push_back(cur.take());
            auto it = keyword_table().find(text);
            if (it != keyword_table().end())
                push(it->second, pos, text);
            else
                push(TokenKind::ident, pos, text);
            continue;
        }
        switch (c) {
            case ':': cur.take(); push(TokenKind::colon, pos); continue;
            case ',': cur.take(); push(TokenKind::comma, pos); continue;
            case '(': cur.take(); push(TokenKind::lparen, pos); continue;
            case ')': cur.take(); push(TokenKind::rparen, pos); continue;
            case '=': cur.take(); push(TokenKind::equals, pos); continue;
            case '+': cur.take(); push(TokenKind::plus, pos); continue;
            case '-': cur.take(); push(TokenKind::minus, pos); continue;
            case '*': cur.take(); push(TokenKind::star, pos); continue;
            case '/': cur.take(); push(TokenKind::slash, pos); continue;
            default:
                throw Error(ErrorCode::UnexpectedCharacter,
                            std::string("unexpected character '") + c + "'", pos);
        }
    }
    push(TokenKind::end_of_file, cur.pos());
    return tokens;
}

}  // namespace sodac
