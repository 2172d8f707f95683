#pragma once

#include <string>
#include <vector>

#include "sodac/ast.hpp"
#include "sodac/lexer.hpp"

namespace sodac {

// Parses a token stream into a validated StencilProgram. Expressions come
// back with constant subtrees folded. Throws Error(SyntaxError) or
// Error(SemanticError) with positions.
StencilProgram parse(const std::vector<Token>& tokens);

StencilProgram parse_source(const std::string& source);

}  // namespace sodac
