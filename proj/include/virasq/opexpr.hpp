#pragma once

#include <memory>
#include <string>
#include <vector>

#include "virasq/fock.hpp"

namespace virasq::opexpr {

// Syntax / unknown-symbol error with a 1-based source column.
struct ParseError : std::runtime_error {
    int column;
    ParseError(const std::string& what, int col) : std::runtime_error(what), column(col) {}
};

enum class NodeKind { scalar, symbol, add, sub, mul, pow, dag, neg };

struct Node {
    NodeKind kind = NodeKind::scalar;
    Complex value{};          // scalar
    std::string name;         // symbol
    int exponent = 0;         // pow
    std::vector<Node> children;
    int begin = 0, end = 0;   // source span, 0-based [begin, end)

    bool same_structure(const Node& other) const;  // ignores spans
};

using OpExprAst = Node;

// Grammar (LL(1), no implicit multiplication):
//   expr   := term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := '-' factor | primary ('^' uint)*
//   primary:= scalar | symbol | 'dag' '(' expr ')' | '(' expr ')'
// Scalars are decimal reals with an optional trailing 'i'.  Symbols:
//   a1 a2 x1 x2 p1 p2 X P dx dp N1 N2 I
OpExprAst parse(const std::string& text);

// Minimal-parenthesis rendering; parse(pretty(ast)) is structurally identical.
std::string pretty(const Node& ast);

// Canonical s-expression form, e.g. sub(mul(sym(a1),sym(a2)),...).
std::string debug_string(const Node& ast);

// Compositional evaluation against the operators of `cfg`.  Two-mode symbols
// under a single-mode configuration raise ConfigError.
OperatorMatrix eval(const Node& ast, const FockConfig& cfg);

}  // namespace virasq::opexpr
