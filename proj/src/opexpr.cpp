#include "virasq/opexpr.hpp"

#include <array>
#include <cctype>
#include <cstdio>
#include <map>

namespace virasq::opexpr {

namespace {

constexpr std::array<const char*, 13> kVocabulary = {
    "a1", "a2", "x1", "x2", "p1", "p2", "X", "P", "dx", "dp", "N1", "N2", "I"};

bool known_symbol(const std::string& s) {
    for (const char* v : kVocabulary)
        if (s == v) return true;
    return false;
}

struct Parser {
    const std::string& text;
    size_t pos = 0;

    explicit Parser(const std::string& t) : text(t) {}

    [[noreturn]] void fail(const std::string& msg, size_t at) const {
        throw ParseError(msg + " at column " + std::to_string(at + 1), int(at + 1));
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'", pos);
    }

    Node parse_expr() {
        Node lhs = parse_term();
        while (true) {
            const char c = peek();
            if (c != '+' && c != '-') break;
            ++pos;
            Node rhs = parse_term();
            Node out;
            out.kind = (c == '+') ? NodeKind::add : NodeKind::sub;
            out.begin = lhs.begin;
            out.end = rhs.end;
            out.children = {std::move(lhs), std::move(rhs)};
            lhs = std::move(out);
        }
        return lhs;
    }

    Node parse_term() {
        Node lhs = parse_factor();
        while (peek() == '*') {
            ++pos;
            Node rhs = parse_factor();
            Node out;
            out.kind = NodeKind::mul;
            out.begin = lhs.begin;
            out.end = rhs.end;
            out.children = {std::move(lhs), std::move(rhs)};
            lhs = std::move(out);
        }
        return lhs;
    }

    Node parse_factor() {
        if (peek() == '-') {
            const int begin = int(pos);
            ++pos;
            Node inner = parse_factor();
            Node out;
            out.kind = NodeKind::neg;
            out.begin = begin;
            out.end = inner.end;
            out.children = {std::move(inner)};
            return out;
        }
        Node base = parse_primary();
        while (peek() == '^') {
            ++pos;
            skip_ws();
            const size_t start = pos;
            if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
                fail("expected nonnegative integer exponent", pos);
            int e = 0;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
                e = e * 10 + (text[pos] - '0');
                if (e > 64) fail("exponent too large", start);
                ++pos;
            }
            Node out;
            out.kind = NodeKind::pow;
            out.exponent = e;
            out.begin = base.begin;
            out.end = int(pos);
            out.children = {std::move(base)};
            base = std::move(out);
        }
        return base;
    }

    Node parse_primary() {
        const char c = peek();
        const size_t start = pos;
        if (c == '(') {
            ++pos;
            Node inner = parse_expr();
            expect(')');
            inner.begin = int(start);
            inner.end = int(pos);
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_scalar();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_name();
        if (c == '\0') fail("unexpected end of input", pos);
        fail(std::string("unexpected character '") + c + "'", pos);
    }

    Node parse_scalar() {
        skip_ws();
        const size_t start = pos;
        std::string num;
        while (pos < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.')) {
            num += text[pos];
            ++pos;
        }
        if (num.empty() || num == "." || num.find('.') != num.rfind('.'))
            fail("malformed number", start);
        bool imaginary = false;
        if (pos < text.size() && text[pos] == 'i' &&
            (pos + 1 >= text.size() ||
             !std::isalnum(static_cast<unsigned char>(text[pos + 1])))) {
            imaginary = true;
            ++pos;
        }
        Node out;
        out.kind = NodeKind::scalar;
        const double v = std::stod(num);
        out.value = imaginary ? Complex(0.0, v) : Complex(v, 0.0);
        out.begin = int(start);
        out.end = int(pos);
        return out;
    }

    Node parse_name() {
        skip_ws();
        const size_t start = pos;
        std::string name;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])))) {
            name += text[pos];
            ++pos;
        }
        if (name == "dag") {
            expect('(');
            Node inner = parse_expr();
            expect(')');
            Node out;
            out.kind = NodeKind::dag;
            out.begin = int(start);
            out.end = int(pos);
            out.children = {std::move(inner)};
            return out;
        }
        if (!known_symbol(name)) fail("unknown symbol '" + name + "'", start);
        Node out;
        out.kind = NodeKind::symbol;
        out.name = name;
        out.begin = int(start);
        out.end = int(pos);
        return out;
    }
};

int precedence(NodeKind k) {
    switch (k) {
        case NodeKind::add:
        case NodeKind::sub: return 1;
        case NodeKind::mul: return 2;
        case NodeKind::neg: return 3;
        case NodeKind::pow: return 4;
        default: return 5;
    }
}

std::string format_scalar(Complex v) {
    const bool imaginary = v.real() == 0.0 && v.imag() != 0.0;
    const double d = imaginary ? v.imag() : v.real();
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    std::string s(buf);
    if (s.find('e') != std::string::npos || s.find('E') != std::string::npos) {
        std::snprintf(buf, sizeof buf, "%.17f", d);
        s = buf;
    }
    if (imaginary) s += 'i';
    return s;
}

void render(const Node& n, std::string& out) {
    switch (n.kind) {
        case NodeKind::scalar: out += format_scalar(n.value); return;
        case NodeKind::symbol: out += n.name; return;
        case NodeKind::dag:
            out += "dag(";
            render(n.children[0], out);
            out += ')';
            return;
        case NodeKind::neg: {
            out += '-';
            const bool parens = precedence(n.children[0].kind) < precedence(NodeKind::neg);
            if (parens) out += '(';
            render(n.children[0], out);
            if (parens) out += ')';
            return;
        }
        case NodeKind::pow: {
            const bool parens = precedence(n.children[0].kind) < precedence(NodeKind::pow);
            if (parens) out += '(';
            render(n.children[0], out);
            if (parens) out += ')';
            out += '^';
            out += std::to_string(n.exponent);
            return;
        }
        case NodeKind::add:
        case NodeKind::sub:
        case NodeKind::mul: {
            const int prec = precedence(n.kind);
            const bool lp = precedence(n.children[0].kind) < prec;
            // right child needs parens at equal precedence (left-associative ops)
            const bool rp = precedence(n.children[1].kind) <= prec;
            if (lp) out += '(';
            render(n.children[0], out);
            if (lp) out += ')';
            out += (n.kind == NodeKind::add) ? '+' : (n.kind == NodeKind::sub) ? '-' : '*';
            if (rp) out += '(';
            render(n.children[1], out);
            if (rp) out += ')';
            return;
        }
    }
}

}  // namespace

bool Node::same_structure(const Node& other) const {
    if (kind != other.kind || value != other.value || name != other.name ||
        exponent != other.exponent || children.size() != other.children.size())
        return false;
    for (size_t i = 0; i < children.size(); ++i)
        if (!children[i].same_structure(other.children[i])) return false;
    return true;
}

OpExprAst parse(const std::string& text) {
    Parser p(text);
    Node root = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input", p.pos);
    return root;
}

std::string pretty(const Node& ast) {
    std::string out;
    render(ast, out);
    return out;
}

std::string debug_string(const Node& n) {
    switch (n.kind) {
        case NodeKind::scalar: return "num(" + format_scalar(n.value) + ")";
        case NodeKind::symbol: return "sym(" + n.name + ")";
        case NodeKind::dag: return "dag(" + debug_string(n.children[0]) + ")";
        case NodeKind::neg: return "neg(" + debug_string(n.children[0]) + ")";
        case NodeKind::pow:
            return "pow(" + debug_string(n.children[0]) + "," + std::to_string(n.exponent) + ")";
        case NodeKind::add:
            return "add(" + debug_string(n.children[0]) + "," + debug_string(n.children[1]) + ")";
        case NodeKind::sub:
            return "sub(" + debug_string(n.children[0]) + "," + debug_string(n.children[1]) + ")";
        case NodeKind::mul:
            return "mul(" + debug_string(n.children[0]) + "," + debug_string(n.children[1]) + ")";
    }
    return "?";
}

OperatorMatrix eval(const Node& ast, const FockConfig& cfg) {
    switch (ast.kind) {
        case NodeKind::scalar: return ast.value * identity_op(cfg);
        case NodeKind::symbol: {
            const std::string& s = ast.name;
            const bool two_mode_symbol = (s == "a2" || s == "x2" || s == "p2" || s == "N2" ||
                                          s == "X" || s == "P" || s == "dx" || s == "dp");
            if (two_mode_symbol && cfg.mode_count != 2)
                throw ConfigError("symbol '" + s + "' requires a two-mode configuration");
            if (s == "I") return identity_op(cfg);
            if (s == "a1") return build_annihilation(cfg, 1);
            if (s == "a2") return build_annihilation(cfg, 2);
            if (s == "x1") return build_position(cfg, 1);
            if (s == "x2") return build_position(cfg, 2);
            if (s == "p1") return build_momentum(cfg, 1);
            if (s == "p2") return build_momentum(cfg, 2);
            if (s == "N1") return build_number(cfg, 1);
            if (s == "N2") return build_number(cfg, 2);
            const ComRel cr = build_com_rel(cfg);
            if (s == "X") return cr.X;
            if (s == "P") return cr.P;
            if (s == "dx") return cr.dx;
            return cr.dp;  // "dp"
        }
        case NodeKind::add: return eval(ast.children[0], cfg) + eval(ast.children[1], cfg);
        case NodeKind::sub: return eval(ast.children[0], cfg) - eval(ast.children[1], cfg);
        case NodeKind::mul: return eval(ast.children[0], cfg) * eval(ast.children[1], cfg);
        case NodeKind::neg: return -eval(ast.children[0], cfg);
        case NodeKind::dag: return eval(ast.children[0], cfg).dagger();
        case NodeKind::pow: {
            const OperatorMatrix base = eval(ast.children[0], cfg);
            OperatorMatrix out = identity_op(cfg);
            for (int i = 0; i < ast.exponent; ++i) out = out * base;
            return out;
        }
    }
    throw ConfigError("eval: malformed AST");
}

}  // namespace virasq::opexpr
