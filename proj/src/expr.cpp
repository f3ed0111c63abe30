#include "holonorm/expr.hpp"

#include <array>
#include <charconv>
#include <cctype>
#include <cmath>
#include <numbers>
#include <optional>

namespace holonorm::expr {

namespace {

constexpr std::array<std::pair<std::string_view, Function>, 9> kFunctions{{
    {"sin", Function::Sin},
    {"cos", Function::Cos},
    {"exp", Function::Exp},
    {"log", Function::Log},
    {"abs", Function::Abs},
    {"sqrt", Function::Sqrt},
    {"pow", Function::Pow},
    {"min", Function::Min},
    {"max", Function::Max},
}};

std::optional<Function> lookup_function(std::string_view id) {
    for (const auto& [n, f] : kFunctions)
        if (n == id) return f;
    return std::nullopt;
}

class Parser {
public:
    Parser(std::string_view src, std::size_t dim) : src_(src), dim_(dim) {}

    NodePtr parse_all() {
        NodePtr e = parse_expr();
        skip_ws();
        if (pos_ != src_.size()) throw ParseError("unexpected '" + std::string(1, src_[pos_]) + "'", pos_);
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= src_.size()) throw ParseError(std::string("expected '") + c + "' before end of input", pos_);
            throw ParseError(std::string("expected '") + c + "'", pos_);
        }
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        for (;;) {
            if (accept('+'))
                lhs = binary(BinaryOp::Add, lhs, parse_term());
            else if (accept('-'))
                lhs = binary(BinaryOp::Sub, lhs, parse_term());
            else
                return lhs;
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        for (;;) {
            if (accept('*'))
                lhs = binary(BinaryOp::Mul, lhs, parse_unary());
            else if (accept('/'))
                lhs = binary(BinaryOp::Div, lhs, parse_unary());
            else
                return lhs;
        }
    }

    NodePtr parse_unary() {
        if (accept('-')) return negate(parse_unary());
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (accept('^')) return binary(BinaryOp::Pow, base, parse_unary());
        return base;
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = parse_expr();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
    }

    NodePtr parse_number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
            if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
                while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) ++p;
                pos_ = p;
            }
        }
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
        if (ec != std::errc() || ptr != src_.data() + pos_ || !std::isfinite(v))
            throw ParseError("malformed number '" + std::string(src_.substr(start, pos_ - start)) + "'", start);
        return literal(v);
    }

    NodePtr parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
        const std::string_view id = src_.substr(start, pos_ - start);

        if (const auto f = lookup_function(id)) {
            skip_ws();
            if (!accept('(')) throw ParseError("function '" + std::string(id) + "' needs an argument list", pos_);
            std::vector<NodePtr> args;
            if (!accept(')')) {
                do {
                    args.push_back(parse_expr());
                } while (accept(','));
                expect(')');
            }
            if (static_cast<int>(args.size()) != arity(*f))
                throw ParseError("function '" + std::string(id) + "' takes " + std::to_string(arity(*f)) +
                                     " argument(s), got " + std::to_string(args.size()),
                                 start);
            return call(*f, std::move(args));
        }
        if (id == "pi") return literal(std::numbers::pi);
        if (id == "t") return variable(kTimeVariable);
        if (id.size() >= 2 && id[0] == 'x') {
            std::size_t axis = 0;
            const auto [ptr, ec] = std::from_chars(id.data() + 1, id.data() + id.size(), axis);
            if (ec == std::errc() && ptr == id.data() + id.size() && id[1] != '0' && axis >= 1) {
                if (axis > dim_)
                    throw ParseError("unknown identifier '" + std::string(id) + "' for dimension " +
                                         std::to_string(dim_),
                                     start);
                return variable(static_cast<int>(axis) - 1);
            }
        }
        throw ParseError("unknown identifier '" + std::string(id) + "'", start);
    }

    std::string_view src_;
    std::size_t dim_;
    std::size_t pos_ = 0;
};

void check_scope(const Node& n, std::size_t dim) {
    if (n.kind == Node::Kind::Variable && n.variable != kTimeVariable &&
        (n.variable < 0 || static_cast<std::size_t>(n.variable) >= dim))
        throw InputError("variable x" + std::to_string(n.variable + 1) + " is out of scope for dimension " +
                         std::to_string(dim));
    if (n.kind == Node::Kind::Literal && !std::isfinite(n.value)) throw InputError("literal must be finite");
    if (n.kind == Node::Kind::Call && static_cast<int>(n.args.size()) != arity(n.function))
        throw InputError("wrong arity for " + std::string(name(n.function)));
    for (const auto& a : n.args) check_scope(*a, dim);
}

[[noreturn]] void domain_error(const Node& n, const std::string& why) {
    throw EvalError("domain error in '" + unparse(n) + "': " + why);
}

bool is_integer(double v) { return std::trunc(v) == v; }

double checked_pow(const Node& n, double base, double exponent) {
    if (base < 0.0 && !is_integer(exponent)) domain_error(n, "negative base with non-integer exponent");
    return std::pow(base, exponent);
}

double eval_node(const Node& n, std::span<const double> x, double t) {
    double r = 0.0;
    switch (n.kind) {
        case Node::Kind::Literal:
            return n.value;
        case Node::Kind::Variable:
            return n.variable == kTimeVariable ? t : x[static_cast<std::size_t>(n.variable)];
        case Node::Kind::Negate:
            return -eval_node(*n.args[0], x, t);
        case Node::Kind::Binary: {
            const double a = eval_node(*n.args[0], x, t);
            const double b = eval_node(*n.args[1], x, t);
            switch (n.op) {
                case BinaryOp::Add: r = a + b; break;
                case BinaryOp::Sub: r = a - b; break;
                case BinaryOp::Mul: r = a * b; break;
                case BinaryOp::Div:
                    if (b == 0.0) domain_error(n, "division by zero");
                    r = a / b;
                    break;
                case BinaryOp::Pow: r = checked_pow(n, a, b); break;
            }
            break;
        }
        case Node::Kind::Call: {
            const double a = eval_node(*n.args[0], x, t);
            switch (n.function) {
                case Function::Sin: r = std::sin(a); break;
                case Function::Cos: r = std::cos(a); break;
                case Function::Exp: r = std::exp(a); break;
                case Function::Log:
                    if (a <= 0.0) domain_error(n, "logarithm of a nonpositive argument");
                    r = std::log(a);
                    break;
                case Function::Abs: r = std::abs(a); break;
                case Function::Sqrt:
                    if (a < 0.0) domain_error(n, "square root of a negative argument");
                    r = std::sqrt(a);
                    break;
                case Function::Pow: r = checked_pow(n, a, eval_node(*n.args[1], x, t)); break;
                case Function::Min: r = std::min(a, eval_node(*n.args[1], x, t)); break;
                case Function::Max: r = std::max(a, eval_node(*n.args[1], x, t)); break;
            }
            break;
        }
    }
    if (!std::isfinite(r)) domain_error(n, "non-finite result");
    return r;
}

// Binding strength used by unparse: 1 additive, 2 multiplicative, 3 unary
// minus, 4 power, 5 atoms.
int strength(const Node& n) {
    switch (n.kind) {
        case Node::Kind::Literal: return 5;  // negative literals print parenthesized
        case Node::Kind::Variable:
        case Node::Kind::Call: return 5;
        case Node::Kind::Negate: return 3;
        case Node::Kind::Binary:
            switch (n.op) {
                case BinaryOp::Add:
                case BinaryOp::Sub: return 1;
                case BinaryOp::Mul:
                case BinaryOp::Div: return 2;
                case BinaryOp::Pow: return 4;
            }
    }
    return 5;
}

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, std::abs(v));
    std::string s(buf, res.ptr);
    return (v < 0.0 || std::signbit(v)) ? "(-" + s + ")" : s;
}

std::string wrap(const Node& child, int min_strength) {
    std::string s = unparse(child);
    return strength(child) < min_strength ? "(" + s + ")" : s;
}

}  // namespace

NodePtr literal(double value) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Literal;
    n->value = value;
    return n;
}

NodePtr variable(int slot) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Variable;
    n->variable = slot;
    return n;
}

NodePtr negate(NodePtr operand) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Negate;
    n->args = {std::move(operand)};
    return n;
}

NodePtr binary(BinaryOp op, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Binary;
    n->op = op;
    n->args = {std::move(lhs), std::move(rhs)};
    return n;
}

NodePtr call(Function f, std::vector<NodePtr> args) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Call;
    n->function = f;
    n->args = std::move(args);
    return n;
}

int arity(Function f) {
    switch (f) {
        case Function::Pow:
        case Function::Min:
        case Function::Max: return 2;
        default: return 1;
    }
}

std::string_view name(Function f) {
    for (const auto& [n, g] : kFunctions)
        if (g == f) return n;
    return "?";
}

Expr Expr::parse(std::string_view source, std::size_t dim) {
    if (dim == 0) throw InputError("expression dimension must be positive");
    Parser p(source, dim);
    return Expr(p.parse_all(), dim);
}

Expr Expr::from_tree(NodePtr root, std::size_t dim) {
    if (!root) throw InputError("empty expression tree");
    check_scope(*root, dim);
    return Expr(std::move(root), dim);
}

double Expr::eval(std::span<const double> x, double t) const {
    if (x.size() != dim_)
        throw InputError("expression expects " + std::to_string(dim_) + " coordinates, got " +
                         std::to_string(x.size()));
    return eval_node(*root_, x, t);
}

std::string Expr::unparse() const { return expr::unparse(*root_); }

std::string unparse(const Node& n) {
    switch (n.kind) {
        case Node::Kind::Literal: return format_number(n.value);
        case Node::Kind::Variable: return n.variable == kTimeVariable ? "t" : "x" + std::to_string(n.variable + 1);
        case Node::Kind::Negate: return "-" + wrap(*n.args[0], 3);
        case Node::Kind::Binary: {
            const Node& a = *n.args[0];
            const Node& b = *n.args[1];
            switch (n.op) {
                case BinaryOp::Add: return wrap(a, 1) + "+" + wrap(b, 2);
                case BinaryOp::Sub: return wrap(a, 1) + "-" + wrap(b, 2);
                case BinaryOp::Mul: return wrap(a, 2) + "*" + wrap(b, 3);
                case BinaryOp::Div: return wrap(a, 2) + "/" + wrap(b, 3);
                case BinaryOp::Pow: return wrap(a, 5) + "^" + wrap(b, 3);
            }
            break;
        }
        case Node::Kind::Call: {
            std::string s(name(n.function));
            s += "(";
            for (std::size_t i = 0; i < n.args.size(); ++i) s += (i ? "," : "") + unparse(*n.args[i]);
            return s + ")";
        }
    }
    return {};
}

}  // namespace holonorm::expr
