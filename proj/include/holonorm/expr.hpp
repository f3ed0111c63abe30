#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "holonorm/error.hpp"

namespace holonorm::expr {

enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Function { Sin, Cos, Exp, Log, Abs, Sqrt, Pow, Min, Max };

/// Variable slot used for `t`; spatial variables x1..xN use 0..N-1.
inline constexpr int kTimeVariable = -1;

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    enum class Kind { Literal, Variable, Negate, Binary, Call };

    Kind kind = Kind::Literal;
    double value = 0.0;
    int variable = 0;
    BinaryOp op = BinaryOp::Add;
    Function function = Function::Sin;
    std::vector<NodePtr> args;
};

NodePtr literal(double value);
NodePtr variable(int slot);
NodePtr negate(NodePtr operand);
NodePtr binary(BinaryOp op, NodePtr lhs, NodePtr rhs);
NodePtr call(Function f, std::vector<NodePtr> args);

int arity(Function f);
std::string_view name(Function f);

class ParseError : public InputError {
public:
    ParseError(const std::string& message, std::size_t offset)
        : InputError(message + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// log/sqrt of a negative, fractional power of a negative base, or any
/// non-finite intermediate. The message names the failing sub-expression.
class EvalError : public InputError {
public:
    using InputError::InputError;
};

/**
 * Immutable arithmetic expression over x1..xN and t.
 *
 * Grammar, loosest to tightest: `+ -` (left), `* /` (left), unary `-`,
 * `^` (right). Functions: sin cos exp log abs sqrt (one argument) and
 * pow min max (two). `pi` is a literal.
 */
class Expr {
public:
    static Expr parse(std::string_view source, std::size_t dim);
    /// Wraps a tree; throws InputError if it references x_i with i > dim.
    static Expr from_tree(NodePtr root, std::size_t dim);

    double eval(std::span<const double> x, double t) const;
    double operator()(std::span<const double> x, double t) const { return eval(x, t); }

    /// Text that parses back to a tree evaluating bit-identically.
    std::string unparse() const;

    std::size_t dim() const { return dim_; }
    const Node& root() const { return *root_; }

private:
    Expr(NodePtr root, std::size_t dim) : root_(std::move(root)), dim_(dim) {}

    NodePtr root_;
    std::size_t dim_ = 1;
};

std::string unparse(const Node& node);

}  // namespace holonorm::expr
