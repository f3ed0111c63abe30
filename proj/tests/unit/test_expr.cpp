#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "holonorm/expr.hpp"

using namespace holonorm::expr;

namespace {

double eval1(const std::string& src, double x1 = 0.0, double t = 0.0) {
    const double x[] = {x1};
    return Expr::parse(src, 1)(x, t);
}

bool same_tree(const Node& a, const Node& b) {
    if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
    switch (a.kind) {
        case Node::Kind::Literal:
            if (a.value != b.value) return false;
            break;
        case Node::Kind::Variable:
            if (a.variable != b.variable) return false;
            break;
        case Node::Kind::Binary:
            if (a.op != b.op) return false;
            break;
        case Node::Kind::Call:
            if (a.function != b.function) return false;
            break;
        case Node::Kind::Negate: break;
    }
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!same_tree(*a.args[i], *b.args[i])) return false;
    return true;
}

class TreeGen {
public:
    explicit TreeGen(std::uint64_t seed) : rng_(seed) {}

    NodePtr make(int depth) {
        const int choice = depth <= 0 ? pick(0, 1) : pick(0, 5);
        switch (choice) {
            case 0: {
                const double v = std::uniform_real_distribution<double>(-4.0, 4.0)(rng_);
                return literal(pick(0, 2) == 0 ? std::round(v) : v);
            }
            case 1: return variable(pick(0, 2) == 2 ? kTimeVariable : pick(0, 1));
            case 2: return negate(make(depth - 1));
            case 3:
            case 4: {
                const auto op = static_cast<BinaryOp>(pick(0, 4));
                return binary(op, make(depth - 1), make(depth - 1));
            }
            default: {
                const auto f = static_cast<Function>(pick(0, 8));
                std::vector<NodePtr> args;
                for (int i = 0; i < arity(f); ++i) args.push_back(make(depth - 1));
                return call(f, std::move(args));
            }
        }
    }

    double coord() { return std::uniform_real_distribution<double>(-2.0, 2.0)(rng_); }

private:
    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    std::mt19937_64 rng_;
};

std::optional<double> try_eval(const Expr& e, std::span<const double> x, double t) {
    try {
        return e(x, t);
    } catch (const EvalError&) {
        return std::nullopt;
    }
}

}  // namespace

TEST_CASE("parse shapes") {
    const Expr v = Expr::parse("x1", 1);
    CHECK(v.root().kind == Node::Kind::Variable);
    CHECK(v.root().variable == 0);

    const Expr p = Expr::parse("sin(3*x1)*exp(-t)", 1);
    REQUIRE(p.root().kind == Node::Kind::Binary);
    CHECK(p.root().op == BinaryOp::Mul);
    CHECK(p.root().args[0]->kind == Node::Kind::Call);
    CHECK(p.root().args[1]->kind == Node::Kind::Call);
    CHECK(Expr::parse("t", 3).root().variable == kTimeVariable);
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(Expr::parse("x3", 2), ParseError);
    CHECK_THROWS_AS(Expr::parse("foo(1)", 1), ParseError);
    CHECK_THROWS_AS(Expr::parse("sin(1, 2)", 1), ParseError);
    CHECK_THROWS_AS(Expr::parse("max(1)", 1), ParseError);
    CHECK_THROWS_AS(Expr::parse("", 1), ParseError);
    CHECK_THROWS_AS(Expr::parse("1 +", 1), ParseError);
    CHECK_THROWS_AS(Expr::parse("(1", 1), ParseError);
    CHECK_THROWS_AS(Expr::parse("1 2", 1), ParseError);
    try {
        Expr::parse("1 + * 2", 1);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 4);
        CHECK(std::string(e.what()).find("byte 4") != std::string::npos);
    }
}

TEST_CASE("evaluation") {
    CHECK(eval1("2+3*4") == 14.0);
    CHECK(eval1("abs(-1)^0.5") == 1.0);
    CHECK(std::abs(eval1("sin(x1)", std::numbers::pi / 2) - 1.0) <= 1e-15);
    CHECK(eval1("2^3^2") == 512.0);
    CHECK(eval1("-2^2") == -4.0);
    CHECK(eval1("8/4/2") == 1.0);
    CHECK(eval1("10-4-3") == 3.0);
    CHECK(eval1("pow(2, 10) + min(1, -1) + max(3, 4)") == 1027.0);
    CHECK(eval1("  x1 *\tt ", 3.0, 2.0) == 6.0);
    CHECK(eval1("1e-3 * 2.5E2") == 0.25);
    CHECK(eval1("pi") == std::numbers::pi);
    CHECK(eval1("(-8)^(1/3*3)") == -8.0);
}

TEST_CASE("domain errors name the sub-expression") {
    CHECK_THROWS_AS(eval1("log(x1)", -1.0), EvalError);
    CHECK_THROWS_AS(eval1("sqrt(x1 - 2)", 1.0), EvalError);
    CHECK_THROWS_AS(eval1("(-2)^0.5"), EvalError);
    CHECK_THROWS_AS(eval1("1/x1", 0.0), EvalError);
    CHECK_THROWS_AS(eval1("exp(1000)"), EvalError);
    try {
        eval1("1 + sqrt(x1 - 2)", 1.0);
        FAIL("expected a domain error");
    } catch (const EvalError& e) {
        CHECK(std::string(e.what()).find("sqrt(x1-2)") != std::string::npos);
    }
}

TEST_CASE("unparse") {
    CHECK(Expr::parse("x1", 1).unparse() == "x1");
    const Expr e = Expr::parse("1+2*3", 1);
    CHECK(same_tree(Expr::parse(e.unparse(), 1).root(), e.root()));
    const Expr n = Expr::parse("-(x1^2)", 1);
    CHECK(same_tree(Expr::parse(n.unparse(), 1).root(), n.root()));
    const Expr m = Expr::parse("(-x1)^2", 1);
    CHECK(same_tree(Expr::parse(m.unparse(), 1).root(), m.root()));
    CHECK(eval1(m.unparse(), 3.0) == 9.0);
    const Expr s = Expr::parse("1-(2-3)", 1);
    CHECK(eval1(s.unparse()) == 2.0);
    const Expr p = Expr::parse("(2^3)^2", 1);
    CHECK(eval1(p.unparse()) == 64.0);
}

TEST_CASE("round trip over random trees") {
    TreeGen gen(20240917);
    int evaluated = 0;
    for (int tree = 0; tree < 300; ++tree) {
        const Expr e = Expr::from_tree(gen.make(8), 2);
        const std::string text = e.unparse();
        const Expr back = Expr::parse(text, 2);
        CHECK_MESSAGE(Expr::parse(back.unparse(), 2).unparse() == back.unparse(), text);
        for (int point = 0; point < 100; ++point) {
            const double x[] = {gen.coord(), gen.coord()};
            const double t = gen.coord();
            const auto a = try_eval(e, x, t);
            const auto b = try_eval(back, x, t);
            REQUIRE_MESSAGE(a.has_value() == b.has_value(), text);
            if (a) {
                ++evaluated;
                REQUIRE_MESSAGE(std::memcmp(&*a, &*b, sizeof(double)) == 0, text);
            }
        }
    }
    CHECK(evaluated > 1000);
}

TEST_CASE("from_tree checks variable scope") {
    CHECK_THROWS(Expr::from_tree(variable(2), 2));
    CHECK_NOTHROW(Expr::from_tree(variable(1), 2));
}
