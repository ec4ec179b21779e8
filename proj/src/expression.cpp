#include "gel/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace gel {

struct Expression::Node {
    enum class Kind { num, var, add, sub, mul, div, pow, neg, fn } kind;
    double value = 0.0;
    Var var = Var::x;
    std::string fn;  // sin cos exp sqrt tanh
    std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr num(double v) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::num;
    n->value = v;
    return n;
}

bool is_num(const NodePtr& n, double v) { return n->kind == Kind::num && n->value == v; }

NodePtr binary(Kind k, NodePtr a, NodePtr b) {
    // Fold the identities that symbolic differentiation produces constantly;
    // dropping "+ 0" keeps derived fields bit-identical to hand evaluation.
    if (k == Kind::add) {
        if (is_num(a, 0.0)) return b;
        if (is_num(b, 0.0)) return a;
    } else if (k == Kind::sub) {
        if (is_num(b, 0.0)) return a;
    } else if (k == Kind::mul) {
        if (is_num(a, 0.0) || is_num(b, 0.0)) return num(0.0);
        if (is_num(a, 1.0)) return b;
        if (is_num(b, 1.0)) return a;
    } else if (k == Kind::div) {
        if (is_num(a, 0.0)) return num(0.0);
        if (is_num(b, 1.0)) return a;
    }
    if (a->kind == Kind::num && b->kind == Kind::num && k != Kind::pow) {
        switch (k) {
        case Kind::add: return num(a->value + b->value);
        case Kind::sub: return num(a->value - b->value);
        case Kind::mul: return num(a->value * b->value);
        case Kind::div: return num(a->value / b->value);
        default: break;
        }
    }
    auto n = std::make_shared<Expression::Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr neg(NodePtr a) {
    if (a->kind == Kind::num) return num(-a->value);
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::neg;
    n->a = std::move(a);
    return n;
}

NodePtr fn(std::string name, NodePtr a) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::fn;
    n->fn = std::move(name);
    n->a = std::move(a);
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    NodePtr parse() {
        NodePtr e = sum();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return e;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ExpressionError(what + " at column " + std::to_string(pos_ + 1) + " in '" + std::string(s_) + "'");
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr sum() {
        NodePtr a = product();
        for (;;) {
            if (eat('+')) a = binary(Kind::add, a, product());
            else if (eat('-')) a = binary(Kind::sub, a, product());
            else return a;
        }
    }
    NodePtr product() {
        NodePtr a = unary();
        for (;;) {
            if (eat('*')) a = binary(Kind::mul, a, unary());
            else if (eat('/')) a = binary(Kind::div, a, unary());
            else return a;
        }
    }
    NodePtr unary() {
        if (eat('-')) return neg(unary());
        if (eat('+')) return unary();
        return power();
    }
    NodePtr power() {
        NodePtr base = atom();
        if (eat('^')) {
            NodePtr ex = unary();
            auto n = std::make_shared<Expression::Node>();
            n->kind = Kind::pow;
            n->a = base;
            n->b = ex;
            return n;
        }
        return base;
    }
    NodePtr atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = sum();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
            if (ec != std::errc()) fail("malformed number");
            pos_ = static_cast<std::size_t>(ptr - s_.data());
            return num(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            const std::string id(s_.substr(start, pos_ - start));
            if (id == "x" || id == "y" || id == "t") {
                auto n = std::make_shared<Expression::Node>();
                n->kind = Kind::var;
                n->var = id == "x" ? Expression::Var::x : id == "y" ? Expression::Var::y : Expression::Var::t;
                return n;
            }
            if (id == "pi") return num(std::numbers::pi);
            if (id == "sin" || id == "cos" || id == "exp" || id == "sqrt" || id == "tanh") {
                if (!eat('(')) fail("expected '(' after " + id);
                NodePtr arg = sum();
                if (!eat(')')) fail("expected ')'");
                return fn(id, arg);
            }
            pos_ = start;
            fail("unknown identifier '" + id + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

double eval(const Expression::Node& n, double x, double y, double t) {
    switch (n.kind) {
    case Kind::num: return n.value;
    case Kind::var: return n.var == Expression::Var::x ? x : n.var == Expression::Var::y ? y : t;
    case Kind::add: return eval(*n.a, x, y, t) + eval(*n.b, x, y, t);
    case Kind::sub: return eval(*n.a, x, y, t) - eval(*n.b, x, y, t);
    case Kind::mul: return eval(*n.a, x, y, t) * eval(*n.b, x, y, t);
    case Kind::div: return eval(*n.a, x, y, t) / eval(*n.b, x, y, t);
    case Kind::pow: return std::pow(eval(*n.a, x, y, t), eval(*n.b, x, y, t));
    case Kind::neg: return -eval(*n.a, x, y, t);
    case Kind::fn: {
        const double v = eval(*n.a, x, y, t);
        if (n.fn == "sin") return std::sin(v);
        if (n.fn == "cos") return std::cos(v);
        if (n.fn == "exp") return std::exp(v);
        if (n.fn == "sqrt") return std::sqrt(v);
        return std::tanh(v);
    }
    }
    return 0.0;
}

bool depends_on(const NodePtr& n, Expression::Var v) {
    if (!n) return false;
    if (n->kind == Kind::var) return n->var == v;
    return depends_on(n->a, v) || depends_on(n->b, v);
}

NodePtr diff(const NodePtr& n, Expression::Var v) {
    switch (n->kind) {
    case Kind::num: return num(0.0);
    case Kind::var: return num(n->var == v ? 1.0 : 0.0);
    case Kind::add: return binary(Kind::add, diff(n->a, v), diff(n->b, v));
    case Kind::sub: return binary(Kind::sub, diff(n->a, v), diff(n->b, v));
    case Kind::mul:
        return binary(Kind::add, binary(Kind::mul, diff(n->a, v), n->b), binary(Kind::mul, n->a, diff(n->b, v)));
    case Kind::div: {
        NodePtr top = binary(Kind::sub, binary(Kind::mul, diff(n->a, v), n->b), binary(Kind::mul, n->a, diff(n->b, v)));
        return binary(Kind::div, top, binary(Kind::mul, n->b, n->b));
    }
    case Kind::pow: {
        if (depends_on(n->b, v)) throw ExpressionError("derivative of a variable exponent is not supported");
        NodePtr ex = n->b;
        auto p = std::make_shared<Expression::Node>();
        p->kind = Kind::pow;
        p->a = n->a;
        p->b = binary(Kind::sub, ex, num(1.0));
        return binary(Kind::mul, binary(Kind::mul, ex, p), diff(n->a, v));
    }
    case Kind::neg: return neg(diff(n->a, v));
    case Kind::fn: {
        NodePtr da = diff(n->a, v);
        if (is_num(da, 0.0)) return num(0.0);
        NodePtr outer;
        if (n->fn == "sin") outer = fn("cos", n->a);
        else if (n->fn == "cos") outer = neg(fn("sin", n->a));
        else if (n->fn == "exp") outer = n;
        else if (n->fn == "sqrt") outer = binary(Kind::div, num(0.5), n);
        else {
            NodePtr th = fn("tanh", n->a);
            outer = binary(Kind::sub, num(1.0), binary(Kind::mul, th, th));
        }
        return binary(Kind::mul, outer, da);
    }
    }
    return num(0.0);
}

std::string show(const Expression::Node& n) {
    char buf[40];
    switch (n.kind) {
    case Kind::num: std::snprintf(buf, sizeof buf, "%.17g", n.value); return buf;
    case Kind::var: return n.var == Expression::Var::x ? "x" : n.var == Expression::Var::y ? "y" : "t";
    case Kind::add: return "(" + show(*n.a) + " + " + show(*n.b) + ")";
    case Kind::sub: return "(" + show(*n.a) + " - " + show(*n.b) + ")";
    case Kind::mul: return "(" + show(*n.a) + " * " + show(*n.b) + ")";
    case Kind::div: return "(" + show(*n.a) + " / " + show(*n.b) + ")";
    case Kind::pow: return "(" + show(*n.a) + " ^ " + show(*n.b) + ")";
    case Kind::neg: return "(-" + show(*n.a) + ")";
    case Kind::fn: return n.fn + "(" + show(*n.a) + ")";
    }
    return "";
}

}  // namespace

Expression::Expression() : node_(num(0.0)) {}

Expression Expression::parse(std::string_view text) { return Expression(Parser(text).parse()); }

Expression Expression::constant(double v) { return Expression(num(v)); }

double Expression::operator()(double x, double y, double t) const { return eval(*node_, x, y, t); }

Expression Expression::derivative(Var v) const { return Expression(diff(node_, v)); }

std::string Expression::str() const { return show(*node_); }

bool Expression::is_constant() const { return node_->kind == Kind::num; }

Expression Expression::variable(Var v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::var;
    n->var = v;
    return Expression(n);
}

Expression operator+(const Expression& a, const Expression& b) { return Expression(binary(Kind::add, a.node_, b.node_)); }
Expression operator-(const Expression& a, const Expression& b) { return Expression(binary(Kind::sub, a.node_, b.node_)); }
Expression operator*(const Expression& a, const Expression& b) { return Expression(binary(Kind::mul, a.node_, b.node_)); }
Expression operator/(const Expression& a, const Expression& b) { return Expression(binary(Kind::div, a.node_, b.node_)); }
Expression operator-(const Expression& a) { return Expression(neg(a.node_)); }
Expression exp(const Expression& a) { return Expression(fn("exp", a.node_)); }

}  // namespace gel
