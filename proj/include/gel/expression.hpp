#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gel {

class ExpressionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Small scalar expression language over the variables x, y, t.
///
/// Grammar: sums and products of numbers, variables, `pi`, parenthesised
/// sub-expressions, unary minus, `^` (right associative) and the functions
/// sin, cos, exp, sqrt, tanh. Expressions can be differentiated symbolically,
/// so fields derived from an analytic input (e.g. the background velocity as
/// the time derivative of u0) carry no finite-difference noise.
class Expression {
public:
    enum class Var { x, y, t };

    Expression();  ///< the constant 0
    static Expression parse(std::string_view text);
    static Expression constant(double v);
    static Expression variable(Var v);

    double operator()(double x, double y = 0.0, double t = 0.0) const;
    Expression derivative(Var v) const;
    std::string str() const;

    bool is_constant() const;

    struct Node;

    friend Expression operator+(const Expression& a, const Expression& b);
    friend Expression operator-(const Expression& a, const Expression& b);
    friend Expression operator*(const Expression& a, const Expression& b);
    friend Expression operator/(const Expression& a, const Expression& b);
    friend Expression operator-(const Expression& a);
    friend Expression exp(const Expression& a);

private:
    explicit Expression(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

}  // namespace gel
