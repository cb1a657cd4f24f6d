#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "stieltjes/errors.hpp"

namespace stieltjes {

/// Immutable AST of a univariate real function of t.
///
/// Supported nodes: constants, the variable t, + - * /, powers with a
/// constant exponent, unary minus, and sin, cos, exp, ln, sqrt, abs.
/// Expressions are values backed by shared immutable nodes; copying is
/// cheap and evaluation is safe from multiple threads.
class Expression {
public:
    enum class Kind {
        constant,
        variable,
        add,
        sub,
        mul,
        div,
        pow, // base^c, c a fixed constant
        neg,
        sin,
        cos,
        exp,
        ln,
        sqrt,
        abs,
    };

    /// Parse an expression from text. Throws parse_error with the byte
    /// offset of the failure.
    static Expression parse(std::string_view source);

    static Expression constant(double value);
    static Expression variable();

    /// Smart constructors; all fold constants and drop *1 / *0 / +0 terms.
    static Expression add(Expression a, Expression b);
    static Expression sub(Expression a, Expression b);
    static Expression mul(Expression a, Expression b);
    static Expression div(Expression a, Expression b);
    static Expression pow(Expression base, double exponent);
    static Expression neg(Expression a);
    static Expression sin(Expression a);
    static Expression cos(Expression a);
    static Expression exp(Expression a);
    static Expression ln(Expression a);
    static Expression sqrt(Expression a);
    static Expression abs(Expression a);

    /// Evaluate at t. Throws eval_error on domain violations or
    /// non-finite intermediates; never returns NaN or infinity.
    double operator()(double t) const;

    /// Grammar-compatible text form; parse(to_string()) reproduces the
    /// same tree.
    std::string to_string() const;

    bool structurally_equal(const Expression& other) const;

    /// True when the expression contains no variable node; if so and
    /// `value` is non-null, stores the (fold-time) constant value.
    bool is_constant(double* value = nullptr) const;

    Kind kind() const;

    struct Node; // defined in expr.cpp
    using NodePtr = std::shared_ptr<const Node>;

private:
    explicit Expression(NodePtr node) : node_(std::move(node)) {}

    NodePtr node_;

    friend struct ExprDetail;
};

/// Symbolic derivative plus the abs-argument subexpressions at whose
/// zeros the derivative does not exist. abs is differentiated as
/// d|u|/dt = (u/|u|) u', which evaluates to sign(u) u' away from u = 0
/// and raises a domain error exactly at u = 0.
struct Derivative {
    Expression expr;
    std::vector<Expression> nondifferentiable_args;
};

Derivative differentiate(const Expression& e);

/// Arguments of abs and sqrt nodes anywhere in the tree: the places the
/// expression itself can lose smoothness (at the arguments' zeros).
std::vector<Expression> nonsmooth_arguments(const Expression& e);

} // namespace stieltjes
