#include "stieltjes/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace stieltjes {

struct Expression::Node {
    Kind kind;
    double value = 0.0; // constant value, or the exponent for pow
    NodePtr lhs;
    NodePtr rhs;
};

struct ExprDetail {
    static Expression::NodePtr node(const Expression& e) { return e.node_; }
    static Expression wrap(Expression::NodePtr n) { return Expression(std::move(n)); }
};

namespace {

using Kind = Expression::Kind;
using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make_node(Kind kind, double value, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = kind;
    n->value = value;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

bool is_const(const NodePtr& n, double* v = nullptr) {
    if (n->kind != Kind::constant) return false;
    if (v) *v = n->value;
    return true;
}

double require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw eval_error(std::string(what) + " produced a non-finite value");
    return x;
}

double eval_node(const Expression::Node& n, double t) {
    switch (n.kind) {
        case Kind::constant: return n.value;
        case Kind::variable: return t;
        case Kind::add: return require_finite(eval_node(*n.lhs, t) + eval_node(*n.rhs, t), "addition");
        case Kind::sub: return require_finite(eval_node(*n.lhs, t) - eval_node(*n.rhs, t), "subtraction");
        case Kind::mul: return require_finite(eval_node(*n.lhs, t) * eval_node(*n.rhs, t), "multiplication");
        case Kind::div: {
            const double denom = eval_node(*n.rhs, t);
            if (denom == 0.0) throw eval_error("division by zero");
            return require_finite(eval_node(*n.lhs, t) / denom, "division");
        }
        case Kind::pow: {
            const double base = eval_node(*n.lhs, t);
            const double c = n.value;
            if (base < 0.0 && c != std::floor(c))
                throw eval_error("negative base with non-integer exponent");
            if (base == 0.0 && c < 0.0) throw eval_error("zero base with negative exponent");
            return require_finite(std::pow(base, c), "power");
        }
        case Kind::neg: return -eval_node(*n.lhs, t);
        case Kind::sin: return std::sin(eval_node(*n.lhs, t));
        case Kind::cos: return std::cos(eval_node(*n.lhs, t));
        case Kind::exp: return require_finite(std::exp(eval_node(*n.lhs, t)), "exp");
        case Kind::ln: {
            const double x = eval_node(*n.lhs, t);
            if (x <= 0.0) throw eval_error("ln of a non-positive value");
            return require_finite(std::log(x), "ln");
        }
        case Kind::sqrt: {
            const double x = eval_node(*n.lhs, t);
            if (x < 0.0) throw eval_error("sqrt of a negative value");
            return std::sqrt(x);
        }
        case Kind::abs: return std::fabs(eval_node(*n.lhs, t));
    }
    throw eval_error("corrupt expression node");
}

bool contains_variable(const Expression::Node& n) {
    if (n.kind == Kind::variable) return true;
    if (n.lhs && contains_variable(*n.lhs)) return true;
    if (n.rhs && contains_variable(*n.rhs)) return true;
    return false;
}

// Fold a function-of-constant node only when it evaluates cleanly;
// otherwise keep the node so the error surfaces at evaluation time.
NodePtr fold_unary(Kind kind, const NodePtr& arg) {
    double v;
    if (is_const(arg, &v)) {
        auto probe = make_node(kind, 0.0, arg);
        try {
            return make_node(Kind::constant, eval_node(*probe, 0.0));
        } catch (const eval_error&) {
            return probe;
        }
    }
    return make_node(kind, 0.0, arg);
}

} // namespace

Expression Expression::constant(double value) {
    return ExprDetail::wrap(make_node(Kind::constant, value));
}

Expression Expression::variable() {
    return ExprDetail::wrap(make_node(Kind::variable, 0.0));
}

Expression Expression::add(Expression a, Expression b) {
    double x, y;
    const bool ca = is_const(a.node_, &x), cb = is_const(b.node_, &y);
    if (ca && cb) return constant(x + y);
    if (ca && x == 0.0) return b;
    if (cb && y == 0.0) return a;
    return ExprDetail::wrap(make_node(Kind::add, 0.0, a.node_, b.node_));
}

Expression Expression::sub(Expression a, Expression b) {
    double x, y;
    const bool ca = is_const(a.node_, &x), cb = is_const(b.node_, &y);
    if (ca && cb) return constant(x - y);
    if (cb && y == 0.0) return a;
    if (ca && x == 0.0) return neg(b);
    return ExprDetail::wrap(make_node(Kind::sub, 0.0, a.node_, b.node_));
}

Expression Expression::mul(Expression a, Expression b) {
    double x, y;
    const bool ca = is_const(a.node_, &x), cb = is_const(b.node_, &y);
    if (ca && cb) return constant(x * y);
    if ((ca && x == 0.0) || (cb && y == 0.0)) return constant(0.0);
    if (ca && x == 1.0) return b;
    if (cb && y == 1.0) return a;
    return ExprDetail::wrap(make_node(Kind::mul, 0.0, a.node_, b.node_));
}

Expression Expression::div(Expression a, Expression b) {
    double x, y;
    const bool ca = is_const(a.node_, &x), cb = is_const(b.node_, &y);
    if (cb && y != 0.0) {
        if (ca) return constant(x / y);
        if (y == 1.0) return a;
    }
    return ExprDetail::wrap(make_node(Kind::div, 0.0, a.node_, b.node_));
}

Expression Expression::pow(Expression base, double exponent) {
    double x;
    if (exponent == 0.0) return constant(1.0);
    if (exponent == 1.0) return base;
    if (is_const(base.node_, &x)) {
        auto probe = make_node(Kind::pow, exponent, base.node_);
        try {
            return constant(eval_node(*probe, 0.0));
        } catch (const eval_error&) {
            return ExprDetail::wrap(probe);
        }
    }
    return ExprDetail::wrap(make_node(Kind::pow, exponent, base.node_));
}

Expression Expression::neg(Expression a) {
    double x;
    if (is_const(a.node_, &x)) return constant(-x);
    return ExprDetail::wrap(make_node(Kind::neg, 0.0, a.node_));
}

Expression Expression::sin(Expression a) { return ExprDetail::wrap(fold_unary(Kind::sin, a.node_)); }
Expression Expression::cos(Expression a) { return ExprDetail::wrap(fold_unary(Kind::cos, a.node_)); }
Expression Expression::exp(Expression a) { return ExprDetail::wrap(fold_unary(Kind::exp, a.node_)); }
Expression Expression::ln(Expression a) { return ExprDetail::wrap(fold_unary(Kind::ln, a.node_)); }
Expression Expression::sqrt(Expression a) { return ExprDetail::wrap(fold_unary(Kind::sqrt, a.node_)); }
Expression Expression::abs(Expression a) { return ExprDetail::wrap(fold_unary(Kind::abs, a.node_)); }

double Expression::operator()(double t) const { return eval_node(*node_, t); }

Expression::Kind Expression::kind() const { return node_->kind; }

bool Expression::is_constant(double* value) const { return is_const(node_, value); }

bool Expression::structurally_equal(const Expression& other) const {
    struct Cmp {
        static bool eq(const Node& a, const Node& b) {
            if (a.kind != b.kind) return false;
            if ((a.kind == Kind::constant || a.kind == Kind::pow) && a.value != b.value) return false;
            if (!!a.lhs != !!b.lhs || !!a.rhs != !!b.rhs) return false;
            if (a.lhs && !eq(*a.lhs, *b.lhs)) return false;
            if (a.rhs && !eq(*a.rhs, *b.rhs)) return false;
            return true;
        }
    };
    return Cmp::eq(*node_, *other.node_);
}

// ---------------------------------------------------------------------------
// Parser: recursive descent with 0-based byte offsets in errors.
//
//   expr   := term (('+'|'-') term)*          left associative
//   term   := unary (('*'|'/') unary)*        left associative
//   unary  := '-' unary | power
//   power  := primary ('^' unary)?            exponent must fold to a constant
//   primary:= number | 't' | name '(' expr ')' | '(' expr ')'
// ---------------------------------------------------------------------------

namespace {

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Expression run() {
        if (src_.find_first_not_of(" \t\r\n") == std::string_view::npos)
            throw parse_error("empty expression", 0);
        Expression e = parse_expr();
        skip_ws();
        if (pos_ != src_.size())
            fail("unexpected trailing input", pos_);
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what, std::size_t at) {
        throw parse_error("syntax error at byte " + std::to_string(at) + ": " + what, at);
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    Expression parse_expr() {
        Expression lhs = parse_term();
        for (;;) {
            if (eat('+')) lhs = Expression::add(lhs, parse_term());
            else if (eat('-')) lhs = Expression::sub(lhs, parse_term());
            else return lhs;
        }
    }

    Expression parse_term() {
        Expression lhs = parse_unary();
        for (;;) {
            if (eat('*')) lhs = Expression::mul(lhs, parse_unary());
            else if (eat('/')) lhs = Expression::div(lhs, parse_unary());
            else return lhs;
        }
    }

    Expression parse_unary() {
        if (eat('-')) return Expression::neg(parse_unary());
        return parse_power();
    }

    Expression parse_power() {
        Expression base = parse_primary();
        skip_ws();
        if (eat('^')) {
            const std::size_t at = pos_;
            Expression e = parse_unary();
            double c;
            if (!e.is_constant(&c))
                fail("exponent must be a constant", at);
            return Expression::pow(base, c);
        }
        return base;
    }

    Expression parse_primary() {
        skip_ws();
        if (pos_ >= src_.size()) fail("unexpected end of input", pos_);
        const char c = src_[pos_];

        if (c == '(') {
            ++pos_;
            Expression e = parse_expr();
            if (!eat(')')) fail("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_name();
        fail(std::string("unexpected character '") + c + "'", pos_);
    }

    Expression parse_number() {
        const std::size_t start = pos_;
        bool saw_digit = false;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            ++pos_;
            saw_digit = true;
        }
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                ++pos_;
                saw_digit = true;
            }
        }
        if (!saw_digit) fail("malformed number", start);
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
            if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
                ++p;
                while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) ++p;
                pos_ = p;
            }
        }
        const std::string text(src_.substr(start, pos_ - start));
        errno = 0;
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v))
            fail("malformed number", start);
        return Expression::constant(v);
    }

    Expression parse_name() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);

        if (name == "t") return Expression::variable();

        Expression (*fn)(Expression) = nullptr;
        if (name == "sin") fn = &Expression::sin;
        else if (name == "cos") fn = &Expression::cos;
        else if (name == "exp") fn = &Expression::exp;
        else if (name == "ln") fn = &Expression::ln;
        else if (name == "sqrt") fn = &Expression::sqrt;
        else if (name == "abs") fn = &Expression::abs;
        else
            throw parse_error("unknown identifier '" + std::string(name) + "' at byte " +
                                  std::to_string(start),
                              start);

        if (!eat('(')) fail("expected '(' after function name", pos_);
        Expression arg = parse_expr();
        if (!eat(')')) fail("expected ')'", pos_);
        return fn(arg);
    }
};

} // namespace

Expression Expression::parse(std::string_view source) { return Parser(source).run(); }

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Precedence levels for parenthesization: higher binds tighter.
int precedence(Kind k) {
    switch (k) {
        case Kind::add:
        case Kind::sub: return 1;
        case Kind::mul:
        case Kind::div: return 2;
        case Kind::neg: return 3;
        case Kind::pow: return 4;
        default: return 5; // atoms and function calls
    }
}

void print_node(const Expression::Node& n, std::string& out);

void print_child(const Expression::Node& child, int parent_prec, bool is_right, std::string& out) {
    const int child_prec = precedence(child.kind);
    bool parens = child_prec < parent_prec;
    // Left-associative operators: a right child at the same level needs parens
    // (a - (b + c), a / (b * c)).
    if (!parens && is_right && child_prec == parent_prec && parent_prec <= 2) parens = true;
    // A negative constant or unary minus as a right operand reads as "a * -b";
    // that re-parses fine, but parenthesize for legibility.
    if (!parens && is_right &&
        (child.kind == Kind::neg || (child.kind == Kind::constant && child.value < 0.0)))
        parens = true;
    if (parens) out += '(';
    print_node(child, out);
    if (parens) out += ')';
}

void print_node(const Expression::Node& n, std::string& out) {
    switch (n.kind) {
        case Kind::constant: out += format_number(n.value); return;
        case Kind::variable: out += 't'; return;
        case Kind::add:
            print_child(*n.lhs, 1, false, out);
            out += " + ";
            print_child(*n.rhs, 1, true, out);
            return;
        case Kind::sub:
            print_child(*n.lhs, 1, false, out);
            out += " - ";
            print_child(*n.rhs, 1, true, out);
            return;
        case Kind::mul:
            print_child(*n.lhs, 2, false, out);
            out += '*';
            print_child(*n.rhs, 2, true, out);
            return;
        case Kind::div:
            print_child(*n.lhs, 2, false, out);
            out += '/';
            print_child(*n.rhs, 2, true, out);
            return;
        case Kind::neg:
            out += '-';
            print_child(*n.lhs, 3, true, out);
            return;
        case Kind::pow: {
            // power binds tighter than unary minus, so a negative-constant
            // base needs parens or it re-parses as -(c^e)
            const bool neg_base = n.lhs->kind == Kind::constant && n.lhs->value < 0.0;
            if (neg_base) out += '(';
            print_child(*n.lhs, 5, false, out); // base must be an atom or get parens
            if (neg_base) out += ')';
            out += '^';
            const std::string e = format_number(n.value);
            const bool parens = e.find_first_of("+") != std::string::npos && e[0] != '-';
            if (parens) out += '(';
            out += e;
            if (parens) out += ')';
            return;
        }
        case Kind::sin: out += "sin("; break;
        case Kind::cos: out += "cos("; break;
        case Kind::exp: out += "exp("; break;
        case Kind::ln: out += "ln("; break;
        case Kind::sqrt: out += "sqrt("; break;
        case Kind::abs: out += "abs("; break;
    }
    print_node(*n.lhs, out);
    out += ')';
}

} // namespace

std::string Expression::to_string() const {
    std::string out;
    print_node(*node_, out);
    return out;
}

// ---------------------------------------------------------------------------
// Differentiation
// ---------------------------------------------------------------------------

namespace {

Expression wrap(NodePtr n) { return ExprDetail::wrap(std::move(n)); }

Expression diff_node(const NodePtr& n, std::vector<Expression>& kinks) {
    using E = Expression;
    const Expression lhs = n->lhs ? wrap(n->lhs) : E::constant(0.0);
    const Expression rhs = n->rhs ? wrap(n->rhs) : E::constant(0.0);
    switch (n->kind) {
        case Kind::constant: return E::constant(0.0);
        case Kind::variable: return E::constant(1.0);
        case Kind::add: return E::add(diff_node(n->lhs, kinks), diff_node(n->rhs, kinks));
        case Kind::sub: return E::sub(diff_node(n->lhs, kinks), diff_node(n->rhs, kinks));
        case Kind::mul:
            return E::add(E::mul(diff_node(n->lhs, kinks), rhs),
                          E::mul(lhs, diff_node(n->rhs, kinks)));
        case Kind::div:
            return E::div(E::sub(E::mul(diff_node(n->lhs, kinks), rhs),
                                 E::mul(lhs, diff_node(n->rhs, kinks))),
                          E::mul(rhs, rhs));
        case Kind::pow:
            return E::mul(E::mul(E::constant(n->value), E::pow(lhs, n->value - 1.0)),
                          diff_node(n->lhs, kinks));
        case Kind::neg: return E::neg(diff_node(n->lhs, kinks));
        case Kind::sin: return E::mul(E::cos(lhs), diff_node(n->lhs, kinks));
        case Kind::cos: return E::neg(E::mul(E::sin(lhs), diff_node(n->lhs, kinks)));
        case Kind::exp: return E::mul(E::exp(lhs), diff_node(n->lhs, kinks));
        case Kind::ln: return E::div(diff_node(n->lhs, kinks), lhs);
        case Kind::sqrt:
            return E::div(diff_node(n->lhs, kinks),
                          E::mul(E::constant(2.0), E::sqrt(lhs)));
        case Kind::abs:
            // sign(u) u', written as (u/|u|) u'; undefined at u = 0.
            kinks.push_back(lhs);
            return E::mul(E::div(lhs, E::abs(lhs)), diff_node(n->lhs, kinks));
    }
    throw eval_error("corrupt expression node");
}

void collect_nonsmooth(const NodePtr& n, std::vector<Expression>& out) {
    if (n->kind == Kind::abs || n->kind == Kind::sqrt) out.push_back(wrap(n->lhs));
    if (n->lhs) collect_nonsmooth(n->lhs, out);
    if (n->rhs) collect_nonsmooth(n->rhs, out);
}

} // namespace

Derivative differentiate(const Expression& e) {
    std::vector<Expression> kinks;
    Expression d = diff_node(ExprDetail::node(e), kinks);
    return Derivative{std::move(d), std::move(kinks)};
}

std::vector<Expression> nonsmooth_arguments(const Expression& e) {
    std::vector<Expression> out;
    collect_nonsmooth(ExprDetail::node(e), out);
    return out;
}

} // namespace stieltjes
