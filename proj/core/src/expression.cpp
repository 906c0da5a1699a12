#include "nullctl/expression.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <utility>

#include "nullctl/error.hpp"

namespace nullctl {

using NodePtr = std::shared_ptr<const Expression::Node>;

struct Expression::Node {
    Kind kind = Kind::Constant;
    double value = 0.0;
    std::size_t var = 0;
    Function fn = Function::Sin;
    int exponent = 0;
    NodePtr a;
    NodePtr b;
};

namespace {

using Kind = Expression::Kind;
using Function = Expression::Function;

struct FunctionName {
    std::string_view name;
    Function fn;
};

constexpr std::array<FunctionName, 7> kFunctions{{
    {"sin", Function::Sin},
    {"cos", Function::Cos},
    {"exp", Function::Exp},
    {"ln", Function::Ln},
    {"sqrt", Function::Sqrt},
    {"abs", Function::Abs},
    {"tanh", Function::Tanh},
}};

std::string_view function_name(Function fn) {
    for (const auto& f : kFunctions)
        if (f.fn == fn)
            return f.name;
    return "?";
}

// ---- raw node constructors (used by the parser, no rewriting) ----

NodePtr make_constant(double v) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::Constant;
    n->value = v;
    return n;
}

NodePtr make_variable(std::size_t i) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::Variable;
    n->var = i;
    return n;
}

NodePtr make_binary(Kind k, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr make_neg(NodePtr a) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::Neg;
    n->a = std::move(a);
    return n;
}

NodePtr make_pow(NodePtr a, int e) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::Pow;
    n->a = std::move(a);
    n->exponent = e;
    return n;
}

NodePtr make_call(Function fn, NodePtr a) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::Call;
    n->fn = fn;
    n->a = std::move(a);
    return n;
}

// ---- evaluation ----

double checked(double v) {
    if (!std::isfinite(v))
        throw DomainError("expression evaluation produced a non-finite value");
    return v;
}

double apply(Function fn, double x) {
    switch (fn) {
    case Function::Sin:
        return std::sin(x);
    case Function::Cos:
        return std::cos(x);
    case Function::Exp:
        return checked(std::exp(x));
    case Function::Ln:
        if (!(x > 0.0))
            throw DomainError("ln of a non-positive argument");
        return std::log(x);
    case Function::Sqrt:
        if (x < 0.0)
            throw DomainError("sqrt of a negative argument");
        return std::sqrt(x);
    case Function::Abs:
        return std::abs(x);
    case Function::Tanh:
        return std::tanh(x);
    }
    return 0.0;
}

double ipow(double base, int e) {
    if (base == 0.0 && e < 0)
        throw DomainError("division by zero (zero base with negative exponent)");
    return checked(std::pow(base, static_cast<double>(e)));
}

double evaluate(const Expression::Node& n, std::span<const double> x) {
    switch (n.kind) {
    case Kind::Constant:
        return n.value;
    case Kind::Variable:
        return x[n.var];
    case Kind::Add:
        return checked(evaluate(*n.a, x) + evaluate(*n.b, x));
    case Kind::Sub:
        return checked(evaluate(*n.a, x) - evaluate(*n.b, x));
    case Kind::Mul:
        return checked(evaluate(*n.a, x) * evaluate(*n.b, x));
    case Kind::Div: {
        const double num = evaluate(*n.a, x);
        const double den = evaluate(*n.b, x);
        if (den == 0.0)
            throw DomainError("division by zero");
        return checked(num / den);
    }
    case Kind::Neg:
        return -evaluate(*n.a, x);
    case Kind::Pow:
        return ipow(evaluate(*n.a, x), n.exponent);
    case Kind::Call:
        return apply(n.fn, evaluate(*n.a, x));
    }
    return 0.0;
}

bool node_depends_on(const Expression::Node& n, std::size_t var) {
    switch (n.kind) {
    case Kind::Constant:
        return false;
    case Kind::Variable:
        return n.var == var;
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div:
        return node_depends_on(*n.a, var) || node_depends_on(*n.b, var);
    case Kind::Neg:
    case Kind::Pow:
    case Kind::Call:
        return node_depends_on(*n.a, var);
    }
    return false;
}

bool node_is_constant(const Expression::Node& n) {
    switch (n.kind) {
    case Kind::Constant:
        return true;
    case Kind::Variable:
        return false;
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div:
        return node_is_constant(*n.a) && node_is_constant(*n.b);
    default:
        return node_is_constant(*n.a);
    }
}

// ---- folding constructors used when building derivatives ----

bool is_value(const NodePtr& n, double v) { return n->kind == Kind::Constant && n->value == v; }

std::optional<double> try_fold(const NodePtr& n) {
    try {
        return evaluate(*n, {});
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

NodePtr fold_or(NodePtr n) {
    if (n->a && n->a->kind == Kind::Constant && (!n->b || n->b->kind == Kind::Constant))
        if (auto v = try_fold(n))
            return make_constant(*v);
    return n;
}

NodePtr s_add(NodePtr a, NodePtr b) {
    if (is_value(a, 0.0))
        return b;
    if (is_value(b, 0.0))
        return a;
    return fold_or(make_binary(Kind::Add, std::move(a), std::move(b)));
}

NodePtr s_neg(NodePtr a) {
    if (a->kind == Kind::Constant)
        return make_constant(-a->value);
    if (a->kind == Kind::Neg)
        return a->a;
    return make_neg(std::move(a));
}

NodePtr s_sub(NodePtr a, NodePtr b) {
    if (is_value(b, 0.0))
        return a;
    if (is_value(a, 0.0))
        return s_neg(std::move(b));
    return fold_or(make_binary(Kind::Sub, std::move(a), std::move(b)));
}

NodePtr s_mul(NodePtr a, NodePtr b) {
    if (is_value(a, 0.0) || is_value(b, 0.0))
        return make_constant(0.0);
    if (is_value(a, 1.0))
        return b;
    if (is_value(b, 1.0))
        return a;
    if (is_value(a, -1.0))
        return s_neg(std::move(b));
    if (is_value(b, -1.0))
        return s_neg(std::move(a));
    return fold_or(make_binary(Kind::Mul, std::move(a), std::move(b)));
}

NodePtr s_div(NodePtr a, NodePtr b) {
    if (is_value(a, 0.0))
        return make_constant(0.0);
    if (is_value(b, 1.0))
        return a;
    return fold_or(make_binary(Kind::Div, std::move(a), std::move(b)));
}

NodePtr s_pow(NodePtr a, int e) {
    if (e == 0)
        return make_constant(1.0);
    if (e == 1)
        return a;
    return fold_or(make_pow(std::move(a), e));
}

NodePtr s_call(Function fn, NodePtr a) { return fold_or(make_call(fn, std::move(a))); }

NodePtr differentiate(const NodePtr& n, std::size_t var) {
    if (!node_depends_on(*n, var))
        return make_constant(0.0);
    switch (n->kind) {
    case Kind::Constant:
        return make_constant(0.0);
    case Kind::Variable:
        return make_constant(1.0);
    case Kind::Add:
        return s_add(differentiate(n->a, var), differentiate(n->b, var));
    case Kind::Sub:
        return s_sub(differentiate(n->a, var), differentiate(n->b, var));
    case Kind::Mul:
        return s_add(s_mul(differentiate(n->a, var), n->b), s_mul(n->a, differentiate(n->b, var)));
    case Kind::Div: {
        auto num = s_sub(s_mul(differentiate(n->a, var), n->b), s_mul(n->a, differentiate(n->b, var)));
        return s_div(std::move(num), s_pow(n->b, 2));
    }
    case Kind::Neg:
        return s_neg(differentiate(n->a, var));
    case Kind::Pow: {
        auto outer = s_mul(make_constant(static_cast<double>(n->exponent)), s_pow(n->a, n->exponent - 1));
        return s_mul(std::move(outer), differentiate(n->a, var));
    }
    case Kind::Call: {
        const NodePtr& u = n->a;
        auto du = differentiate(u, var);
        switch (n->fn) {
        case Function::Sin:
            return s_mul(s_call(Function::Cos, u), std::move(du));
        case Function::Cos:
            return s_neg(s_mul(s_call(Function::Sin, u), std::move(du)));
        case Function::Exp:
            return s_mul(n, std::move(du));
        case Function::Ln:
            return s_div(std::move(du), u);
        case Function::Sqrt:
            return s_div(std::move(du), s_mul(make_constant(2.0), n));
        case Function::Abs:
            return s_mul(s_div(u, n), std::move(du));
        case Function::Tanh:
            return s_mul(s_sub(make_constant(1.0), s_pow(n, 2)), std::move(du));
        }
        break;
    }
    }
    return make_constant(0.0);
}

NodePtr shift(const NodePtr& n, std::span<const double> offset) {
    switch (n->kind) {
    case Kind::Constant:
        return n;
    case Kind::Variable:
        if (offset[n->var] == 0.0)
            return n;
        return make_binary(Kind::Add, n, make_constant(offset[n->var]));
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div:
        return make_binary(n->kind, shift(n->a, offset), shift(n->b, offset));
    case Kind::Neg:
        return make_neg(shift(n->a, offset));
    case Kind::Pow:
        return make_pow(shift(n->a, offset), n->exponent);
    case Kind::Call:
        return make_call(n->fn, shift(n->a, offset));
    }
    return n;
}

// ---- printing ----

std::string format_number(double v) {
    char buf[64];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        double back = 0.0;
        std::from_chars(buf, buf + std::char_traits<char>::length(buf), back);
        if (back == v)
            break;
    }
    return buf;
}

void print(const Expression::Node& n, const std::vector<std::string>& vars, std::string& out) {
    switch (n.kind) {
    case Kind::Constant:
        if (std::signbit(n.value)) {
            out += "(-";
            out += format_number(-n.value);
            out += ')';
        } else {
            out += format_number(n.value);
        }
        return;
    case Kind::Variable:
        out += vars[n.var];
        return;
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div: {
        const char* op = n.kind == Kind::Add ? " + " : n.kind == Kind::Sub ? " - " : n.kind == Kind::Mul ? " * " : " / ";
        out += '(';
        print(*n.a, vars, out);
        out += op;
        print(*n.b, vars, out);
        out += ')';
        return;
    }
    case Kind::Neg:
        out += "(-";
        print(*n.a, vars, out);
        out += ')';
        return;
    case Kind::Pow:
        out += '(';
        print(*n.a, vars, out);
        out += '^';
        out += std::to_string(n.exponent);
        out += ')';
        return;
    case Kind::Call:
        out += function_name(n.fn);
        out += '(';
        print(*n.a, vars, out);
        out += ')';
        return;
    }
}

// ---- parsing ----

class Parser {
  public:
    Parser(std::string_view src, const std::vector<std::string>& vars) : src_(src), vars_(vars) {}

    NodePtr parse() {
        auto e = expr();
        skip_ws();
        if (pos_ != src_.size())
            fail(std::string("unexpected character '") + src_[pos_] + "'");
        return e;
    }

  private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError("syntax error: " + msg, pos_); }
    [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const { throw ParseError(msg, at); }

    void skip_ws() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r'))
            ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static bool is_digit(char c) { return c >= '0' && c <= '9'; }
    static bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
    static bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

    NodePtr expr() {
        auto lhs = term();
        for (;;) {
            if (accept('+'))
                lhs = make_binary(Kind::Add, lhs, term());
            else if (accept('-'))
                lhs = make_binary(Kind::Sub, lhs, term());
            else
                return lhs;
        }
    }

    NodePtr term() {
        auto lhs = factor();
        for (;;) {
            if (accept('*'))
                lhs = make_binary(Kind::Mul, lhs, factor());
            else if (accept('/'))
                lhs = make_binary(Kind::Div, lhs, factor());
            else
                return lhs;
        }
    }

    NodePtr factor() {
        if (accept('-'))
            return make_neg(power());
        return power();
    }

    NodePtr power() {
        auto base = atom();
        if (!accept('^'))
            return base;
        skip_ws();
        const std::size_t start = pos_;
        bool negative = false;
        if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) {
            negative = src_[pos_] == '-';
            ++pos_;
        }
        const std::size_t digits = pos_;
        while (pos_ < src_.size() && is_digit(src_[pos_]))
            ++pos_;
        if (pos_ == digits || (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E')))
            fail_at("non-integer exponent (exponents must be integer literals)", start);
        int value = 0;
        const auto [ptr, ec] = std::from_chars(src_.data() + digits, src_.data() + pos_, value);
        if (ec != std::errc{} || ptr != src_.data() + pos_)
            fail_at("exponent out of range", start);
        return make_pow(std::move(base), negative ? -value : value);
    }

    NodePtr atom() {
        skip_ws();
        if (pos_ >= src_.size())
            fail("unexpected end of input");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            auto e = expr();
            if (!accept(')'))
                fail("expected ')'");
            return e;
        }
        if (is_digit(c) || c == '.')
            return number();
        if (is_ident_start(c))
            return identifier();
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && is_digit(src_[pos_]))
            ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && is_digit(src_[pos_]))
                ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-'))
                ++look;
            if (look < src_.size() && is_digit(src_[look])) {
                pos_ = look;
                while (pos_ < src_.size() && is_digit(src_[pos_]))
                    ++pos_;
            }
        }
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
        if (ec != std::errc{} || ptr != src_.data() + pos_ || !std::isfinite(v))
            fail_at("malformed or out-of-range number", start);
        return make_constant(v);
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && is_ident_char(src_[pos_]))
            ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);
        for (const auto& f : kFunctions)
            if (f.name == name) {
                if (!accept('('))
                    fail("expected '(' after function name '" + std::string(name) + "'");
                auto arg = expr();
                if (!accept(')'))
                    fail("expected ')'");
                return make_call(f.fn, std::move(arg));
            }
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (vars_[i] == name)
                return make_variable(i);
        fail_at("unknown identifier '" + std::string(name) + "'", start);
    }

    std::string_view src_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;
};

} // namespace

Expression::Expression()
    : root_(make_constant(0.0)), variables_(std::make_shared<const std::vector<std::string>>()) {}

Expression::Expression(std::shared_ptr<const Node> root, std::shared_ptr<const std::vector<std::string>> variables)
    : root_(std::move(root)), variables_(std::move(variables)) {}

Expression Expression::parse(std::string_view source, std::span<const std::string> variables) {
    auto vars = std::make_shared<const std::vector<std::string>>(variables.begin(), variables.end());
    Parser parser(source, *vars);
    auto root = parser.parse();
    return Expression(std::move(root), std::move(vars));
}

Expression Expression::constant(double value, std::span<const std::string> variables) {
    if (!std::isfinite(value))
        throw DomainError("non-finite constant");
    return Expression(make_constant(value),
                      std::make_shared<const std::vector<std::string>>(variables.begin(), variables.end()));
}

double Expression::eval(std::span<const double> point) const {
    if (point.size() != variables_->size())
        throw InvalidArgument("expression evaluated at a point of dimension " + std::to_string(point.size()) +
                              ", expected " + std::to_string(variables_->size()));
    return evaluate(*root_, point);
}

double Expression::eval(double x) const { return eval(std::span<const double>(&x, 1)); }

Expression Expression::derivative(std::size_t variable) const {
    if (variable >= variables_->size())
        throw InvalidArgument("derivative with respect to an undeclared variable");
    return Expression(differentiate(root_, variable), variables_);
}

Expression Expression::shifted(std::span<const double> offset) const {
    if (offset.size() != variables_->size())
        throw InvalidArgument("shift offset dimension does not match the declared variables");
    return Expression(shift(root_, offset), variables_);
}

std::string Expression::to_string() const {
    std::string out;
    print(*root_, *variables_, out);
    return out;
}

bool Expression::depends_on(std::size_t variable) const { return node_depends_on(*root_, variable); }

bool Expression::is_constant() const { return node_is_constant(*root_); }

Expression::Kind Expression::kind() const { return root_->kind; }

std::vector<std::string> state_variable_names(std::size_t n) {
    std::vector<std::string> names;
    names.reserve(n);
    for (std::size_t i = 1; i <= n; ++i)
        names.push_back("x" + std::to_string(i));
    return names;
}

} // namespace nullctl
