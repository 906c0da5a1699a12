#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nullctl {

// Immutable arithmetic expression over a fixed list of named variables.
//
// Grammar (whitespace ignored):
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := '-'? power
//   power  := atom ('^' '-'? integer)?
//   atom   := number | ident | func '(' expr ')' | '(' expr ')'
//   func   := sin | cos | exp | ln | sqrt | abs | tanh
//
// Evaluation never returns NaN or infinity: division by zero, ln of a
// non-positive argument, sqrt of a negative argument and overflow all throw
// DomainError.
class Expression {
  public:
    enum class Kind { Constant, Variable, Add, Sub, Mul, Div, Neg, Pow, Call };
    enum class Function { Sin, Cos, Exp, Ln, Sqrt, Abs, Tanh };

    struct Node;

    // Constant zero over no variables.
    Expression();

    [[nodiscard]] static Expression parse(std::string_view source, std::span<const std::string> variables);
    [[nodiscard]] static Expression constant(double value, std::span<const std::string> variables);

    [[nodiscard]] double eval(std::span<const double> point) const;
    // Convenience for single-variable expressions such as signals in t.
    [[nodiscard]] double eval(double x) const;

    [[nodiscard]] Expression derivative(std::size_t variable) const;

    // Substitutes x_i -> x_i + offset[i] for every declared variable.
    [[nodiscard]] Expression shifted(std::span<const double> offset) const;

    // Fully parenthesised text that parses back to an equivalent expression.
    [[nodiscard]] std::string to_string() const;

    [[nodiscard]] const std::vector<std::string>& variables() const { return *variables_; }
    [[nodiscard]] bool depends_on(std::size_t variable) const;
    [[nodiscard]] bool is_constant() const;
    [[nodiscard]] Kind kind() const;

  private:
    Expression(std::shared_ptr<const Node> root, std::shared_ptr<const std::vector<std::string>> variables);

    std::shared_ptr<const Node> root_;
    std::shared_ptr<const std::vector<std::string>> variables_;
};

[[nodiscard]] std::vector<std::string> state_variable_names(std::size_t n);

} // namespace nullctl
