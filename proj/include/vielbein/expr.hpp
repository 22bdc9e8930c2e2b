#pragma once

// Scalar expressions of the base coordinates x1..xm.
//
// Grammar (lowest to highest precedence, same-precedence binary operators
// associate to the left):
//
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' operand)*        operand := '-' operand | primary
//   primary := number | x<k> | name | func '(' sum ')' | '(' sum ')'
//
// func is one of sin, cos, sqrt, exp, ln. Any other bare name is a parameter
// resolved at evaluation time.

#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>

#include "vielbein/jet.hpp"

namespace vielbein {

using ParameterMap = std::map<std::string, double>;

class Expr {
public:
    enum class Op { number, coordinate, parameter, add, sub, mul, div, pow, neg, call };
    enum class Function { sin, cos, sqrt, exp, ln };

    static Expr number(double v);
    /// 1-based coordinate reference x<index>.
    static Expr coordinate(int index);
    static Expr parameter(std::string name);
    static Expr binary(Op op, Expr lhs, Expr rhs);
    static Expr negate(Expr arg);
    static Expr call(Function fn, Expr arg);

    Op op() const;
    double number_value() const;
    int coordinate_index() const;
    const std::string& parameter_name() const;
    Function function() const;
    Expr lhs() const;
    Expr rhs() const;
    /// Operand of `neg` and `call`.
    Expr arg() const;

    /// Infix text that parses back to a structurally equal tree.
    std::string to_string() const;
    /// Constructor-style dump, e.g. Sub(1, Div(Mul(2, M), x2)).
    std::string to_sexpr() const;

    std::set<std::string> parameters() const;
    int max_coordinate() const;

    friend bool operator==(const Expr& a, const Expr& b);

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

std::string_view function_name(Expr::Function fn);

/// Parse `text` for a base space of dimension `dim`. Throws ParseError.
Expr parse(std::string_view text, int dim);

/// Exact value, gradient and Hessian of `e` at the seeded point `x`.
/// Throws EvaluationError on a missing parameter or a domain violation
/// (non-positive sqrt/ln argument, zero divisor, invalid power).
Jet2 eval_jet(const Expr& e, std::span<const Jet2> x, const ParameterMap& params);

/// Value-only evaluation.
double eval(const Expr& e, std::span<const double> x, const ParameterMap& params);

}  // namespace vielbein
