#pragma once

// Fields on the base space: callables from seeded coordinate jets to jets.

#include <functional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "vielbein/expr.hpp"
#include "vielbein/jet.hpp"
#include "vielbein/tensor.hpp"

namespace vielbein {

using ScalarField = std::function<Jet2(std::span<const Jet2>)>;

/// rows x cols matrix of scalar fields, evaluated together.
struct MatrixField {
    int rows = 0;
    int cols = 0;
    std::function<Tensor<Jet2>(std::span<const Jet2>)> eval;

    Tensor<Jet2> operator()(std::span<const Jet2> x) const { return eval(x); }
};

ScalarField expression_scalar(Expr e, ParameterMap params);
ScalarField constant_scalar(double v);

/// Row-major `entries` (rows*cols of them).
MatrixField expression_matrix(int rows, int cols, std::vector<Expr> entries, ParameterMap params);
MatrixField constant_matrix(const Tensor<double>& value);
MatrixField identity_matrix(int n);

/// Parameter names used by `exprs` that `params` does not define.
std::set<std::string> unresolved_parameters(std::span<const Expr> exprs, const ParameterMap& params);

/// Value-only evaluation of a matrix field at a plain point.
Tensor<double> evaluate_values(const MatrixField& f, std::span<const double> x);

}  // namespace vielbein
