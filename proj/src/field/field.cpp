#include "vielbein/field.hpp"

#include <memory>
#include <utility>

#include "vielbein/errors.hpp"

namespace vielbein {

ScalarField expression_scalar(Expr e, ParameterMap params) {
    return [e = std::move(e), params = std::move(params)](std::span<const Jet2> x) { return eval_jet(e, x, params); };
}

ScalarField constant_scalar(double v) {
    return [v](std::span<const Jet2>) { return Jet2(v); };
}

MatrixField expression_matrix(int rows, int cols, std::vector<Expr> entries, ParameterMap params) {
    if (static_cast<int>(entries.size()) != rows * cols) throw ShapeError("expression_matrix: wrong entry count");
    auto shared = std::make_shared<const std::vector<Expr>>(std::move(entries));
    return {rows, cols, [rows, cols, shared, params = std::move(params)](std::span<const Jet2> x) {
                Tensor<Jet2> m({rows, cols});
                for (int r = 0; r < rows; ++r)
                    for (int c = 0; c < cols; ++c)
                        m(r, c) = eval_jet((*shared)[static_cast<std::size_t>(r * cols + c)], x, params);
                return m;
            }};
}

MatrixField constant_matrix(const Tensor<double>& value) {
    const int rows = value.extent(0), cols = value.extent(1);
    return {rows, cols, [value](std::span<const Jet2>) {
                Tensor<Jet2> m({value.extent(0), value.extent(1)});
                for (std::size_t k = 0; k < value.size(); ++k) m.data()[k] = Jet2(value.data()[k]);
                return m;
            }};
}

MatrixField identity_matrix(int n) {
    Tensor<double> id({n, n});
    for (int i = 0; i < n; ++i) id(i, i) = 1.0;
    return constant_matrix(id);
}

std::set<std::string> unresolved_parameters(std::span<const Expr> exprs, const ParameterMap& params) {
    std::set<std::string> missing;
    for (const Expr& e : exprs)
        for (const std::string& name : e.parameters())
            if (!params.count(name)) missing.insert(name);
    return missing;
}

Tensor<double> evaluate_values(const MatrixField& f, std::span<const double> x) {
    const std::vector<Jet2> seeds = jet_seed(x);
    const Tensor<Jet2> m = f(seeds);
    Tensor<double> out(m.shape(), m.slots());
    for (std::size_t k = 0; k < m.size(); ++k) out.data()[k] = m.data()[k].value();
    return out;
}

}  // namespace vielbein
