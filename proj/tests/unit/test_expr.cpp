#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "vielbein/errors.hpp"
#include "vielbein/expr.hpp"

namespace vielbein {
namespace {

TEST(Parse, PrecedenceAndAssociativity) {
    EXPECT_EQ(parse("1 - 2*M/x2", 4).to_sexpr(), "Sub(1, Div(Mul(2, M), x2))");
    EXPECT_EQ(parse("a - b - c", 4).to_sexpr(), "Sub(Sub(a, b), c)");
    EXPECT_EQ(parse("a / b * c", 4).to_sexpr(), "Mul(Div(a, b), c)");
    EXPECT_EQ(parse("-x1^2", 4).to_sexpr(), "Neg(Pow(x1, 2))");
    EXPECT_EQ(parse("x1^2^3", 4).to_sexpr(), "Pow(Pow(x1, 2), 3)");
    EXPECT_EQ(parse("x1^-2", 4).to_sexpr(), "Pow(x1, Neg(2))");
    EXPECT_EQ(parse("(1 + x1) * x2", 4).to_sexpr(), "Mul(Add(1, x1), x2)");
    EXPECT_EQ(parse("2.5e-3*sin(x3)", 4).to_sexpr(), "Mul(0.0025, sin(x3))");
}

TEST(Parse, ReissnerNordstromLapse) {
    const Expr e = parse("sqrt(1-2*M/x2+Q^2/x2^2)", 4);
    const std::vector<double> x{0, 4, 0, 0};
    EXPECT_NEAR(eval(e, x, {{"M", 1.0}, {"Q", 0.0}}), std::sqrt(0.5), 1e-15);
}

TEST(Parse, Errors) {
    EXPECT_THROW(parse("x6", 5), ParseError);
    EXPECT_THROW(parse("x0", 5), ParseError);
    EXPECT_THROW(parse("", 4), ParseError);
    EXPECT_THROW(parse("tan(x1)", 4), ParseError);
    EXPECT_THROW(parse("1 +", 4), ParseError);
    EXPECT_THROW(parse("(x1", 4), ParseError);
    EXPECT_THROW(parse("x1 x2", 4), ParseError);
    try {
        parse("1 + * 2", 4);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 4u);
    }
    try {
        parse("x1 + foo(2)", 4);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 5u);
        EXPECT_NE(std::string(e.what()).find("foo"), std::string::npos);
    }
}

TEST(Parse, CollectsParametersAndCoordinates) {
    const Expr e = parse("M*x3 + sin(k*x1) - Q", 4);
    EXPECT_EQ(e.parameters(), (std::set<std::string>{"M", "Q", "k"}));
    EXPECT_EQ(e.max_coordinate(), 3);
}

TEST(EvalJet, Polynomial) {
    const std::vector<double> p{3.0};
    const Jet2 v = eval_jet(parse("x1*x1", 1), jet_seed(p), {});
    EXPECT_EQ(v.value(), 9.0);
    EXPECT_EQ(v.grad(0), 6.0);
    EXPECT_EQ(v.hess(0, 0), 2.0);
}

TEST(EvalJet, Seed) {
    const std::vector<double> p{0, 5, 0, 0};
    const Jet2 v = eval_jet(parse("x2", 4), jet_seed(p), {});
    EXPECT_EQ(v.value(), 5.0);
    for (int i = 0; i < 4; ++i) EXPECT_EQ(v.grad(i), i == 1 ? 1.0 : 0.0);
}

TEST(EvalJet, DomainErrorsNameTheSubexpression) {
    const std::vector<double> p{1, 0, 0, 0};
    const auto seeds = jet_seed(p);
    try {
        eval_jet(parse("1 + sqrt(x2)", 4), seeds, {});
        FAIL();
    } catch (const EvaluationError& e) {
        EXPECT_NE(std::string(e.what()).find("sqrt(x2)"), std::string::npos);
    }
    EXPECT_THROW(eval_jet(parse("1/x2", 4), seeds, {}), EvaluationError);
    EXPECT_THROW(eval_jet(parse("ln(x2)", 4), seeds, {}), EvaluationError);
    EXPECT_THROW(eval_jet(parse("x2^-1", 4), seeds, {}), EvaluationError);
    EXPECT_THROW(eval_jet(parse("(x2-1)^0.5", 4), seeds, {}), EvaluationError);
    EXPECT_THROW(eval_jet(parse("M*x1", 4), seeds, {}), EvaluationError);
    EXPECT_NO_THROW(eval_jet(parse("(x2-1)^3", 4), seeds, {}));
    EXPECT_NO_THROW(eval_jet(parse("x2^2", 4), seeds, {}));
}

class RandomExpr {
public:
    explicit RandomExpr(unsigned seed) : rng_(seed) {}

    Expr make(int depth) {
        std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 10);
        switch (pick(rng_)) {
            case 0: return Expr::number(std::uniform_int_distribution<int>(0, 40)(rng_) / 8.0);
            case 1: return Expr::coordinate(std::uniform_int_distribution<int>(1, 4)(rng_));
            case 2: return Expr::parameter(std::uniform_int_distribution<int>(0, 1)(rng_) ? "M" : "a_1");
            case 3: return Expr::binary(Expr::Op::add, make(depth - 1), make(depth - 1));
            case 4: return Expr::binary(Expr::Op::sub, make(depth - 1), make(depth - 1));
            case 5: return Expr::binary(Expr::Op::mul, make(depth - 1), make(depth - 1));
            case 6: return Expr::binary(Expr::Op::div, make(depth - 1), make(depth - 1));
            case 7: return Expr::binary(Expr::Op::pow, make(depth - 1), make(depth - 1));
            case 8: return Expr::negate(make(depth - 1));
            default: {
                const auto fn = static_cast<Expr::Function>(std::uniform_int_distribution<int>(0, 4)(rng_));
                return Expr::call(fn, make(depth - 1));
            }
        }
    }

    // Smooth on a neighbourhood of the sampling box.
    Expr smooth(int depth) {
        std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 7);
        switch (pick(rng_)) {
            case 0: return Expr::number(std::uniform_int_distribution<int>(1, 9)(rng_) / 4.0);
            case 1: return Expr::coordinate(std::uniform_int_distribution<int>(1, 4)(rng_));
            case 2: return Expr::binary(Expr::Op::add, smooth(depth - 1), smooth(depth - 1));
            case 3: return Expr::binary(Expr::Op::mul, smooth(depth - 1), smooth(depth - 1));
            case 4: return Expr::call(Expr::Function::sin, smooth(depth - 1));
            case 5: return Expr::call(Expr::Function::exp, Expr::call(Expr::Function::cos, smooth(depth - 1)));
            case 6: {
                const Expr pos = Expr::binary(Expr::Op::add, Expr::number(2),
                                              Expr::call(Expr::Function::sin, smooth(depth - 1)));
                return Expr::binary(Expr::Op::div, smooth(depth - 1), pos);
            }
            default: {
                const Expr sq = Expr::binary(Expr::Op::pow, smooth(depth - 1), Expr::number(2));
                return Expr::call(Expr::Function::sqrt, Expr::binary(Expr::Op::add, Expr::number(1), sq));
            }
        }
    }

private:
    std::mt19937 rng_;
};

TEST(Printer, RoundTripCorpus) {
    const std::vector<std::string> corpus{
        "1 - 2*M/x2",
        "sqrt(1-2*M/x2+Q^2/x2^2)",
        "x2*sin(x3)",
        "-x1^2",
        "(-x1)^2",
        "x1^-2",
        "x1^(-2)",
        "2^x1^x2",
        "2^(x1^x2)",
        "a-(b-c)",
        "a/(b/c)",
        "a/(b*c)",
        "--x1",
        "x1--x2",
        "x1*-x2",
        "exp(-x1*x1)/ln(2+x2)",
        "cos(x4)^2+sin(x4)^2",
        "1e-3*x1+4.5E2",
        "((((x1))))",
        "-(x1+x2)*x3",
        "x1/x2/x3/x4",
        "x1-x2+x3-x4",
        "0.1*x1^3-0.2*x2*x3+0.3",
    };
    for (const auto& text : corpus) {
        const Expr a = parse(text, 4);
        const Expr b = parse(a.to_string(), 4);
        EXPECT_TRUE(a == b) << text << " -> " << a.to_string();
    }
    RandomExpr gen(11);
    for (int n = 0; n < 50 - static_cast<int>(corpus.size()); ++n) {
        const Expr a = gen.make(4);
        const Expr b = parse(a.to_string(), 4);
        EXPECT_TRUE(a == b) << a.to_sexpr() << " printed as " << a.to_string();
        const Expr c = parse(b.to_string(), 4);
        EXPECT_TRUE(b == c);
    }
}

TEST(EvalJet, DerivativesMatchFiniteDifferences) {
    RandomExpr gen(5);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-0.7, 0.7);
    const double h = 1e-4;
    for (int trial = 0; trial < 60; ++trial) {
        const Expr e = gen.smooth(4);
        std::vector<double> p(4);
        for (double& v : p) v = u(rng);
        const Jet2 j = eval_jet(e, jet_seed(p), {});
        const auto f = [&e](std::vector<double> q) { return eval(e, q, {}); };
        for (int i = 0; i < 4; ++i) {
            auto pp = p, pm = p;
            pp[i] += h;
            pm[i] -= h;
            const double g = (f(pp) - f(pm)) / (2 * h);
            EXPECT_NEAR(j.grad(i), g, 1e-6 * std::max(1.0, std::fabs(g))) << e.to_string();
            for (int k = 0; k < 4; ++k) {
                auto a = p, b = p, c = p, d = p;
                a[i] += h, a[k] += h;
                b[i] += h, b[k] -= h;
                c[i] -= h, c[k] += h;
                d[i] -= h, d[k] -= h;
                const double hk = (f(a) - f(b) - f(c) + f(d)) / (4 * h * h);
                EXPECT_NEAR(j.hess(i, k), hk, 1e-6 * std::max(1.0, std::fabs(hk))) << e.to_string();
            }
        }
    }
}

}  // namespace
}  // namespace vielbein
