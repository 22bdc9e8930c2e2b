#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "vielbein/epsilon.hpp"
#include "vielbein/jet.hpp"
#include "vielbein/linalg.hpp"
#include "vielbein/signature.hpp"
#include "vielbein/tensor.hpp"

namespace vielbein {
namespace {

TEST(JetSeed, CoordinateFunctions) {
    const std::vector<double> p{0, 0, 0, 0};
    const auto x = jet_seed(p);
    ASSERT_EQ(x.size(), 4u);
    for (int i = 0; i < 4; ++i) {
        EXPECT_EQ(x[i].value(), 0.0);
        for (int j = 0; j < 4; ++j) {
            EXPECT_EQ(x[i].grad(j), i == j ? 1.0 : 0.0);
            for (int k = 0; k < 4; ++k) EXPECT_EQ(x[i].hess(j, k), 0.0);
        }
    }
}

TEST(JetSeed, ProductRule) {
    const std::vector<double> p{2, 3, 0, 0};
    const auto x = jet_seed(p);
    const Jet2 f = x[0] * x[1];
    EXPECT_EQ(f.value(), 6.0);
    EXPECT_EQ(f.grad(0), 3.0);
    EXPECT_EQ(f.grad(1), 2.0);
    EXPECT_EQ(f.hess(0, 1), 1.0);
    EXPECT_EQ(f.hess(1, 0), 1.0);
    EXPECT_EQ(f.hess(0, 0), 0.0);
}

TEST(JetSeed, SineTaylorCoefficients) {
    const std::vector<double> p{0, 0, 0, 0};
    const auto x = jet_seed(p);
    const Jet2 f = sin(x[0]);
    EXPECT_EQ(f.value(), 0.0);
    EXPECT_EQ(f.grad(0), 1.0);
    EXPECT_EQ(f.hess(0, 0), 0.0);
}

TEST(Jet, DivisionAndPowers) {
    const std::vector<double> p{2.0};
    const auto x = jet_seed(p);
    const Jet2 q = Jet2(1.0) / x[0];
    EXPECT_DOUBLE_EQ(q.value(), 0.5);
    EXPECT_DOUBLE_EQ(q.grad(0), -0.25);
    EXPECT_DOUBLE_EQ(q.hess(0, 0), 0.25);
    const Jet2 c = pow(x[0], 3.0);
    EXPECT_DOUBLE_EQ(c.value(), 8.0);
    EXPECT_DOUBLE_EQ(c.grad(0), 12.0);
    EXPECT_DOUBLE_EQ(c.hess(0, 0), 12.0);
    const Jet2 z = pow(Jet2::coordinate(1, 0, 0.0), 2.0);
    EXPECT_EQ(z.value(), 0.0);
    EXPECT_EQ(z.grad(0), 0.0);
    EXPECT_EQ(z.hess(0, 0), 2.0);
}

// Random smooth compositions: jet channels against central differences of the value channel.
TEST(Jet, DerivativesMatchFiniteDifferences) {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    const int m = 4;
    for (int trial = 0; trial < 100; ++trial) {
        double c[8];
        for (double& v : c) v = coef(rng);
        const auto f = [&c](std::span<const Jet2> x) {
            const Jet2 a = Jet2(c[0]) * x[0] * x[1] + sin(Jet2(c[1]) * x[2]) * exp(Jet2(c[2]) * x[0]);
            const Jet2 b = sqrt(Jet2(1.5) + x[1] * x[1]) / (Jet2(2.0) + cos(x[3] * Jet2(c[3])));
            const Jet2 d = log(Jet2(3.0) + Jet2(c[4]) * x[2] * x[3]) + pow(Jet2(1.2) + x[0] * Jet2(c[5] * 0.5), 2.5);
            return a + b * d - Jet2(c[6]) * pow(x[3], 3.0) + Jet2(c[7]);
        };
        const auto value = [&f](std::vector<double> p) {
            std::vector<Jet2> x;
            for (double v : p) x.emplace_back(v);
            return f(x).value();
        };
        std::vector<double> p(m);
        for (double& v : p) v = 0.8 * coef(rng);
        const Jet2 j = f(jet_seed(p));
        const double h = 1e-4;
        for (int i = 0; i < m; ++i) {
            auto pp = p, pm = p;
            pp[i] += h;
            pm[i] -= h;
            const double g = (value(pp) - value(pm)) / (2 * h);
            EXPECT_NEAR(j.grad(i), g, 1e-6 * std::max(1.0, std::fabs(g)));
            for (int k = 0; k < m; ++k) {
                auto a = p, b = p, cc = p, d = p;
                a[i] += h, a[k] += h;
                b[i] += h, b[k] -= h;
                cc[i] -= h, cc[k] += h;
                d[i] -= h, d[k] -= h;
                const double hk = (value(a) - value(b) - value(cc) + value(d)) / (4 * h * h);
                EXPECT_NEAR(j.hess(i, k), hk, 1e-6 * std::max(1.0, std::fabs(hk)));
            }
        }
    }
}

TEST(Eta, Signatures) {
    const auto e13 = eta({1, 3});
    EXPECT_EQ(e13(0, 0), -1.0);
    for (int a = 1; a < 4; ++a) EXPECT_EQ(e13(a, a), 1.0);
    const auto e14 = eta({1, 4});
    EXPECT_EQ(e14.extent(0), 5);
    EXPECT_EQ(e14(0, 0), -1.0);
    EXPECT_EQ(e14(4, 4), 1.0);
    const auto e02 = eta({0, 2});
    EXPECT_EQ(e02(0, 0), 1.0);
    EXPECT_EQ(e02(1, 1), 1.0);
    EXPECT_EQ(e02(0, 1), 0.0);
}

TEST(Eta, SquaresToIdentity) {
    for (const Signature sig : {Signature{1, 3}, Signature{1, 4}, Signature{0, 2}, Signature{2, 2}, Signature{0, 5}}) {
        const auto e = eta(sig);
        const auto sq = matmul(e, e);
        for (int a = 0; a < sig.dim(); ++a)
            for (int b = 0; b < sig.dim(); ++b) EXPECT_EQ(sq(a, b), a == b ? 1.0 : 0.0);
    }
}

TEST(Epsilon, TwoDimensions) {
    const auto& eps = EpsilonSymbol::of(2);
    const int ij[] = {0, 1};
    EXPECT_EQ(eps.sign(ij) * eps.sign(ij), 1);
    const int ji[] = {1, 0};
    EXPECT_EQ(eps.sign(ji), -1);
    const int ii[] = {1, 1};
    EXPECT_EQ(eps.sign(ii), 0);
}

TEST(Epsilon, ThreeDimensionalDoubleContraction) {
    const auto up = levi_civita(3, kCoordUp);
    const auto down = levi_civita(3, kCoordDown);
    const auto c = contract(up, down, {{1, 1}, {2, 2}});
    for (int i = 0; i < 3; ++i)
        for (int l = 0; l < 3; ++l) EXPECT_EQ(c(i, l), i == l ? 2.0 : 0.0);
}

TEST(Epsilon, FourDimensionalPairContraction) {
    const auto up = levi_civita(4, kCoordUp);
    const auto down = levi_civita(4, kCoordDown);
    const auto c = contract(up, down, {{0, 0}, {1, 1}});
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int l = 0; l < 4; ++l)
                for (int s = 0; s < 4; ++s) {
                    const double expect = 2.0 * ((i == l) * (j == s) - (i == s) * (j == l));
                    EXPECT_EQ(c(i, j, l, s), expect);
                }
}

TEST(Epsilon, AntisymmetricUnderEverySwap) {
    for (int m = 2; m <= 5; ++m) {
        const auto& eps = EpsilonSymbol::of(m);
        std::vector<int> base(m);
        for (int k = 0; k < m; ++k) base[k] = k;
        const int identity_sign = eps.sign(base);
        EXPECT_EQ(identity_sign, 1);
        for (const auto& sp : signed_permutations(base)) {
            EXPECT_EQ(eps.sign(sp.perm), sp.sign);
            for (int a = 0; a < m; ++a)
                for (int b = a + 1; b < m; ++b) {
                    auto swapped = sp.perm;
                    std::swap(swapped[a], swapped[b]);
                    EXPECT_EQ(eps.sign(swapped), -sp.sign);
                }
        }
    }
}

TEST(Epsilon, TableMatchesParityAboveTableRange) {
    const auto& eps = EpsilonSymbol::of(7);
    const std::vector<int> p{1, 0, 2, 3, 4, 5, 6};
    EXPECT_EQ(eps.sign(p), -1);
    const std::vector<int> r{1, 1, 2, 3, 4, 5, 6};
    EXPECT_EQ(eps.sign(r), 0);
}

TEST(Epsilon, SymmetricPairContractsToZero) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int m = 2; m <= 5; ++m) {
        Tensor<double> s = Tensor<double>::cube(2, m, {kCoordDown, kCoordDown});
        for (int a = 0; a < m; ++a)
            for (int b = a; b < m; ++b) s(a, b) = s(b, a) = u(rng);
        const auto c = contract(levi_civita(m, kCoordUp), s, {{0, 0}, {1, 1}});
        for (double v : c.data()) EXPECT_EQ(v, 0.0);
    }
}

TEST(Contract, RejectsMismatchedIndices) {
    const auto a = Tensor<double>::cube(2, 3, {kCoordUp, kCoordDown});
    const auto b = Tensor<double>::cube(2, 4, {kCoordUp, kCoordDown});
    EXPECT_THROW(contract(a, b, {{0, 1}}), ShapeError);
    const auto c = Tensor<double>::cube(2, 3, {kCoordUp, kCoordDown});
    EXPECT_THROW(contract(a, c, {{0, 0}}), ShapeError);
    const auto f = Tensor<double>::cube(2, 3, {kFrameUp, kFrameDown});
    EXPECT_THROW(contract(a, f, {{0, 1}}), ShapeError);
    EXPECT_NO_THROW(contract(a, c, {{1, 0}}));
}

TEST(Linalg, InverseAndDeterminant) {
    Tensor<double> a({3, 3});
    const double v[] = {2, 1, 0, 1, 3, 1, 0, 1, 4};
    std::copy(std::begin(v), std::end(v), a.data().begin());
    EXPECT_NEAR(determinant(a), 18.0, 1e-12);
    const auto prod = matmul(a, inverse(a));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_NEAR(prod(i, j), i == j ? 1.0 : 0.0, 1e-14);
    Tensor<double> s({2, 2});
    s(0, 0) = 1, s(0, 1) = 2, s(1, 0) = 2, s(1, 1) = 4;
    EXPECT_THROW(inverse(s), DegenerateFrameError);
}

}  // namespace
}  // namespace vielbein
