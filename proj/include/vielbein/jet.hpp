#pragma once

// Truncated Taylor arithmetic in the base coordinates.
//
// Jet1 carries a value and its gradient; Jet2 adds the Hessian. Both have a
// fixed capacity of kMaxDim base coordinates and a runtime dimension `dim`.
// Constants built from a plain double have dim 0; binary operations take the
// larger dimension of their operands.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace vielbein {

inline constexpr int kMaxDim = 8;

class Jet1 {
public:
    constexpr Jet1() = default;
    constexpr Jet1(double value) : value_(value) {}  // NOLINT: implicit constant lift
    Jet1(double value, std::span<const double> grad);

    /// The i-th coordinate function at `x`: value x_i, gradient e_i.
    static Jet1 coordinate(int dim, int i, double x);

    int dim() const { return dim_; }
    double value() const { return value_; }
    double grad(int i) const { return grad_[static_cast<std::size_t>(i)]; }
    void set_grad(int i, double g);

    Jet1& operator+=(const Jet1& o);
    Jet1& operator-=(const Jet1& o);
    Jet1& operator*=(const Jet1& o);
    Jet1& operator/=(const Jet1& o);

    friend Jet1 operator-(Jet1 a);
    friend Jet1 operator+(Jet1 a, const Jet1& b) { return a += b; }
    friend Jet1 operator-(Jet1 a, const Jet1& b) { return a -= b; }
    friend Jet1 operator*(Jet1 a, const Jet1& b) { return a *= b; }
    friend Jet1 operator/(Jet1 a, const Jet1& b) { return a /= b; }

private:
    int dim_ = 0;
    double value_ = 0.0;
    std::array<double, kMaxDim> grad_{};
};

class Jet2 {
public:
    static constexpr int kHessSize = kMaxDim * (kMaxDim + 1) / 2;

    constexpr Jet2() = default;
    constexpr Jet2(double value) : value_(value) {}  // NOLINT: implicit constant lift

    static Jet2 coordinate(int dim, int i, double x);

    int dim() const { return dim_; }
    double value() const { return value_; }
    double grad(int i) const { return grad_[static_cast<std::size_t>(i)]; }
    /// Symmetric by construction: hess(i, j) and hess(j, i) read the same slot.
    double hess(int i, int j) const { return hess_[packed(i, j)]; }

    void set_value(double v) { value_ = v; }
    void set_grad(int i, double g);
    void set_hess(int i, int j, double h);

    /// Drop the Hessian.
    Jet1 first_order() const;
    /// The partial derivative d/dx^i as a first-order jet (value grad(i), gradient hess(i, .)).
    Jet1 partial(int i) const;

    /// Univariate chain rule: f(a) given f(a.value), f'(a.value), f''(a.value).
    static Jet2 compose(const Jet2& a, double f, double df, double d2f);

    Jet2& operator+=(const Jet2& o);
    Jet2& operator-=(const Jet2& o);
    Jet2& operator*=(const Jet2& o);
    Jet2& operator/=(const Jet2& o);

    friend Jet2 operator-(Jet2 a);
    friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
    friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
    friend Jet2 operator*(Jet2 a, const Jet2& b) { return a *= b; }
    friend Jet2 operator/(Jet2 a, const Jet2& b) { return a /= b; }

private:
    static std::size_t packed(int i, int j) {
        if (i > j) std::swap(i, j);
        return static_cast<std::size_t>(j * (j + 1) / 2 + i);
    }

    int dim_ = 0;
    double value_ = 0.0;
    std::array<double, kMaxDim> grad_{};
    std::array<double, kHessSize> hess_{};
};

Jet2 sin(const Jet2& a);
Jet2 cos(const Jet2& a);
Jet2 exp(const Jet2& a);
Jet2 log(const Jet2& a);
Jet2 sqrt(const Jet2& a);
/// a^p for a constant exponent p.
Jet2 pow(const Jet2& a, double p);
/// a^b = exp(b log a); requires a > 0.
Jet2 pow(const Jet2& a, const Jet2& b);

/// Seed the coordinate functions at `point`: value x^i, gradient e_i, zero Hessian.
std::vector<Jet2> jet_seed(std::span<const double> point);

/// |value| for pivoting in templated linear algebra.
inline double magnitude(double x) { return std::fabs(x); }
inline double magnitude(const Jet1& x) { return std::fabs(x.value()); }
inline double magnitude(const Jet2& x) { return std::fabs(x.value()); }

inline double value_of(double x) { return x; }
inline double value_of(const Jet1& x) { return x.value(); }
inline double value_of(const Jet2& x) { return x.value(); }

}  // namespace vielbein
