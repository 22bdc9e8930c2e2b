#include "vielbein/jet.hpp"

#include <cassert>
#include <limits>

namespace vielbein {

// ---------------------------------------------------------------------------
// Jet1
// ---------------------------------------------------------------------------

Jet1::Jet1(double value, std::span<const double> grad)
    : dim_(static_cast<int>(grad.size())), value_(value) {
    assert(grad.size() <= static_cast<std::size_t>(kMaxDim));
    std::copy(grad.begin(), grad.end(), grad_.begin());
}

Jet1 Jet1::coordinate(int dim, int i, double x) {
    Jet1 j(x);
    j.dim_ = dim;
    j.grad_[static_cast<std::size_t>(i)] = 1.0;
    return j;
}

void Jet1::set_grad(int i, double g) {
    dim_ = std::max(dim_, i + 1);
    grad_[static_cast<std::size_t>(i)] = g;
}

Jet1& Jet1::operator+=(const Jet1& o) {
    dim_ = std::max(dim_, o.dim_);
    value_ += o.value_;
    for (int i = 0; i < dim_; ++i) grad_[i] += o.grad_[i];
    return *this;
}

Jet1& Jet1::operator-=(const Jet1& o) {
    dim_ = std::max(dim_, o.dim_);
    value_ -= o.value_;
    for (int i = 0; i < dim_; ++i) grad_[i] -= o.grad_[i];
    return *this;
}

Jet1& Jet1::operator*=(const Jet1& o) {
    dim_ = std::max(dim_, o.dim_);
    for (int i = 0; i < dim_; ++i) grad_[i] = grad_[i] * o.value_ + value_ * o.grad_[i];
    value_ *= o.value_;
    return *this;
}

Jet1& Jet1::operator/=(const Jet1& o) {
    dim_ = std::max(dim_, o.dim_);
    const double q = value_ / o.value_;
    for (int i = 0; i < dim_; ++i) grad_[i] = (grad_[i] - q * o.grad_[i]) / o.value_;
    value_ = q;
    return *this;
}

Jet1 operator-(Jet1 a) {
    a.value_ = -a.value_;
    for (int i = 0; i < a.dim_; ++i) a.grad_[i] = -a.grad_[i];
    return a;
}

// ---------------------------------------------------------------------------
// Jet2
// ---------------------------------------------------------------------------

Jet2 Jet2::coordinate(int dim, int i, double x) {
    Jet2 j(x);
    j.dim_ = dim;
    j.grad_[static_cast<std::size_t>(i)] = 1.0;
    return j;
}

void Jet2::set_grad(int i, double g) {
    dim_ = std::max(dim_, i + 1);
    grad_[static_cast<std::size_t>(i)] = g;
}

void Jet2::set_hess(int i, int j, double h) {
    dim_ = std::max(dim_, std::max(i, j) + 1);
    hess_[packed(i, j)] = h;
}

Jet1 Jet2::first_order() const {
    return Jet1(value_, std::span<const double>(grad_.data(), static_cast<std::size_t>(dim_)));
}

Jet1 Jet2::partial(int i) const {
    Jet1 d(grad(i));
    for (int k = 0; k < dim_; ++k) d.set_grad(k, hess(i, k));
    return d;
}

Jet2 Jet2::compose(const Jet2& a, double f, double df, double d2f) {
    Jet2 r(f);
    r.dim_ = a.dim_;
    for (int i = 0; i < a.dim_; ++i) r.grad_[i] = df * a.grad_[i];
    for (int j = 0; j < a.dim_; ++j) {
        for (int i = 0; i <= j; ++i) {
            const std::size_t p = packed(i, j);
            r.hess_[p] = df * a.hess_[p] + d2f * a.grad_[i] * a.grad_[j];
        }
    }
    return r;
}

Jet2& Jet2::operator+=(const Jet2& o) {
    dim_ = std::max(dim_, o.dim_);
    value_ += o.value_;
    for (int i = 0; i < dim_; ++i) grad_[i] += o.grad_[i];
    const int n = dim_ * (dim_ + 1) / 2;
    for (int p = 0; p < n; ++p) hess_[p] += o.hess_[p];
    return *this;
}

Jet2& Jet2::operator-=(const Jet2& o) {
    dim_ = std::max(dim_, o.dim_);
    value_ -= o.value_;
    for (int i = 0; i < dim_; ++i) grad_[i] -= o.grad_[i];
    const int n = dim_ * (dim_ + 1) / 2;
    for (int p = 0; p < n; ++p) hess_[p] -= o.hess_[p];
    return *this;
}

Jet2& Jet2::operator*=(const Jet2& o) {
    dim_ = std::max(dim_, o.dim_);
    for (int j = 0; j < dim_; ++j) {
        for (int i = 0; i <= j; ++i) {
            const std::size_t p = packed(i, j);
            hess_[p] = hess_[p] * o.value_ + value_ * o.hess_[p] + grad_[i] * o.grad_[j] +
                       grad_[j] * o.grad_[i];
        }
    }
    for (int i = 0; i < dim_; ++i) grad_[i] = grad_[i] * o.value_ + value_ * o.grad_[i];
    value_ *= o.value_;
    return *this;
}

Jet2& Jet2::operator/=(const Jet2& o) {
    const double v = o.value_;
    return *this *= compose(o, 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
}

Jet2 operator-(Jet2 a) {
    a.value_ = -a.value_;
    for (int i = 0; i < a.dim_; ++i) a.grad_[i] = -a.grad_[i];
    const int n = a.dim_ * (a.dim_ + 1) / 2;
    for (int p = 0; p < n; ++p) a.hess_[p] = -a.hess_[p];
    return a;
}

Jet2 sin(const Jet2& a) {
    const double s = std::sin(a.value()), c = std::cos(a.value());
    return Jet2::compose(a, s, c, -s);
}

Jet2 cos(const Jet2& a) {
    const double s = std::sin(a.value()), c = std::cos(a.value());
    return Jet2::compose(a, c, -s, -c);
}

Jet2 exp(const Jet2& a) {
    const double e = std::exp(a.value());
    return Jet2::compose(a, e, e, e);
}

Jet2 log(const Jet2& a) {
    const double v = a.value();
    return Jet2::compose(a, std::log(v), 1.0 / v, -1.0 / (v * v));
}

Jet2 sqrt(const Jet2& a) {
    const double s = std::sqrt(a.value());
    return Jet2::compose(a, s, 0.5 / s, -0.25 / (s * a.value()));
}

Jet2 pow(const Jet2& a, double p) {
    const double v = a.value();
    if (p == 0.0) return Jet2(1.0);
    // Integer powers stay exact at v == 0 and for negative bases.
    if (p == std::floor(p) && std::fabs(p) < 64.0) {
        const int n = static_cast<int>(p);
        const double vn2 = (n >= 2 || v != 0.0) ? std::pow(v, n - 2) : 0.0;
        const double vn1 = (n >= 1 || v != 0.0) ? std::pow(v, n - 1) : 0.0;
        return Jet2::compose(a, std::pow(v, n), n * vn1, n * (n - 1) * vn2);
    }
    const double vp = std::pow(v, p);
    return Jet2::compose(a, vp, p * vp / v, p * (p - 1.0) * vp / (v * v));
}

Jet2 pow(const Jet2& a, const Jet2& b) { return exp(b * log(a)); }

std::vector<Jet2> jet_seed(std::span<const double> point) {
    const int dim = static_cast<int>(point.size());
    std::vector<Jet2> seeds;
    seeds.reserve(point.size());
    for (int i = 0; i < dim; ++i) seeds.push_back(Jet2::coordinate(dim, i, point[static_cast<std::size_t>(i)]));
    return seeds;
}

}  // namespace vielbein
