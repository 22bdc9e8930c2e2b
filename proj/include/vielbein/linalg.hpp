#pragma once

// Small dense LU helpers, templated so the same code runs on doubles and jets.

#include <cmath>
#include <utility>
#include <vector>

#include "vielbein/errors.hpp"
#include "vielbein/jet.hpp"
#include "vielbein/tensor.hpp"

namespace vielbein {

template <class T>
struct LuResult {
    Tensor<T> lu;
    std::vector<int> pivot;
    int parity = 1;
    bool singular = false;
};

template <class T>
LuResult<T> lu_decompose(const Tensor<T>& a) {
    const int n = a.extent(0);
    LuResult<T> r{a, std::vector<int>(static_cast<std::size_t>(n)), 1, false};
    for (int i = 0; i < n; ++i) r.pivot[static_cast<std::size_t>(i)] = i;
    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = magnitude(r.lu(k, k));
        for (int i = k + 1; i < n; ++i) {
            if (magnitude(r.lu(i, k)) > best) {
                best = magnitude(r.lu(i, k));
                p = i;
            }
        }
        if (best == 0.0) {
            r.singular = true;
            return r;
        }
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(r.lu(k, j), r.lu(p, j));
            std::swap(r.pivot[static_cast<std::size_t>(k)], r.pivot[static_cast<std::size_t>(p)]);
            r.parity = -r.parity;
        }
        for (int i = k + 1; i < n; ++i) {
            r.lu(i, k) /= r.lu(k, k);
            const T f = r.lu(i, k);
            for (int j = k + 1; j < n; ++j) r.lu(i, j) -= f * r.lu(k, j);
        }
    }
    return r;
}

template <class T>
T determinant(const Tensor<T>& a) {
    const LuResult<T> r = lu_decompose(a);
    if (r.singular) return T(0.0);
    T d(static_cast<double>(r.parity));
    for (int k = 0; k < a.extent(0); ++k) d *= r.lu(k, k);
    return d;
}

/// Inverse of a square matrix. The result's slots are the input's, swapped
/// and with flipped variance. Throws DegenerateFrameError when singular.
template <class T>
Tensor<T> inverse(const Tensor<T>& a) {
    const int n = a.extent(0);
    const LuResult<T> r = lu_decompose(a);
    if (r.singular) throw DegenerateFrameError("matrix is singular");
    auto flip = [](Slot s) {
        if (s.variance == Variance::upper) s.variance = Variance::lower;
        else if (s.variance == Variance::lower) s.variance = Variance::upper;
        return s;
    };
    Tensor<T> inv({n, n}, {flip(a.slots()[1]), flip(a.slots()[0])});
    for (int col = 0; col < n; ++col) {
        std::vector<T> x(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = T(r.pivot[static_cast<std::size_t>(i)] == col ? 1.0 : 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < i; ++j) x[static_cast<std::size_t>(i)] -= r.lu(i, j) * x[static_cast<std::size_t>(j)];
        for (int i = n; i-- > 0;) {
            for (int j = i + 1; j < n; ++j) x[static_cast<std::size_t>(i)] -= r.lu(i, j) * x[static_cast<std::size_t>(j)];
            x[static_cast<std::size_t>(i)] /= r.lu(i, i);
        }
        for (int i = 0; i < n; ++i) inv(i, col) = x[static_cast<std::size_t>(i)];
    }
    return inv;
}

/// Product of the Euclidean norms of the rows; the scale for degeneracy tests.
inline double row_norm_product(const Tensor<double>& a) {
    double prod = 1.0;
    for (int i = 0; i < a.extent(0); ++i) {
        double s = 0.0;
        for (int j = 0; j < a.extent(1); ++j) s += a(i, j) * a(i, j);
        prod *= std::sqrt(s);
    }
    return prod;
}

/// Plain matrix product with explicit result slots.
template <class T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b) {
    const int n = a.extent(0), k = a.extent(1), m = b.extent(1);
    Tensor<T> c({n, m}, {a.slots()[0], b.slots()[1]});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            T acc(0.0);
            for (int l = 0; l < k; ++l) acc += a(i, l) * b(l, j);
            c(i, j) = acc;
        }
    return c;
}

}  // namespace vielbein
