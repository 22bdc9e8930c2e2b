#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <type_traits>
#include <string>
#include <utility>
#include <vector>

#include "vielbein/errors.hpp"

namespace vielbein {

/// Which index space a tensor slot lives in.
enum class IndexKind { any, coordinate, frame };
enum class Variance { unspecified, upper, lower };

struct Slot {
    IndexKind kind = IndexKind::any;
    Variance variance = Variance::unspecified;

    friend bool operator==(const Slot&, const Slot&) = default;
};

inline constexpr Slot kCoordUp{IndexKind::coordinate, Variance::upper};
inline constexpr Slot kCoordDown{IndexKind::coordinate, Variance::lower};
inline constexpr Slot kFrameUp{IndexKind::frame, Variance::upper};
inline constexpr Slot kFrameDown{IndexKind::frame, Variance::lower};

/// Dense row-major tensor with per-slot extents and index metadata.
///
/// Entries are `double` or a jet type. All geometric objects in this library
/// are stored this way with 0-based indices.
template <class T>
class Tensor {
public:
    Tensor() = default;

    explicit Tensor(std::vector<int> shape, std::vector<Slot> slots = {}, T fill = T{})
        : shape_(std::move(shape)), slots_(std::move(slots)) {
        if (slots_.empty()) slots_.assign(shape_.size(), Slot{});
        if (slots_.size() != shape_.size()) throw ShapeError("slot metadata does not match tensor rank");
        strides_.assign(shape_.size(), 1);
        std::size_t n = 1;
        for (std::size_t k = shape_.size(); k-- > 0;) {
            if (shape_[k] < 0) throw ShapeError("negative tensor extent");
            strides_[k] = n;
            n *= static_cast<std::size_t>(shape_[k]);
        }
        data_.assign(n, fill);
    }

    /// Rank-`rank` tensor with every extent equal to `extent`.
    static Tensor cube(int rank, int extent, std::vector<Slot> slots = {}, T fill = T{}) {
        return Tensor(std::vector<int>(static_cast<std::size_t>(rank), extent), std::move(slots), fill);
    }

    int rank() const { return static_cast<int>(shape_.size()); }
    const std::vector<int>& shape() const { return shape_; }
    int extent(int slot) const { return shape_[static_cast<std::size_t>(slot)]; }
    const std::vector<Slot>& slots() const { return slots_; }
    void set_slots(std::vector<Slot> slots) {
        if (slots.size() != shape_.size()) throw ShapeError("slot metadata does not match tensor rank");
        slots_ = std::move(slots);
    }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    std::span<T> data() { return data_; }
    std::span<const T> data() const { return data_; }

    template <class... I>
    T& operator()(I... idx) {
        return data_[offset(idx...)];
    }
    template <class... I>
    const T& operator()(I... idx) const {
        return data_[offset(idx...)];
    }

    T& at(std::span<const int> idx) { return data_[offset_span(idx)]; }
    const T& at(std::span<const int> idx) const { return data_[offset_span(idx)]; }

    /// Multi-index of the flat position `flat`.
    std::vector<int> unflatten(std::size_t flat) const {
        std::vector<int> idx(shape_.size());
        for (std::size_t k = 0; k < shape_.size(); ++k) {
            idx[k] = static_cast<int>(flat / strides_[k]);
            flat %= strides_[k];
        }
        return idx;
    }

    template <class F>
    Tensor& apply(F&& f) {
        for (auto& v : data_) v = f(v);
        return *this;
    }

    bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

private:
    template <class... I>
    std::size_t offset(I... idx) const {
        static_assert((std::is_integral_v<I> && ...), "tensor indices must be integral");
        std::size_t off = 0;
        std::size_t k = 0;
        ((off += static_cast<std::size_t>(idx) * strides_[k++]), ...);
        return off;
    }

    std::size_t offset_span(std::span<const int> idx) const {
        std::size_t off = 0;
        for (std::size_t k = 0; k < idx.size(); ++k) off += static_cast<std::size_t>(idx[k]) * strides_[k];
        return off;
    }

    std::vector<int> shape_;
    std::vector<std::size_t> strides_;
    std::vector<Slot> slots_;
    std::vector<T> data_;
};

using RealTensor = Tensor<double>;

/// Largest absolute entry; 0 for an empty tensor.
inline double max_abs(const Tensor<double>& t) {
    double m = 0.0;
    for (double v : t.data()) m = std::max(m, std::fabs(v));
    return m;
}

/// Largest absolute entry-wise difference. Shapes must agree.
inline double max_abs_diff(const Tensor<double>& a, const Tensor<double>& b) {
    if (!a.same_shape(b)) throw ShapeError("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::fabs(a.data()[k] - b.data()[k]));
    return m;
}

/// Contract slot pairs (slot of a, slot of b). The result carries the free
/// slots of `a` followed by the free slots of `b`, in order.
///
/// A pair must have matching extents, compatible kinds (equal, or one is
/// `any`), and when both variances are specified, one upper and one lower.
template <class T>
Tensor<T> contract(const Tensor<T>& a, const Tensor<T>& b, std::span<const std::pair<int, int>> pairs) {
    std::vector<bool> a_used(static_cast<std::size_t>(a.rank()), false);
    std::vector<bool> b_used(static_cast<std::size_t>(b.rank()), false);
    for (auto [sa, sb] : pairs) {
        if (sa < 0 || sa >= a.rank() || sb < 0 || sb >= b.rank())
            throw ShapeError("contract: slot out of range");
        if (a_used[static_cast<std::size_t>(sa)] || b_used[static_cast<std::size_t>(sb)])
            throw ShapeError("contract: slot used twice");
        a_used[static_cast<std::size_t>(sa)] = b_used[static_cast<std::size_t>(sb)] = true;
        if (a.extent(sa) != b.extent(sb)) throw ShapeError("contract: extent mismatch");
        const Slot& x = a.slots()[static_cast<std::size_t>(sa)];
        const Slot& y = b.slots()[static_cast<std::size_t>(sb)];
        if (x.kind != IndexKind::any && y.kind != IndexKind::any && x.kind != y.kind)
            throw ShapeError("contract: coordinate index paired with frame index");
        if (x.variance != Variance::unspecified && y.variance != Variance::unspecified &&
            x.variance == y.variance)
            throw ShapeError("contract: both indices have the same variance");
    }

    std::vector<int> shape;
    std::vector<Slot> slots;
    std::vector<int> a_free, b_free;
    for (int s = 0; s < a.rank(); ++s) {
        if (a_used[static_cast<std::size_t>(s)]) continue;
        a_free.push_back(s);
        shape.push_back(a.extent(s));
        slots.push_back(a.slots()[static_cast<std::size_t>(s)]);
    }
    for (int s = 0; s < b.rank(); ++s) {
        if (b_used[static_cast<std::size_t>(s)]) continue;
        b_free.push_back(s);
        shape.push_back(b.extent(s));
        slots.push_back(b.slots()[static_cast<std::size_t>(s)]);
    }
    Tensor<T> out(shape, slots);

    std::vector<int> sum_extent;
    for (auto [sa, sb] : pairs) sum_extent.push_back(a.extent(sa));
    std::size_t sum_count = 1;
    for (int e : sum_extent) sum_count *= static_cast<std::size_t>(e);

    std::vector<int> ia(static_cast<std::size_t>(a.rank())), ib(static_cast<std::size_t>(b.rank()));
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        const std::vector<int> idx = out.unflatten(flat);
        std::size_t k = 0;
        for (int s : a_free) ia[static_cast<std::size_t>(s)] = idx[k++];
        for (int s : b_free) ib[static_cast<std::size_t>(s)] = idx[k++];
        T acc{};
        for (std::size_t c = 0; c < sum_count; ++c) {
            std::size_t rem = c;
            for (std::size_t p = pairs.size(); p-- > 0;) {
                const int v = static_cast<int>(rem % static_cast<std::size_t>(sum_extent[p]));
                rem /= static_cast<std::size_t>(sum_extent[p]);
                ia[static_cast<std::size_t>(pairs[p].first)] = v;
                ib[static_cast<std::size_t>(pairs[p].second)] = v;
            }
            acc += a.at(ia) * b.at(ib);
        }
        out.data()[flat] = acc;
    }
    return out;
}

template <class T>
Tensor<T> contract(const Tensor<T>& a, const Tensor<T>& b, std::initializer_list<std::pair<int, int>> pairs) {
    return contract(a, b, std::span<const std::pair<int, int>>(pairs.begin(), pairs.size()));
}

/// The permutation symbol as a rank-m tensor with the given slot metadata.
Tensor<double> levi_civita(int m, Slot slot);

}  // namespace vielbein
