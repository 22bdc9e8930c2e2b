#include "vielbein/epsilon.hpp"

#include <algorithm>
#include <array>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "vielbein/jet.hpp"
#include "vielbein/tensor.hpp"

namespace vielbein {

namespace {
constexpr int kTableMaxDim = 6;
}

EpsilonSymbol::EpsilonSymbol(int m) : m_(m) {
    if (m < 1 || m > kMaxDim) throw std::invalid_argument("EpsilonSymbol: unsupported dimension");
    if (m > kTableMaxDim) return;
    std::size_t n = 1;
    for (int k = 0; k < m; ++k) n *= static_cast<std::size_t>(m);
    table_.resize(n);
    std::vector<int> idx(static_cast<std::size_t>(m));
    for (std::size_t flat = 0; flat < n; ++flat) {
        std::size_t rem = flat;
        for (int k = m; k-- > 0;) {
            idx[static_cast<std::size_t>(k)] = static_cast<int>(rem % static_cast<std::size_t>(m));
            rem /= static_cast<std::size_t>(m);
        }
        table_[flat] = static_cast<std::int8_t>(parity_sign(idx, m));
    }
}

const EpsilonSymbol& EpsilonSymbol::of(int m) {
    static std::array<std::unique_ptr<EpsilonSymbol>, kMaxDim + 1> cache;
    static std::once_flag flags[kMaxDim + 1];
    if (m < 1 || m > kMaxDim) throw std::invalid_argument("EpsilonSymbol: unsupported dimension");
    std::call_once(flags[m], [m] { cache[static_cast<std::size_t>(m)] = std::make_unique<EpsilonSymbol>(m); });
    return *cache[static_cast<std::size_t>(m)];
}

int EpsilonSymbol::sign(std::span<const int> idx) const {
    if (static_cast<int>(idx.size()) != m_) throw std::invalid_argument("EpsilonSymbol: wrong index count");
    if (table_.empty()) return parity_sign(idx, m_);
    std::size_t flat = 0;
    for (int v : idx) flat = flat * static_cast<std::size_t>(m_) + static_cast<std::size_t>(v);
    return table_[flat];
}

int EpsilonSymbol::parity_sign(std::span<const int> idx, int m) {
    std::array<bool, kMaxDim> seen{};
    for (int v : idx) {
        if (v < 0 || v >= m || seen[static_cast<std::size_t>(v)]) return 0;
        seen[static_cast<std::size_t>(v)] = true;
    }
    int inversions = 0;
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = a + 1; b < idx.size(); ++b)
            if (idx[a] > idx[b]) ++inversions;
    return inversions % 2 == 0 ? 1 : -1;
}

std::vector<SignedPermutation> signed_permutations(std::vector<int> items) {
    std::sort(items.begin(), items.end());
    std::vector<SignedPermutation> out;
    const std::vector<int> ref = items;
    do {
        // Parity relative to the sorted order.
        int inversions = 0;
        for (std::size_t a = 0; a < items.size(); ++a)
            for (std::size_t b = a + 1; b < items.size(); ++b)
                if (items[a] > items[b]) ++inversions;
        out.push_back({items, inversions % 2 == 0 ? 1 : -1});
    } while (std::next_permutation(items.begin(), items.end()));
    return out;
}

Tensor<double> levi_civita(int m, Slot slot) {
    const EpsilonSymbol& eps = EpsilonSymbol::of(m);
    auto t = Tensor<double>::cube(m, m, std::vector<Slot>(static_cast<std::size_t>(m), slot));
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
        const std::vector<int> idx = t.unflatten(flat);
        t.data()[flat] = eps.sign(idx);
    }
    return t;
}

}  // namespace vielbein
