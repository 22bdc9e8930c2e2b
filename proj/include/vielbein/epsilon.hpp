#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace vielbein {

/// Levi-Civita permutation symbol in m dimensions (0-based indices).
///
/// For m <= 6 the sign of every index tuple is tabulated once; larger m fall
/// back to a parity count. Instances are immutable and shared.
class EpsilonSymbol {
public:
    static const EpsilonSymbol& of(int m);

    int dim() const { return m_; }
    /// +1 / -1 for even / odd permutations of (0..m-1), 0 on a repeated index.
    int sign(std::span<const int> idx) const;

    explicit EpsilonSymbol(int m);

private:
    static int parity_sign(std::span<const int> idx, int m);

    int m_;
    std::vector<std::int8_t> table_;
};

/// All permutations of `items` (lexicographic order), each paired with its parity sign.
struct SignedPermutation {
    std::vector<int> perm;
    int sign;
};
std::vector<SignedPermutation> signed_permutations(std::vector<int> items);

}  // namespace vielbein
