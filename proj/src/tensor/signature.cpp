#include "vielbein/signature.hpp"

namespace vielbein {

std::string Signature::to_string() const { return "(" + std::to_string(p) + "," + std::to_string(q) + ")"; }

Tensor<double> eta(const Signature& sig) {
    const int m = sig.dim();
    auto t = Tensor<double>::cube(2, m, {kFrameDown, kFrameDown});
    for (int a = 0; a < m; ++a) t(a, a) = sig[a];
    return t;
}

}  // namespace vielbein
