#pragma once

#include <string>

#include "vielbein/tensor.hpp"

namespace vielbein {

/// Metric signature: p entries -1 followed by q entries +1.
struct Signature {
    int p = 1;
    int q = 3;

    int dim() const { return p + q; }
    /// Diagonal entry eta_{aa} (0-based a).
    double operator[](int a) const { return a < p ? -1.0 : 1.0; }
    std::string to_string() const;

    friend bool operator==(const Signature&, const Signature&) = default;
};

/// eta_{mu nu} = eta^{mu nu} as a dense matrix with frame slots.
Tensor<double> eta(const Signature& sig);

}  // namespace vielbein
