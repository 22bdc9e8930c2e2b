#pragma once

// Exact and randomized field configurations used as fixtures by the checks.
//
// Coordinates of the 4D solutions are (x1, x2, x3, x4) = (t, r, theta, phi).

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "vielbein/expr.hpp"
#include "vielbein/field.hpp"
#include "vielbein/frame_geometry.hpp"

namespace vielbein {

/// Coupling constant that makes the reduced Einstein equations hold for the
/// Reissner-Nordstrom corpus entry with A_1 = Q/r. Fitted once by
/// calibrate_coupling and frozen here.
inline constexpr double kCalibratedCoupling = 2.0;

struct SolutionFlags {
    bool vacuum = false;
    bool einstein_maxwell = false;
    bool flat = false;
    bool maxwell = false;
};

struct NamedSolution {
    std::string name;
    ParameterMap params;
    Signature signature;
    /// Row-major e^mu_i expression texts.
    std::vector<std::string> tetrad;
    /// A_i expression texts (empty when the solution carries no potential).
    std::vector<std::string> potential;
    /// Coupling constant for solutions with a potential.
    double coupling_k = kCalibratedCoupling;
    SolutionFlags flags;
    /// Sampling box per coordinate; the domain predicate may cut it further.
    std::vector<std::pair<double, double>> box;
    std::function<bool(std::span<const double>)> domain;
    std::string domain_description;

    int dim() const { return signature.dim(); }
    bool has_potential() const { return !potential.empty(); }
    bool in_domain(std::span<const double> x) const { return !domain || domain(x); }

    std::vector<Expr> tetrad_exprs() const;
    std::vector<Expr> potential_exprs() const;
    CoframeField coframe() const;
    /// 1 x dim row of A_i; throws when there is no potential.
    MatrixField potential_field() const;
    /// `count` points drawn from the box that satisfy the domain predicate.
    std::vector<std::vector<double>> sample_domain(int count, std::uint64_t seed) const;
};

NamedSolution minkowski(int dim = 4);
NamedSolution rindler();
NamedSolution schwarzschild(double M);
NamedSolution reissner_nordstrom(double M, double Q);
NamedSolution constant_F(double B);
/// Identity coframe plus an amplitude-bounded sparse polynomial of degree <= 3
/// in every entry; with_potential adds a random cubic A_i (first four
/// coordinates only). Nondegenerate on the unit box for amplitude < 1/dim.
NamedSolution random_polynomial(std::uint64_t seed, double amplitude, int dim = 4, bool with_potential = true);

/// Lookup by name: minkowski(dim), rindler, schwarzschild(M),
/// reissner_nordstrom(M, Q), constant_F(B), random_polynomial(seed, amplitude, dim).
/// Throws std::invalid_argument for unknown names or invalid parameters.
NamedSolution solution_by_name(const std::string& name, const ParameterMap& params);

struct SolutionInfo {
    std::string name;
    std::vector<std::string> parameters;
    std::string description;
};
std::vector<SolutionInfo> list_solutions();

/// Uniform doubles whose sequence is identical on every platform: the engine
/// is fully specified by the standard, the standard distributions are not.
class PortableRng {
public:
    explicit PortableRng(std::uint64_t seed);
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
};

}  // namespace vielbein
