#include "vielbein/solutions.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace vielbein {

PortableRng::PortableRng(std::uint64_t seed) : engine_(seed) {}

double PortableRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t PortableRng::below(std::uint64_t n) { return engine_() % n; }

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> diagonal(const std::vector<std::string>& d) {
    const std::size_t m = d.size();
    std::vector<std::string> out(m * m, "0");
    for (std::size_t a = 0; a < m; ++a) out[a * m + a] = d[a];
    return out;
}

std::vector<std::pair<double, double>> spherical_box(double r_lo, double r_hi) {
    return {{0.0, 1.0}, {r_lo, r_hi}, {0.3, std::numbers::pi - 0.3}, {0.0, 2.0 * std::numbers::pi}};
}

constexpr double kAxisMargin = 0.1;

// Sum of `terms` random monomials of degree <= 3 in x1..x_vars, coefficients
// scaled so the whole sum is bounded by `bound` on the unit box.
std::string random_cubic(PortableRng& rng, int vars, int terms, double bound) {
    std::vector<double> c(static_cast<std::size_t>(terms));
    std::vector<std::string> mono(static_cast<std::size_t>(terms));
    double total = 0.0;
    for (int t = 0; t < terms; ++t) {
        c[static_cast<std::size_t>(t)] = rng.uniform(-1.0, 1.0);
        total += std::fabs(c[static_cast<std::size_t>(t)]);
        const int degree = static_cast<int>(rng.below(4));
        std::string m;
        for (int d = 0; d < degree; ++d) m += "*x" + std::to_string(1 + rng.below(static_cast<std::uint64_t>(vars)));
        mono[static_cast<std::size_t>(t)] = m;
    }
    std::string s;
    for (int t = 0; t < terms; ++t) {
        if (t) s += " + ";
        s += "(" + num(bound * c[static_cast<std::size_t>(t)] / total) + ")" + mono[static_cast<std::size_t>(t)];
    }
    return s;
}

double param(const ParameterMap& p, const std::string& name, double fallback) {
    const auto it = p.find(name);
    return it == p.end() ? fallback : it->second;
}

}  // namespace

std::vector<Expr> NamedSolution::tetrad_exprs() const {
    std::vector<Expr> out;
    for (const auto& t : tetrad) out.push_back(parse(t, dim()));
    return out;
}

std::vector<Expr> NamedSolution::potential_exprs() const {
    std::vector<Expr> out;
    for (const auto& t : potential) out.push_back(parse(t, dim()));
    return out;
}

CoframeField NamedSolution::coframe() const {
    return {signature, expression_matrix(dim(), dim(), tetrad_exprs(), params)};
}

MatrixField NamedSolution::potential_field() const {
    if (!has_potential()) throw std::logic_error(name + " carries no potential");
    return expression_matrix(1, static_cast<int>(potential.size()), potential_exprs(), params);
}

std::vector<std::vector<double>> NamedSolution::sample_domain(int count, std::uint64_t seed) const {
    PortableRng rng(seed);
    std::vector<std::vector<double>> pts;
    int attempts = 0;
    while (static_cast<int>(pts.size()) < count) {
        if (++attempts > 1000 * (count + 1)) throw std::runtime_error("could not sample the domain of " + name);
        std::vector<double> x;
        for (const auto& [lo, hi] : box) x.push_back(rng.uniform(lo, hi));
        if (in_domain(x)) pts.push_back(std::move(x));
    }
    return pts;
}

NamedSolution minkowski(int dim) {
    if (dim < 2 || dim > kMaxDim) throw std::invalid_argument("minkowski: dimension must be in 2..8");
    NamedSolution s;
    s.name = "minkowski";
    s.params = {};
    s.signature = {1, dim - 1};
    s.tetrad = diagonal(std::vector<std::string>(static_cast<std::size_t>(dim), "1"));
    if (dim == 4) s.potential = {"0", "0", "0", "0"};
    s.flags = {true, dim == 4, true, dim == 4};
    s.box.assign(static_cast<std::size_t>(dim), {-1.0, 1.0});
    s.domain_description = "everywhere";
    return s;
}

NamedSolution rindler() {
    NamedSolution s;
    s.name = "rindler";
    s.signature = {1, 3};
    s.tetrad = diagonal({"x2", "1", "1", "1"});
    s.flags = {true, false, true, false};
    s.box = {{-1.0, 1.0}, {0.5, 3.0}, {-1.0, 1.0}, {-1.0, 1.0}};
    s.domain = [](std::span<const double> x) { return x[1] > 0.25; };
    s.domain_description = "x2 > 0.25";
    return s;
}

NamedSolution schwarzschild(double M) {
    if (!(M > 0.0)) throw std::invalid_argument("schwarzschild: M must be positive");
    NamedSolution s;
    s.name = "schwarzschild";
    s.params = {{"M", M}};
    s.signature = {1, 3};
    s.tetrad = diagonal({"sqrt(1-2*M/x2)", "1/sqrt(1-2*M/x2)", "x2", "x2*sin(x3)"});
    s.potential = {"0", "0", "0", "0"};
    s.flags = {true, true, false, true};
    const double r_min = 2.0 * M + 0.5;
    s.box = spherical_box(r_min, r_min + 8.0);
    s.domain = [r_min](std::span<const double> x) { return x[1] > r_min && std::sin(x[2]) > kAxisMargin; };
    s.domain_description = "r > 2M + 0.5, sin(theta) > 0.1";
    return s;
}

NamedSolution reissner_nordstrom(double M, double Q) {
    if (!(M > 0.0)) throw std::invalid_argument("reissner_nordstrom: M must be positive");
    if (Q * Q > M * M) throw std::invalid_argument("reissner_nordstrom: requires Q^2 <= M^2");
    NamedSolution s;
    s.name = "reissner_nordstrom";
    s.params = {{"M", M}, {"Q", Q}};
    s.signature = {1, 3};
    const std::string f = "(1-2*M/x2+Q^2/x2^2)";
    s.tetrad = diagonal({"sqrt" + f, "1/sqrt" + f, "x2", "x2*sin(x3)"});
    s.potential = {"Q/x2", "0", "0", "0"};
    s.flags = {Q == 0.0, true, false, true};
    const double r_min = M + std::sqrt(M * M - Q * Q) + 0.5;
    s.box = spherical_box(r_min, r_min + 8.0);
    s.domain = [r_min](std::span<const double> x) { return x[1] > r_min && std::sin(x[2]) > kAxisMargin; };
    s.domain_description = "r > r_+ + 0.5, sin(theta) > 0.1";
    return s;
}

NamedSolution constant_F(double B) {
    NamedSolution s = minkowski(4);
    s.name = "constant_F";
    s.params = {{"B", B}};
    s.potential = {"B*x2", "0", "0", "0"};
    s.flags = {false, B == 0.0, true, true};
    return s;
}

NamedSolution random_polynomial(std::uint64_t seed, double amplitude, int dim, bool with_potential) {
    if (dim < 2 || dim > kMaxDim) throw std::invalid_argument("random_polynomial: dimension must be in 2..8");
    if (!(amplitude >= 0.0) || amplitude * dim >= 1.0)
        throw std::invalid_argument("random_polynomial: amplitude must lie in [0, 1/dim)");
    PortableRng rng(seed);
    NamedSolution s;
    s.name = "random_polynomial";
    s.params = {};
    s.signature = {1, dim - 1};
    for (int mu = 0; mu < dim; ++mu)
        for (int i = 0; i < dim; ++i)
            s.tetrad.push_back((mu == i ? "1 + " : "") + random_cubic(rng, dim, 3, amplitude));
    if (with_potential) {
        const int vars = std::min(dim, 4);
        for (int i = 0; i < vars; ++i) s.potential.push_back(random_cubic(rng, vars, 4, 0.5));
    }
    s.box.assign(static_cast<std::size_t>(dim), {-1.0, 1.0});
    s.domain_description = "unit box";
    return s;
}

NamedSolution solution_by_name(const std::string& name, const ParameterMap& p) {
    if (name == "minkowski") return minkowski(static_cast<int>(param(p, "dim", 4)));
    if (name == "rindler") return rindler();
    if (name == "schwarzschild") return schwarzschild(param(p, "M", 1.0));
    if (name == "reissner_nordstrom") return reissner_nordstrom(param(p, "M", 1.0), param(p, "Q", 0.5));
    if (name == "constant_F") return constant_F(param(p, "B", 1.0));
    if (name == "random_polynomial") {
        const double seed = param(p, "seed", 1.0);
        if (seed < 0 || seed != std::floor(seed)) throw std::invalid_argument("random_polynomial: seed must be a non-negative integer");
        return random_polynomial(static_cast<std::uint64_t>(seed), param(p, "amplitude", 0.1),
                                 static_cast<int>(param(p, "dim", 4)), param(p, "with_potential", 1.0) != 0.0);
    }
    throw std::invalid_argument("unknown solution '" + name + "'");
}

std::vector<SolutionInfo> list_solutions() {
    return {
        {"minkowski", {"dim"}, "flat identity coframe, signature (1, dim-1)"},
        {"rindler", {}, "flat metric in accelerated coordinates, e^1 = x2 dx1"},
        {"schwarzschild", {"M"}, "static vacuum black hole, tetrad diag(sqrt f, 1/sqrt f, r, r sin theta)"},
        {"reissner_nordstrom", {"M", "Q"}, "charged black hole with A_1 = Q/r, k = 2"},
        {"constant_F", {"B"}, "Minkowski with A_1 = B x2 (uniform field strength)"},
        {"random_polynomial", {"seed", "amplitude", "dim", "with_potential"},
         "identity plus a bounded random cubic perturbation, random cubic potential"},
    };
}

}  // namespace vielbein
