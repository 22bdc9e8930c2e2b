// Acceptance gate: one PASS/FAIL line per criterion, tolerances pinned below.
//
// Criterion 9 (the lifted Reissner-Nordstrom frame solving the unconstrained
// 5D vacuum equations) does not hold: the (5, 5) component of the 5D density
// is proportional to F_ij F^ij. It is evaluated literally and reported as
// FAIL; the exit status treats that one outcome as known, so any other
// failure, or criterion 9 unexpectedly passing, makes the gate fail.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "vielbein/frame_geometry.hpp"
#include "vielbein/jbundle.hpp"
#include "vielbein/kaluza.hpp"
#include "vielbein/solutions.hpp"

using namespace vielbein;

namespace {

constexpr double kTorsionTol = 1e-10;
constexpr double kTorsionSeconds = 10.0;
constexpr double kOmegaOracleTol = 1e-9;
constexpr double kRiemannOracleTol = 1e-8;
constexpr double kThetaTol = 1e-9;
constexpr double kIdentityTol = 1e-10;
constexpr double kVacuumTol = 1e-8;
constexpr double kKretschmannRelTol = 1e-7;
constexpr double kReductionTol = 1e-10;
constexpr double kEinsteinMaxwellTol = 1e-7;
constexpr double kMaxwellTol = 1e-8;
constexpr double kChainTol = 1e-9;
constexpr double kLiftedVacuumTol = 1e-7;
constexpr double kRestrictedGaugeTol = 1e-9;

const std::set<int> kKnownUnattainable{9};

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// Largest value alongside its tolerance, e.g. "max 3.1e-15 < 1e-10".
std::string against(double value, double tol) { return "max " + fmt(value) + (value < tol ? " < " : " >= ") + fmt(tol); }

const CoordinateChange kKinds[] = {CoordinateChange::identity, CoordinateChange::affine, CoordinateChange::nonlinear};

Outcome torsion_round_trip() {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int m : {4, 5})
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            const auto sol = random_polynomial(10000 * m + seed, 0.15, m, false);
            const auto cp = evaluate_coframe(sol.coframe(), sol.sample_domain(1, seed)[0]);
            worst = std::max(worst, max_abs(torsion_residual(cp, spin_connection(cp))));
        }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {worst < kTorsionTol && seconds < kTorsionSeconds,
            against(worst, kTorsionTol) + ", " + fmt(seconds) + " s (limit " + fmt(kTorsionSeconds) + " s)"};
}

Outcome oracle_equivalence() {
    double omega_dev = 0.0, riemann_dev = 0.0;
    const auto check = [&](const CoframeField& field, const std::vector<double>& x) {
        const auto cp = evaluate_coframe(field, x);
        const auto sp = spin_connection(cp);
        const auto o = coordinate_oracle(field, x);
        omega_dev = std::max(omega_dev, max_abs_diff(sp.omega, omega_from_christoffel(cp, o)));
        riemann_dev = std::max(riemann_dev, max_abs_diff(frame_to_coordinate_riemann(cp, curvature(sp)), o.Riemann));
    };
    const auto sch = schwarzschild(1.0);
    for (const auto& x : sch.sample_domain(10, 17)) check(sch.coframe(), x);
    for (std::uint64_t n = 0; n < 20; ++n) {
        const auto sol = random_polynomial(2000 + n, 0.15, n % 2 ? 5 : 4, false);
        check(sol.coframe(), sol.sample_domain(1, n)[0]);
    }
    return {omega_dev < kOmegaOracleTol && riemann_dev < kRiemannOracleTol,
            "omega " + against(omega_dev, kOmegaOracleTol) + ", Riemann " + against(riemann_dev, kRiemannOracleTol)};
}

Outcome theta_invariance() {
    PortableRng rng(2024);
    double worst = 0.0;
    int count = 0;
    for (int m : {4, 5}) {
        const Signature sig{1, m - 1};
        // Two holonomic sections of random frames and three fully random section points.
        std::vector<SectionPoint> configs;
        for (std::uint64_t s = 0; s < 2; ++s) {
            const auto sol = random_polynomial(3000 + 10 * m + s, 0.1, m, false);
            configs.push_back(holonomic_section(sol.coframe(), sol.sample_domain(1, s)[0]));
        }
        for (int s = 0; s < 3; ++s) configs.push_back(random_section_point(sig, rng));
        for (const auto& config : configs)
            for (int n = 0; n < 50; ++n) {
                const auto g = random_gauge_element(sig, rng, kKinds[n % 3]);
                worst = std::max(worst, theta_gauge_invariance_check(config, g));
                ++count;
            }
    }
    return {worst < kThetaTol, against(worst, kThetaTol) + " over " + std::to_string(count) + " (element, configuration) pairs"};
}

Outcome omega_domega_identity() {
    PortableRng rng(77);
    double worst = 0.0;
    for (int m : {4, 5})
        for (int n = 0; n < 100; ++n) worst = std::max(worst, omega_domega_identity_check(random_section_point({1, m - 1}, rng)));
    return {worst < kIdentityTol, against(worst, kIdentityTol) + " over 100 trials each at m=4, 5"};
}

Outcome schwarzschild_vacuum() {
    const auto sch = schwarzschild(1.0);
    double density = 0.0, kretsch = 0.0;
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) {
            const double r = 3.0 + 7.0 * a / 4.0;
            const double theta = 0.3 + (std::numbers::pi - 0.6) * b / 4.0;
            const std::vector<double> x{0.0, r, theta, 0.7};
            const auto cp = evaluate_coframe(sch.coframe(), x);
            const auto R = curvature(spin_connection(cp));
            density = std::max(density, max_abs(einstein_density(cp, R)));
            const double expected = 48.0 / std::pow(r, 6);
            kretsch = std::max(kretsch, std::fabs(kretschmann(cp, R) - expected) / expected);
        }
    return {density < kVacuumTol && kretsch < kKretschmannRelTol,
            "density " + against(density, kVacuumTol) + ", Kretschmann relative " + against(kretsch, kKretschmannRelTol)};
}

Outcome reduction_formulas() {
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto sol = random_polynomial(4000 + seed, 0.12);
        worst = std::max(worst, reduction_check(kaluza_config(sol), sol.sample_domain(1, seed)[0]).max());
    }
    return {worst < kReductionTol, against(worst, kReductionTol) + " over 50 configurations"};
}

Outcome einstein_maxwell() {
    const std::vector<double> radii{2.5, 3.0, 3.5, 5.0, 6.0, 7.5, 9.0, 11.0, 14.0, 20.0};
    const auto point = [](double r) { return std::vector<double>{0.0, r, 1.1, 0.4}; };
    auto cfg = kaluza_config(reissner_nordstrom(1.0, 0.5));
    const std::vector<std::vector<double>> calibration{point(4.0)};
    const double k = calibrate_coupling(cfg, calibration);
    double em = 0.0, mx = 0.0;
    for (double Q : {0.5, 0.3}) {
        cfg = kaluza_config(reissner_nordstrom(1.0, Q));
        cfg.k = k;
        for (double r : radii) {
            const auto kp = evaluate_kaluza(cfg, point(r));
            em = std::max(em, max_abs(einstein_maxwell_residual(kp)));
            mx = std::max(mx, max_abs(maxwell_residual(kp)));
        }
    }
    return {em < kEinsteinMaxwellTol && mx < kMaxwellTol,
            "k = " + fmt(k) + " from r=4; Einstein-Maxwell " + against(em, kEinsteinMaxwellTol) + ", Maxwell " +
                against(mx, kMaxwellTol)};
}

Outcome chain() {
    double off_shell = 0.0, on_shell = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto sol = random_polynomial(5000 + seed, 0.15);
        off_shell = std::max(off_shell, field_equation_chain_check(kaluza_config(sol), sol.sample_domain(1, seed)[0]).max());
    }
    const auto rn = reissner_nordstrom(1.0, 0.5);
    for (const auto& x : rn.sample_domain(10, 23)) on_shell = std::max(on_shell, field_equation_chain_check(kaluza_config(rn), x).max());
    return {off_shell < kChainTol && on_shell < kChainTol,
            "random " + against(off_shell, kChainTol) + ", Reissner-Nordstrom " + against(on_shell, kChainTol)};
}

Outcome lifted_vacuum(double& constrained_out) {
    const auto rn = reissner_nordstrom(1.0, 0.5);
    double full = 0.0, constrained = 0.0;
    for (const auto& x : rn.sample_domain(10, 29)) {
        auto V = lifted_vacuum_density(evaluate_kaluza(kaluza_config(rn), x));
        full = std::max(full, max_abs(V));
        V(4, 4) = 0.0;
        constrained = std::max(constrained, max_abs(V));
    }
    constrained_out = constrained;
    return {full < kLiftedVacuumTol, "unconstrained 5D density " + against(full, kLiftedVacuumTol)};
}

Outcome restricted_gauge() {
    PortableRng rng(555);
    const auto rn = reissner_nordstrom(1.0, 0.5);
    double worst = 0.0;
    for (int n = 0; n < 30; ++n) {
        const auto g = random_restricted_gauge(rng, kKinds[n % 3]);
        if (n % 5 == 4) {
            const auto x = rn.sample_domain(1, static_cast<std::uint64_t>(n))[0];
            worst = std::max(worst, restricted_gauge_check(kaluza_config(rn), centred_gauge(g, x), x).max());
        } else {
            const auto sol = random_polynomial(6000 + static_cast<std::uint64_t>(n), 0.12);
            worst = std::max(worst, restricted_gauge_check(kaluza_config(sol), g, sol.sample_domain(1, n)[0]).max());
        }
    }
    return {worst < kRestrictedGaugeTol, against(worst, kRestrictedGaugeTol) + " over 30 elements"};
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(VIELBEIN_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome cli_contract() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "vielbein_acceptance_cli";
    fs::remove_all(dir);
    const auto config = [](const char* name) { return std::string(VIELBEIN_CONFIGS) + "/" + name; };
    const auto out = [&](const char* sub) { return " --csv --out " + (dir / sub).string(); };

    bool ok = true;
    std::string detail;
    const int r1 = run_cli("run " + config("random_identities.json") + out("1"));
    const int r2 = run_cli("run " + config("random_identities.json") + out("2"));
    const std::string report = slurp(dir / "1" / "report.json");
    const bool same = !report.empty() && report == slurp(dir / "2" / "report.json") &&
                      slurp(dir / "1" / "points.csv") == slurp(dir / "2" / "points.csv");
    ok = ok && r1 == 0 && r2 == 0 && same;
    detail += same ? "reports byte-identical" : "reports differ";

    struct Case {
        const char* file;
        int expected;
    };
    for (const Case c : {Case{"schwarzschild_vacuum.json", 0}, Case{"random_identities_corrupted.json", 1},
                         Case{"malformed.json", 2}, Case{"inside_horizon.json", 3}}) {
        const int code = run_cli("run " + config(c.file) + out("codes"));
        ok = ok && code == c.expected;
        detail += std::string(", ") + c.file + " -> " + std::to_string(code);
    }
    fs::remove_all(dir);
    return {ok, detail};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    double constrained = 0.0;
    const std::vector<Criterion> criteria{
        {1, "torsion round trip", torsion_round_trip},
        {2, "spin connection and curvature vs coordinate oracle", oracle_equivalence},
        {3, "gauge invariance of the Theta density", theta_invariance},
        {4, "omega d(omega) identity on random section points", omega_domega_identity},
        {5, "Schwarzschild vacuum and Kretschmann", schwarzschild_vacuum},
        {6, "5D spin connection closed forms", reduction_formulas},
        {7, "Einstein-Maxwell with calibrated coupling", einstein_maxwell},
        {8, "5D equations to Einstein-Maxwell chain", chain},
        {9, "lifted Reissner-Nordstrom solves unconstrained 5D vacuum", [&] { return lifted_vacuum(constrained); }},
        {10, "restricted gauge covariance", restricted_gauge},
        {11, "CLI determinism and exit codes", cli_contract},
    };

    int passed = 0, unexpected = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        passed += o.pass;
        const bool known = kKnownUnattainable.count(c.id) > 0;
        if (o.pass == known) ++unexpected;
        std::printf("[%2d] %s  %s: %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
        if (c.id == 9)
            std::printf("     info: only the (5,5) component, proportional to F_ij F^ij, is nonzero; "
                        "all other components %s\n",
                        against(constrained, kLiftedVacuumTol).c_str());
    }
    std::printf("%d/%zu criteria pass; %s\n", passed, criteria.size(),
                unexpected ? "UNEXPECTED outcome(s) present" : "criterion 9 fails as analysed, all others pass");
    return unexpected ? 1 : 0;
}
