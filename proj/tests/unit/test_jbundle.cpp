#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "vielbein/errors.hpp"
#include "vielbein/jbundle.hpp"
#include "vielbein/solutions.hpp"

namespace vielbein {
namespace {

MatrixField matrix_of(int rows, int cols, const std::vector<std::string>& entries, int dim) {
    std::vector<Expr> exprs;
    for (const auto& t : entries) exprs.push_back(parse(t, dim));
    return expression_matrix(rows, cols, exprs, {});
}

std::vector<std::string> zeros(int m) { return std::vector<std::string>(static_cast<std::size_t>(m * m), "0"); }

TEST(Gauge, IdentityLeavesEverythingAlone) {
    const auto sol = random_polynomial(3, 0.15);
    const std::vector<double> x{0.1, -0.3, 0.4, 0.2};
    const auto s = holonomic_section(sol.coframe(), x);
    const auto g = identity_gauge(4);
    const auto cp = gauge_transform_frame(s.cp, g);
    const auto sp = gauge_transform_omega(s.sp, s.cp, g);
    EXPECT_LT(max_abs_diff(cp.e, s.cp.e), 1e-15);
    EXPECT_LT(max_abs_diff(cp.de, s.cp.de), 1e-15);
    EXPECT_LT(max_abs_diff(sp.omega, s.sp.omega), 1e-15);
    EXPECT_LT(max_abs_diff(*sp.domega, *s.sp.domega), 1e-14);
}

TEST(Gauge, ConstantBoostPreservesMetric) {
    auto gen = zeros(4);
    gen[0 * 4 + 1] = "0.3";
    const GaugeElement g{lorentz_exponential({1, 3}, matrix_of(4, 4, gen, 4)), identity_gauge(4).coord_map};
    const std::vector<double> x{0.0, 5.0, 1.0, 0.5};
    const auto s = holonomic_section(schwarzschild(1.0).coframe(), x);
    const auto gp = evaluate_gauge(g, x);
    EXPECT_LT(lorentz_defect(gp, {1, 3}), 1e-14);
    EXPECT_NEAR(gp.Lambda(0, 0).value(), std::cosh(0.3), 1e-14);
    EXPECT_NEAR(std::fabs(gp.Lambda(0, 1).value()), std::sinh(0.3), 1e-14);
    EXPECT_LT(max_abs_diff(metric(gauge_transform_frame(s.cp, gp)), metric(s.cp)), 1e-12);
}

TEST(Gauge, DoublingCoordinatesHalvesTheFrame) {
    const GaugeElement g{identity_matrix(4), matrix_of(1, 4, {"2*x1", "2*x2", "2*x3", "2*x4"}, 4)};
    const auto s = holonomic_section(minkowski(4).coframe(), std::vector<double>{0.1, 0.2, 0.3, 0.4});
    const auto cp = gauge_transform_frame(s.cp, g);
    for (int a = 0; a < 4; ++a) {
        EXPECT_DOUBLE_EQ(cp.x[static_cast<std::size_t>(a)], 0.2 * (a + 1));
        for (int b = 0; b < 4; ++b) EXPECT_DOUBLE_EQ(cp.e(a, b), a == b ? 0.5 : 0.0);
    }
    EXPECT_DOUBLE_EQ(evaluate_gauge(g, s.cp.x).detJ, 16.0);
}

TEST(Gauge, SingularMapIsRejected) {
    const GaugeElement g{identity_matrix(4), matrix_of(1, 4, {"x1", "x1", "x3", "x4"}, 4)};
    const std::vector<double> x{0.1, 0.2, 0.3, 0.4};
    EXPECT_THROW(evaluate_gauge(g, x), DegenerateFrameError);
}

TEST(Gauge, RotationByCoordinateAngle) {
    auto gen = zeros(4);
    gen[2 * 4 + 3] = "x1";
    const GaugeElement g{lorentz_exponential({1, 3}, matrix_of(4, 4, gen, 4)), identity_gauge(4).coord_map};
    const std::vector<double> x{0.7, 0.0, 0.0, 0.0};
    const auto s = holonomic_section(minkowski(4).coframe(), x);
    const auto sp = gauge_transform_omega(s.sp, s.cp, g);
    EXPECT_NEAR(sp.omega(0, 2, 3), -1.0, 1e-13);
    EXPECT_NEAR(sp.omega(0, 3, 2), 1.0, 1e-13);
    auto rest = sp.omega;
    rest(0, 2, 3) = rest(0, 3, 2) = 0.0;
    EXPECT_LT(max_abs(rest), 1e-13);
    EXPECT_LT(max_abs(curvature(sp).R), 1e-13);
}

TEST(Gauge, ConstantLambdaKeepsFlatConnectionZero) {
    PortableRng rng(11);
    const auto g = random_gauge_element({1, 3}, rng, CoordinateChange::affine, true);
    const auto s = holonomic_section(minkowski(4).coframe(), std::vector<double>{0.2, 0.1, -0.4, 0.3});
    const auto sp = gauge_transform_omega(s.sp, s.cp, g);
    EXPECT_LT(max_abs(sp.omega), 1e-14);
}

TEST(Gauge, RandomLambdaIsLorentz) {
    PortableRng rng(5);
    for (int m : {3, 4, 5}) {
        const Signature sig{1, m - 1};
        for (int n = 0; n < 10; ++n) {
            const auto g = random_gauge_element(sig, rng, CoordinateChange::nonlinear);
            std::vector<double> x;
            for (int a = 0; a < m; ++a) x.push_back(rng.uniform(-1.0, 1.0));
            EXPECT_LT(lorentz_defect(evaluate_gauge(g, x), sig), 1e-13);
        }
    }
}

// Transforming (e, omega) and then computing omega from the new frame agrees
// with transforming omega directly, and E follows its own gauge law.
TEST(Gauge, SpinConnectionLawCommutesWithFrameLaw) {
    PortableRng rng(21);
    for (int m : {4, 5}) {
        const Signature sig{1, m - 1};
        const auto sol = random_polynomial(30 + static_cast<std::uint64_t>(m), 0.1, m);
        for (const auto& x : sol.sample_domain(4, 2)) {
            const auto s = holonomic_section(sol.coframe(), x);
            for (auto kind : {CoordinateChange::identity, CoordinateChange::affine, CoordinateChange::nonlinear}) {
                const auto g = random_gauge_element(sig, rng, kind);
                const auto gp = evaluate_gauge(g, x);
                const auto cp = gauge_transform_frame(s.cp, gp);
                const auto Eb = gauge_transform_E(s.cp, gp);
                EXPECT_LT(max_abs_diff(Eb, cp.E), 1e-12);
                const auto direct = gauge_transform_omega(s.sp, gp);
                EXPECT_LT(max_abs_diff(detail::omega_from_frame(sig, cp.e, Eb), direct.omega), 1e-11);
                EXPECT_LT(max_abs(torsion_residual(cp, direct)), 1e-11);
            }
        }
    }
}

// Curvature is homogeneous: Rbar = Jinv Jinv Lambda Lambda R, also off-shell.
TEST(Gauge, CurvatureTransformsTensorially) {
    PortableRng rng(8);
    for (int m : {4, 5}) {
        const Signature sig{1, m - 1};
        for (int n = 0; n < 5; ++n) {
            const auto s = random_section_point(sig, rng);
            const auto g = random_gauge_element(sig, rng, CoordinateChange::nonlinear);
            const auto gp = evaluate_gauge(g, s.cp.x);
            const auto R = curvature(s.sp).R;
            const auto Rb = curvature(gauge_transform_omega(s.sp, gp)).R;
            const auto L = gp.lambda_values();
            const auto J = gp.jinv_values();
            double worst = 0.0;
            for (int j = 0; j < m; ++j)
                for (int i = 0; i < m; ++i)
                    for (int l = 0; l < m; ++l)
                        for (int t = 0; t < m; ++t) {
                            double acc = 0.0;
                            for (int a = 0; a < m; ++a)
                                for (int b = 0; b < m; ++b)
                                    for (int c = 0; c < m; ++c)
                                        for (int d = 0; d < m; ++d)
                                            acc += J(a, j) * J(b, i) * L(l, c) * L(t, d) * R(a, b, c, d);
                            worst = std::max(worst, std::fabs(acc - Rb(j, i, l, t)));
                        }
            EXPECT_LT(worst, 1e-10) << "m=" << m;
        }
    }
}

TEST(Section, HolonomicSectionsAnnihilateContactAndKinematics) {
    for (int m : {4, 5}) {
        const auto sol = random_polynomial(50 + static_cast<std::uint64_t>(m), 0.1, m);
        for (const auto& x : sol.sample_domain(3, 4)) {
            const auto s = holonomic_section(sol.coframe(), x);
            EXPECT_LT(max_abs(contact_pullback(s)), 1e-12);
            EXPECT_LT(max_abs(el_residual_A(s)), 1e-12);
        }
    }
    PortableRng rng(2);
    const auto s = random_section_point({1, 3}, rng);
    EXPECT_GT(max_abs(contact_pullback(s)), 1e-2);
    EXPECT_GT(max_abs(el_residual_A(s)), 1e-2);
}

TEST(Theta, VanishesOnFlatAndVacuum) {
    const auto flat = holonomic_section(minkowski(4).coframe(), std::vector<double>{0.1, 0.2, 0.3, 0.4});
    EXPECT_EQ(theta_density(flat), 0.0);
    const auto sch = schwarzschild(1.0);
    for (const auto& x : sch.sample_domain(5, 1))
        EXPECT_LT(std::fabs(theta_density(holonomic_section(sch.coframe(), x))), 1e-12);
}

TEST(Theta, IsMinusHalfDensitizedScalarCurvature) {
    for (int m : {3, 4, 5}) {
        const auto sol = random_polynomial(70 + static_cast<std::uint64_t>(m), 0.1, m);
        for (const auto& x : sol.sample_domain(3, 6)) {
            const auto s = holonomic_section(sol.coframe(), x);
            const double Rs = scalar_curvature(s.cp, curvature(s.sp));
            EXPECT_NEAR(theta_density(s), -0.5 * s.cp.det * Rs, 1e-11 * (1.0 + std::fabs(Rs)));
        }
    }
}

TEST(Theta, GaugeInvariantOffShell) {
    PortableRng rng(101);
    const Signature sig{1, 3};
    const CoordinateChange kinds[] = {CoordinateChange::identity, CoordinateChange::affine, CoordinateChange::nonlinear};
    for (int n = 0; n < 50; ++n) {
        const auto s = random_section_point(sig, rng);
        const auto g = random_gauge_element(sig, rng, kinds[n % 3]);
        EXPECT_LT(theta_gauge_invariance_check(s, g), 1e-10) << "element " << n;
    }
}

TEST(Theta, GaugeInvariantAwayFromTheUnitBox) {
    PortableRng rng(303);
    const auto sch = schwarzschild(1.0);
    for (const auto& x : sch.sample_domain(5, 11)) {
        const auto s = holonomic_section(sch.coframe(), x);
        const auto g = centred_gauge(random_gauge_element(sch.signature, rng, CoordinateChange::nonlinear), x);
        EXPECT_LT(theta_gauge_invariance_check(s, g), 1e-10);
    }
}

TEST(Theta, CorruptedGaugeLawIsNoticed) {
    PortableRng rng(7);
    const Signature sig{1, 3};
    const auto s = random_section_point(sig, rng);
    const auto g = random_gauge_element(sig, rng, CoordinateChange::affine);
    EXPECT_GT(theta_gauge_invariance_check(s, g, -1.0), 1e-3);
}

TEST(Identity, OmegaDOmegaRewrite) {
    PortableRng rng(13);
    for (int m : {4, 5}) {
        for (int n = 0; n < 5; ++n) {
            const auto s = random_section_point({1, m - 1}, rng);
            EXPECT_LT(omega_domega_identity_check(s), 1e-11) << "m=" << m;
        }
    }
}

TEST(EulerLagrange, DynamicalBlockIsEinsteinDensity) {
    for (int m : {4, 5}) {
        const auto sol = random_polynomial(90 + static_cast<std::uint64_t>(m), 0.1, m);
        for (const auto& x : sol.sample_domain(3, 3)) {
            const auto s = holonomic_section(sol.coframe(), x);
            const auto D = einstein_density(s.cp, curvature(s.sp));
            EXPECT_LT(max_abs_diff(el_residual_B(s), D), 1e-11 * (1.0 + max_abs(D)));
        }
    }
}

TEST(EulerLagrange, SchwarzschildIsOnShell) {
    const auto sch = schwarzschild(1.0);
    for (const auto& x : sch.sample_domain(4, 17)) {
        const auto s = holonomic_section(sch.coframe(), x);
        EXPECT_LT(max_abs(el_residual_B(s)), 1e-11);
        EXPECT_LT(max_abs(el_residual_A(s)), 1e-12);
    }
}

TEST(EulerLagrange, NeedsDerivativesOfOmega) {
    PortableRng rng(1);
    auto s = random_section_point({1, 3}, rng);
    s.sp.domega.reset();
    EXPECT_THROW(el_residual_B(s), MissingDerivativesError);
    EXPECT_THROW(theta_density(s), MissingDerivativesError);
}

}  // namespace
}  // namespace vielbein
