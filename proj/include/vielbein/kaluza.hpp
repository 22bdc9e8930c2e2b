#pragma once

// The constrained five-dimensional lift of a tetrad and an electromagnetic
// potential: e^5 = dx^5 - k A_i dx^i, e^5_5 = 1, e^mu_5 = 0, nothing depends
// on x^5. The fifth frame and coordinate index is 4 in every array.

#include <span>
#include <string>
#include <vector>

#include "vielbein/field.hpp"
#include "vielbein/frame_geometry.hpp"
#include "vielbein/jbundle.hpp"
#include "vielbein/solutions.hpp"

namespace vielbein {

struct KaluzaConfig {
    CoframeField tetrad;  // signature (1, 3)
    MatrixField A;        // 1 x 4, A_i
    double k = kCalibratedCoupling;
};

/// Throws std::invalid_argument for solutions that are not 4D or carry no potential.
KaluzaConfig kaluza_config(const NamedSolution& sol);

/// 5 x 5 frame of signature (1, 4). Evaluate it with five seeded coordinates;
/// the fifth is ignored.
CoframeField lift_coframe(const KaluzaConfig& cfg);

struct FieldStrengthPoint {
    RealTensor Fij;    // Fij(a, b) = F_ab = d_b A_a - d_a A_b
    RealTensor Fmunu;  // F_{mu nu} = F_ji e^j_mu e^i_nu
    RealTensor Fup;    // F^{mu nu}
    RealTensor Fmix;   // F^mu_nu
    RealTensor dFup;   // dFup(a, b, i) = d_i F^{ab}
};

struct StressTensorPoint {
    RealTensor T;  // T(l, rho) = T^l_rho
};

/// Everything the Kaluza checks need at one base point.
struct KaluzaPoint {
    double k = 0.0;
    std::vector<double> A;
    CoframePoint cp4;
    SpinConnectionPoint sp4;  // the tetrad's own spin connection
    CurvaturePoint R4;
    FieldStrengthPoint F;
    CoframePoint cp5;
    SpinConnectionPoint sp5;
};

KaluzaPoint evaluate_kaluza(const KaluzaConfig& cfg, std::span<const double> x, double x5 = 0.0);

FieldStrengthPoint field_strength(const KaluzaConfig& cfg, std::span<const double> x);

/// T^l_rho = 1/4 e^l_rho F_ij F^ij + F^l_j F^j_i e^i_rho, Latin indices moved with g.
StressTensorPoint em_stress(const CoframePoint& cp4, const FieldStrengthPoint& F);

/// 1/4 eps eps e R (the 4D Einstein density) + 1/2 e k^2 T, indexed (l, rho).
RealTensor einstein_maxwell_residual(const KaluzaPoint& kp);
RealTensor einstein_maxwell_residual(const KaluzaConfig& cfg, std::span<const double> x);

/// 1/2 e k e^i_b (d_i F^{ab} + omega_i^a_h F^{hb} + omega_i^b_h F^{ah}), indexed by a.
RealTensor maxwell_residual(const KaluzaPoint& kp);
RealTensor maxwell_residual(const KaluzaConfig& cfg, std::span<const double> x);

/// The Maxwell residual divided by 1/2 e k: the frame components of div F.
RealTensor maxwell_divergence(const KaluzaPoint& kp);

/// Einstein density of the lifted 5D frame (unconstrained vacuum equations).
RealTensor lifted_vacuum_density(const KaluzaPoint& kp);

struct Discrepancy {
    std::string name;
    double value = 0.0;
};

struct DiscrepancyReport {
    std::vector<Discrepancy> entries;

    void add(std::string name, double value) { entries.push_back({std::move(name), value}); }
    double max() const;
    /// Throws std::out_of_range for unknown names.
    double at(const std::string& name) const;
};

/// Deviations of the 5D spin connection from its closed forms in terms of the
/// tetrad's own connection and F, plus the vortex tensor and x^5 independence.
DiscrepancyReport reduction_check(const KaluzaConfig& cfg, std::span<const double> x);
DiscrepancyReport reduction_check(const KaluzaPoint& kp, const KaluzaPoint& shifted);

/// Pairwise deviations along the chain from the constrained 5D equations to
/// the Einstein-Maxwell and Maxwell forms. Also reports the residual sizes.
DiscrepancyReport field_equation_chain_check(const KaluzaConfig& cfg, std::span<const double> x);
DiscrepancyReport field_equation_chain_check(const KaluzaPoint& kp);

/// Individual links of the chain, exposed for tests.
struct ChainTerms {
    RealTensor einstein_5d;  // constrained 5D block rows l, rho < 4
    RealTensor einstein_expanded;
    RealTensor maxwell_5d;  // constrained 5D block, rho = 5 column
    RealTensor maxwell_expanded;
    RealTensor maxwell_saturated;  // e^a_l contracted with maxwell_expanded
};
ChainTerms field_equation_chain_terms(const KaluzaPoint& kp);

/// Multiplier c with e^a_l (expanded 5D Maxwell block)^l = c * maxwell_residual.
inline constexpr double kMaxwellSaturationFactor = 1.0;

/// Least-squares k from einstein_maxwell_residual = 0 over `points`; cfg.k is ignored.
double calibrate_coupling(const KaluzaConfig& cfg, std::span<const std::vector<double>> points);

/// Element of the restricted gauge group: a local Lorentz map of the tetrad,
/// a base coordinate change and the fiber shift x^5 -> x^5 + f(x).
struct RestrictedGauge {
    MatrixField Lambda;     // 4 x 4
    MatrixField coord_map;  // 1 x 4
    ScalarField f;
};

RestrictedGauge random_restricted_gauge(PortableRng& rng, CoordinateChange kind);
/// The same element expressed around `center`: fields are evaluated at
/// x - center and the coordinate map becomes center + map(x - center). Random
/// elements are sized for the unit box; this moves them to other points.
RestrictedGauge centred_gauge(const RestrictedGauge& g, std::span<const double> center);

/// The lifted 5D gauge element (block Lambda, map (xbar(x), x^5 + f(x))).
GaugeElement lift_gauge(const RestrictedGauge& g);

/// Transforms the configuration at `x` both as 4D data (tetrad, A, F) and as
/// the lifted 5D frame, and reports: preservation of the constraint, agreement
/// of the two routes, the gauge law of F, reduction covariance, and invariance
/// of both residuals. `potential_sign` multiplies the df/k term of the
/// potential law; anything but +1 is a deliberate corruption.
DiscrepancyReport restricted_gauge_check(const KaluzaConfig& cfg, const RestrictedGauge& g,
                                         std::span<const double> x, double potential_sign = 1.0);

}  // namespace vielbein
