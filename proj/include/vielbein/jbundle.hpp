#pragma once

// Gauge transformations (local Lorentz maps plus coordinate changes) and the
// variational objects built on the (e, omega) chart: contact forms, the
// Theta density and the two Euler-Lagrange blocks.

#include <cstdint>
#include <span>
#include <vector>

#include "vielbein/field.hpp"
#include "vielbein/frame_geometry.hpp"
#include "vielbein/solutions.hpp"

namespace vielbein {

/// Lambda^mu_nu(x) valued in SO(p,q) and a coordinate change x -> xbar(x).
/// Both are fields of the old coordinates x.
struct GaugeElement {
    MatrixField Lambda;     // m x m
    MatrixField coord_map;  // 1 x m
};

GaugeElement identity_gauge(int m);

/// A gauge element evaluated at a point, as first-order jets in the old coordinates.
struct GaugePoint {
    std::vector<double> xbar;
    Tensor<Jet1> Lambda;   // Lambda(mu, nu), gradient d_h Lambda
    Tensor<Jet1> dLambda;  // dLambda(mu, nu, h) = d_h Lambda(mu, nu), gradient d_k d_h Lambda
    Tensor<Jet1> Jinv;     // Jinv(i, a) = dx^i / dxbar^a, gradient d_h
    double detJ = 0.0;     // det(dxbar / dx)

    RealTensor lambda_values() const;
    RealTensor jinv_values() const;
};

/// Throws DegenerateFrameError when the Jacobian is singular.
GaugePoint evaluate_gauge(const GaugeElement& g, std::span<const double> x);

/// max |Lambda^T eta Lambda - eta| at the point.
double lorentz_defect(const GaugePoint& gp, const Signature& sig);

/// ebar^mu_j = Lambda^mu_s e^s_i dx^i/dxbar^j at xbar, with first derivatives
/// in xbar. The result carries no second derivatives.
CoframePoint gauge_transform_frame(const CoframePoint& cp, const GaugeElement& g);
CoframePoint gauge_transform_frame(const CoframePoint& cp, const GaugePoint& gp);

/// Spin-connection gauge law. Derivatives are chained when sp has them.
/// `inhomogeneous_sign` multiplies the dLambda term; anything but +1 is a
/// deliberate corruption used to test that checks notice it.
SpinConnectionPoint gauge_transform_omega(const SpinConnectionPoint& sp, const CoframePoint& cp,
                                          const GaugeElement& g, double inhomogeneous_sign = 1.0);
SpinConnectionPoint gauge_transform_omega(const SpinConnectionPoint& sp, const GaugePoint& gp,
                                          double inhomogeneous_sign = 1.0);

/// Gauge law of the antisymmetrized derivatives E (values only).
RealTensor gauge_transform_E(const CoframePoint& cp, const GaugeElement& g);
RealTensor gauge_transform_E(const CoframePoint& cp, const GaugePoint& gp);

/// A point of a section x -> (e, omega); holonomic when omega is the spin
/// connection of e.
struct SectionPoint {
    CoframePoint cp;
    SpinConnectionPoint sp;
};

SectionPoint holonomic_section(const CoframeField& field, std::span<const double> x);

/// Random e (identity plus noise), de, antisymmetric omega and domega.
SectionPoint random_section_point(const Signature& sig, PortableRng& rng, double spread = 0.3);

/// Pullback of the contact forms, C(mu, a, b) = coefficient of dx^a ^ dx^b
/// (antisymmetric in a, b).
RealTensor contact_pullback(const SectionPoint& s);

/// Coefficient L of the pulled-back Theta form, Theta = L ds.
double theta_density(const SectionPoint& s);

/// |Lbar(xbar) det(dxbar/dx) - L(x)|.
double theta_gauge_invariance_check(const SectionPoint& s, const GaugeElement& g, double inhomogeneous_sign = 1.0);

/// Largest discrepancy between the two sides of the omega d(omega) identity,
/// compared as antisymmetrized coefficient arrays of d(omega)_i^{ab} and as
/// their pullbacks along the section.
double omega_domega_identity_check(const SectionPoint& s);

/// Kinematic block, indexed (i, lambda, sigma).
RealTensor el_residual_A(const SectionPoint& s, const RealTensor* K3 = nullptr);

/// Dynamical block, indexed (l, rho). Requires domega.
RealTensor el_residual_B(const SectionPoint& s, const RealTensor* K3 = nullptr);

/// Lambda = exp(A) with A^mu_nu = eta^{mu mu} S_{mu nu} for the antisymmetric
/// generator field S (m x m, only the strict upper triangle is read).
MatrixField lorentz_exponential(const Signature& sig, MatrixField generator);

/// Random polynomial generator of degree <= 2 with coefficients bounded by `amplitude`.
MatrixField random_generator(int m, PortableRng& rng, double amplitude, bool constant = false);

enum class CoordinateChange { identity, affine, nonlinear };

/// Coordinate map of the requested kind; nonlinear maps are identity plus a
/// small quadratic, invertible on the unit box.
MatrixField random_coordinate_map(int m, PortableRng& rng, CoordinateChange kind);

GaugeElement random_gauge_element(const Signature& sig, PortableRng& rng, CoordinateChange kind,
                                  bool constant_lambda = false);

/// The same element expressed around `center`: Lambda is evaluated at
/// x - center and the coordinate map becomes center + map(x - center). Random
/// elements are sized for the unit box; this moves them to other points.
GaugeElement centred_gauge(const GaugeElement& g, std::span<const double> center);

}  // namespace vielbein
