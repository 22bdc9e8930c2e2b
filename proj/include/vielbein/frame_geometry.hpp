#pragma once

// Metric, spin connection, torsion and curvature of a coframe field e^mu_i,
// plus a coordinate (Christoffel) oracle that shares none of the frame code.
//
// Storage conventions, all 0-based:
//   e(mu, i)            e^mu_i
//   einv(i, mu)         e^i_mu
//   de(mu, i, j)        d_j e^mu_i
//   dde(mu, i, j, k)    d_k d_j e^mu_i
//   E(mu, i, j)         1/2 (d_j e^mu_i - d_i e^mu_j)
//   omega(i, mu, nu)    omega_i^{mu nu}
//   domega(j, i, mu, nu) d_j omega_i^{mu nu}
//   R(j, i, l, s)       R_{ji}^{l s}

#include <optional>
#include <span>
#include <vector>

#include "vielbein/field.hpp"
#include "vielbein/linalg.hpp"
#include "vielbein/signature.hpp"
#include "vielbein/tensor.hpp"

namespace vielbein {

struct CoframeField {
    Signature signature;
    MatrixField e;

    int dim() const { return signature.dim(); }
};

struct CoframePoint {
    Signature signature;
    std::vector<double> x;
    RealTensor e;
    RealTensor einv;
    RealTensor de;
    std::optional<RealTensor> dde;
    RealTensor E;
    double det = 0.0;

    int dim() const { return signature.dim(); }
};

struct SpinConnectionPoint {
    Signature signature;
    RealTensor omega;
    std::optional<RealTensor> domega;

    int dim() const { return signature.dim(); }
};

struct CurvaturePoint {
    RealTensor R;
};

/// Relative determinant threshold below which a frame is rejected.
inline constexpr double kDegenerateFrameTolerance = 1e-12;

/// Assemble a point from frame values and derivatives; computes einv, E, det.
/// Throws DegenerateFrameError for a (numerically) singular frame.
CoframePoint make_coframe_point(const Signature& sig, std::vector<double> x, RealTensor e, RealTensor de,
                                std::optional<RealTensor> dde);

CoframePoint evaluate_coframe(const CoframeField& field, std::span<const double> x);

/// g_ij = eta_{mu nu} e^mu_i e^nu_j.
RealTensor metric(const CoframePoint& cp);

/// Sigma(p, j, i) = Sigma^p_{ji} = e^p_l E^l_{ij}.
RealTensor sigma(const CoframePoint& cp);

/// Spin connection of a torsion-free, metric-compatible frame. domega is
/// filled when cp carries second derivatives.
SpinConnectionPoint spin_connection(const CoframePoint& cp);

/// 2 E^mu_ij - (omega_i^mu_nu e^nu_j - omega_j^mu_nu e^nu_i), shape (mu, i, j).
RealTensor torsion_residual(const CoframePoint& cp, const SpinConnectionPoint& sp);

/// Throws MissingDerivativesError when sp has no domega.
CurvaturePoint curvature(const SpinConnectionPoint& sp);

/// K(c_1..c_r, d_1..d_r) = sum over the remaining m-r index pairs of
/// eps^{q.. c..} eps_{mu.. d..} prod e^{mu_k}_{q_k}; a rank-2r tensor whose
/// first r slots are coordinate indices and last r are frame indices.
RealTensor frame_contracted_epsilon(const CoframePoint& cp, int free_count);

/// Einstein density D(l, rho): 1/((m-3)! 4) eps eps e..e R_{ji}^{ls}.
/// Requires m >= 3. `K3` may be passed to reuse frame_contracted_epsilon(cp, 3).
RealTensor einstein_density(const CoframePoint& cp, const CurvaturePoint& R, const RealTensor* K3 = nullptr);

/// Coordinate quantities computed from g alone.
struct CoordinateOracle {
    RealTensor g;       // g_ij
    RealTensor ginv;    // g^ij
    RealTensor Gamma;   // Gamma(k, i, j) = Gamma^k_ij
    RealTensor dGamma;  // dGamma(k, i, j, l) = d_l Gamma^k_ij
    RealTensor Riemann; // Riemann(a, b, c, d) = R^a_{bcd}
    RealTensor Ricci;   // Ricci(b, d) = R^a_{bad}
    double scalar = 0.0;
    RealTensor Einstein;       // G_bd
    RealTensor EinsteinMixed;  // G^l_d
};

CoordinateOracle coordinate_oracle(const CoframeField& field, std::span<const double> x);

/// omega_i^{mu nu} from Christoffel symbols: e^mu_k (Gamma^k_ij e^j_nu + d_i e^k_nu), raised with eta.
RealTensor omega_from_christoffel(const CoframePoint& cp, const CoordinateOracle& oracle);

/// R^a_{bcd} = e^a_l R_{cd}^l_s e^s_b.
RealTensor frame_to_coordinate_riemann(const CoframePoint& cp, const CurvaturePoint& R);

double kretschmann(const CoframePoint& cp, const CurvaturePoint& R);
double kretschmann(const CoordinateOracle& oracle);

/// Scalar curvature from the frame curvature: R_{ji}^{ls} e^j_l e^i_s.
double scalar_curvature(const CoframePoint& cp, const CurvaturePoint& R);

/// det(e) G^l_d e^d_rho, the coordinate-oracle counterpart of einstein_density.
RealTensor oracle_einstein_density(const CoframePoint& cp, const CoordinateOracle& oracle);

namespace detail {

/// omega(i, mu, nu) from frame values and the antisymmetrized derivative E.
/// Templated so jets carry derivatives through unchanged code.
template <class T>
Tensor<T> omega_from_frame(const Signature& sig, const Tensor<T>& e, const Tensor<T>& E) {
    const int m = sig.dim();
    const Tensor<T> einv = inverse(e);
    Tensor<T> g({m, m});
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            T acc(0.0);
            for (int mu = 0; mu < m; ++mu) acc += sig[mu] * e(mu, i) * e(mu, j);
            g(i, j) = acc;
        }
    const Tensor<T> ginv = inverse(g);

    // Sigma^p_{ji}.
    Tensor<T> S({m, m, m});
    for (int p = 0; p < m; ++p)
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i) {
                T acc(0.0);
                for (int l = 0; l < m; ++l) acc += einv(p, l) * E(l, i, j);
                S(p, j, i) = acc;
            }

    // Partially lowered/raised copies: A(a, b, c) = g_{ax} Sigma^x_{bc}, then
    // B(a, p, c) = A(a, b, c) g^{bp} and C(a, b, p) = A(a, b, c) g^{cp}.
    Tensor<T> A({m, m, m});
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c) {
                T acc(0.0);
                for (int x = 0; x < m; ++x) acc += g(a, x) * S(x, b, c);
                A(a, b, c) = acc;
            }
    Tensor<T> inner({m, m, m});  // inner(p, j, i)
    for (int p = 0; p < m; ++p)
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i) {
                T acc = S(p, j, i);
                for (int b = 0; b < m; ++b) {
                    acc -= A(j, b, i) * ginv(b, p);  // Sigma_j^p_i
                    acc += A(i, j, b) * ginv(b, p);  // Sigma_ij^p
                }
                inner(p, j, i) = acc;
            }

    Tensor<T> omega({m, m, m}, {kCoordDown, kFrameUp, kFrameUp});
    for (int i = 0; i < m; ++i)
        for (int mu = 0; mu < m; ++mu)
            for (int nu = 0; nu < m; ++nu) {
                T acc(0.0);
                for (int p = 0; p < m; ++p)
                    for (int j = 0; j < m; ++j) acc += e(mu, p) * inner(p, j, i) * einv(j, nu);
                // Raise nu with eta.
                omega(i, mu, nu) = sig[nu] * acc;
            }
    for (int i = 0; i < m; ++i)
        for (int mu = 0; mu < m; ++mu) {
            omega(i, mu, mu) = T(0.0);
            for (int nu = mu + 1; nu < m; ++nu) {
                const T a = (omega(i, mu, nu) - omega(i, nu, mu)) * T(0.5);
                omega(i, mu, nu) = a;
                omega(i, nu, mu) = -a;
            }
        }
    return omega;
}

}  // namespace detail

}  // namespace vielbein
