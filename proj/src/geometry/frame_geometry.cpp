#include "vielbein/frame_geometry.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <utility>

#include "vielbein/epsilon.hpp"
#include "vielbein/errors.hpp"

namespace vielbein {

namespace {

std::string point_text(std::span<const double> x) {
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (std::size_t k = 0; k < x.size(); ++k) os << (k ? ", " : "") << x[k];
    os << ')';
    return os.str();
}

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

RealTensor antisymmetrized_derivative(const RealTensor& de, int m) {
    RealTensor E({m, m, m}, {kFrameUp, kCoordDown, kCoordDown});
    for (int mu = 0; mu < m; ++mu)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) E(mu, i, j) = 0.5 * (de(mu, i, j) - de(mu, j, i));
    return E;
}

}  // namespace

CoframePoint make_coframe_point(const Signature& sig, std::vector<double> x, RealTensor e, RealTensor de,
                                std::optional<RealTensor> dde) {
    const int m = sig.dim();
    if (e.shape() != std::vector<int>{m, m}) throw ShapeError("coframe values must be m x m");
    if (de.shape() != std::vector<int>{m, m, m}) throw ShapeError("coframe first derivatives must be m x m x m");
    if (dde && dde->shape() != std::vector<int>{m, m, m, m})
        throw ShapeError("coframe second derivatives must be m x m x m x m");

    CoframePoint cp;
    cp.signature = sig;
    cp.x = std::move(x);
    cp.det = determinant(e);
    const double scale = row_norm_product(e);
    if (scale == 0.0 || !(std::fabs(cp.det) >= kDegenerateFrameTolerance * scale)) {
        char det_text[32];
        std::snprintf(det_text, sizeof det_text, "%.3g", cp.det);
        throw DegenerateFrameError("degenerate frame at x = " + point_text(cp.x) + " (det e = " + det_text + ")");
    }
    e.set_slots({kFrameUp, kCoordDown});
    de.set_slots({kFrameUp, kCoordDown, kCoordDown});
    if (dde) dde->set_slots({kFrameUp, kCoordDown, kCoordDown, kCoordDown});
    cp.einv = inverse(e);
    cp.E = antisymmetrized_derivative(de, m);
    cp.e = std::move(e);
    cp.de = std::move(de);
    cp.dde = std::move(dde);
    return cp;
}

CoframePoint evaluate_coframe(const CoframeField& field, std::span<const double> x) {
    const int m = field.dim();
    if (static_cast<int>(x.size()) != m) throw ShapeError("evaluate_coframe: point has the wrong dimension");
    if (field.e.rows != m || field.e.cols != m) throw ShapeError("evaluate_coframe: field is not m x m");
    const std::vector<Jet2> seeds = jet_seed(x);
    const Tensor<Jet2> ej = field.e(seeds);
    RealTensor e({m, m}), de({m, m, m}), dde({m, m, m, m});
    for (int mu = 0; mu < m; ++mu)
        for (int i = 0; i < m; ++i) {
            const Jet2& v = ej(mu, i);
            e(mu, i) = v.value();
            for (int j = 0; j < m; ++j) {
                de(mu, i, j) = v.grad(j);
                for (int k = 0; k < m; ++k) dde(mu, i, j, k) = v.hess(j, k);
            }
        }
    return make_coframe_point(field.signature, std::vector<double>(x.begin(), x.end()), std::move(e), std::move(de),
                              std::move(dde));
}

RealTensor metric(const CoframePoint& cp) {
    const int m = cp.dim();
    RealTensor g({m, m}, {kCoordDown, kCoordDown});
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double acc = 0.0;
            for (int mu = 0; mu < m; ++mu) acc += cp.signature[mu] * cp.e(mu, i) * cp.e(mu, j);
            g(i, j) = acc;
        }
    return g;
}

RealTensor sigma(const CoframePoint& cp) {
    const int m = cp.dim();
    RealTensor S({m, m, m}, {kCoordUp, kCoordDown, kCoordDown});
    for (int p = 0; p < m; ++p)
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i) {
                double acc = 0.0;
                for (int l = 0; l < m; ++l) acc += cp.einv(p, l) * cp.E(l, i, j);
                S(p, j, i) = acc;
            }
    return S;
}

SpinConnectionPoint spin_connection(const CoframePoint& cp) {
    const int m = cp.dim();
    SpinConnectionPoint sp;
    sp.signature = cp.signature;
    if (!cp.dde) {
        sp.omega = detail::omega_from_frame(cp.signature, cp.e, cp.E);
        return sp;
    }
    // Lift e and E to first-order jets whose gradients are their derivatives.
    Tensor<Jet1> e({m, m}, cp.e.slots());
    Tensor<Jet1> E({m, m, m}, cp.E.slots());
    for (int mu = 0; mu < m; ++mu)
        for (int i = 0; i < m; ++i) {
            Jet1 v(cp.e(mu, i));
            for (int k = 0; k < m; ++k) v.set_grad(k, cp.de(mu, i, k));
            e(mu, i) = v;
            for (int j = 0; j < m; ++j) {
                Jet1 w(cp.E(mu, i, j));
                for (int k = 0; k < m; ++k) w.set_grad(k, 0.5 * ((*cp.dde)(mu, i, j, k) - (*cp.dde)(mu, j, i, k)));
                E(mu, i, j) = w;
            }
        }
    const Tensor<Jet1> w = detail::omega_from_frame(cp.signature, e, E);
    sp.omega = RealTensor({m, m, m}, {kCoordDown, kFrameUp, kFrameUp});
    RealTensor domega({m, m, m, m}, {kCoordDown, kCoordDown, kFrameUp, kFrameUp});
    for (int i = 0; i < m; ++i)
        for (int mu = 0; mu < m; ++mu)
            for (int nu = 0; nu < m; ++nu) {
                sp.omega(i, mu, nu) = w(i, mu, nu).value();
                for (int j = 0; j < m; ++j) domega(j, i, mu, nu) = w(i, mu, nu).grad(j);
            }
    sp.domega = std::move(domega);
    return sp;
}

RealTensor torsion_residual(const CoframePoint& cp, const SpinConnectionPoint& sp) {
    const int m = cp.dim();
    const Signature& sig = cp.signature;
    RealTensor r({m, m, m}, {kFrameUp, kCoordDown, kCoordDown});
    for (int mu = 0; mu < m; ++mu)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                double acc = 2.0 * cp.E(mu, i, j);
                for (int nu = 0; nu < m; ++nu)
                    acc -= sig[nu] * (sp.omega(i, mu, nu) * cp.e(nu, j) - sp.omega(j, mu, nu) * cp.e(nu, i));
                r(mu, i, j) = acc;
            }
    return r;
}

CurvaturePoint curvature(const SpinConnectionPoint& sp) {
    if (!sp.domega) throw MissingDerivativesError("curvature needs the derivatives of the spin connection");
    const int m = sp.dim();
    const Signature& sig = sp.signature;
    const RealTensor& w = sp.omega;
    const RealTensor& dw = *sp.domega;
    CurvaturePoint cur{RealTensor({m, m, m, m}, {kCoordDown, kCoordDown, kFrameUp, kFrameUp})};
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i)
            for (int l = 0; l < m; ++l)
                for (int s = 0; s < m; ++s) {
                    double acc = dw(j, i, l, s) - dw(i, j, l, s);
                    for (int h = 0; h < m; ++h)
                        acc += sig[h] * (w(j, l, h) * w(i, h, s) - w(i, l, h) * w(j, h, s));
                    cur.R(j, i, l, s) = acc;
                }
    return cur;
}

RealTensor frame_contracted_epsilon(const CoframePoint& cp, int free_count) {
    const int m = cp.dim();
    const int r = free_count;
    if (r < 0 || r > m) throw ShapeError("frame_contracted_epsilon: bad free index count");
    const int n = m - r;
    const EpsilonSymbol& eps = EpsilonSymbol::of(m);

    std::vector<Slot> slots(static_cast<std::size_t>(r), kCoordUp);
    slots.resize(static_cast<std::size_t>(2 * r), kFrameDown);
    RealTensor K(std::vector<int>(static_cast<std::size_t>(2 * r), m), slots);

    std::vector<int> ci(static_cast<std::size_t>(m)), di(static_cast<std::size_t>(m));
    for (std::size_t flat = 0; flat < K.size(); ++flat) {
        const std::vector<int> idx = K.unflatten(flat);
        // Free indices occupy the last r positions of each epsilon.
        std::vector<bool> c_used(static_cast<std::size_t>(m), false), d_used(static_cast<std::size_t>(m), false);
        bool repeated = false;
        for (int k = 0; k < r; ++k) {
            const int c = idx[static_cast<std::size_t>(k)];
            const int d = idx[static_cast<std::size_t>(r + k)];
            repeated = repeated || c_used[static_cast<std::size_t>(c)] || d_used[static_cast<std::size_t>(d)];
            c_used[static_cast<std::size_t>(c)] = d_used[static_cast<std::size_t>(d)] = true;
            ci[static_cast<std::size_t>(n + k)] = c;
            di[static_cast<std::size_t>(n + k)] = d;
        }
        if (repeated) continue;
        std::vector<int> c_rest, d_rest;
        for (int a = 0; a < m; ++a) {
            if (!c_used[static_cast<std::size_t>(a)]) c_rest.push_back(a);
            if (!d_used[static_cast<std::size_t>(a)]) d_rest.push_back(a);
        }
        const auto q_perms = signed_permutations(c_rest);
        const auto mu_perms = signed_permutations(d_rest);
        double acc = 0.0;
        for (const auto& qp : q_perms) {
            std::copy(qp.perm.begin(), qp.perm.end(), ci.begin());
            const int sq = eps.sign(ci);
            for (const auto& mp : mu_perms) {
                std::copy(mp.perm.begin(), mp.perm.end(), di.begin());
                double prod = sq * eps.sign(di);
                for (int k = 0; k < n; ++k) prod *= cp.e(di[static_cast<std::size_t>(k)], ci[static_cast<std::size_t>(k)]);
                acc += prod;
            }
        }
        K.data()[flat] = acc;
    }
    return K;
}

RealTensor einstein_density(const CoframePoint& cp, const CurvaturePoint& R, const RealTensor* K3) {
    const int m = cp.dim();
    if (m < 3) throw ShapeError("einstein_density needs m >= 3");
    RealTensor own;
    if (!K3) {
        own = frame_contracted_epsilon(cp, 3);
        K3 = &own;
    }
    const RealTensor& K = *K3;
    const double pref = 1.0 / (factorial(m - 3) * 4.0);
    RealTensor D({m, m}, {kCoordUp, kFrameDown});
    for (int l = 0; l < m; ++l)
        for (int rho = 0; rho < m; ++rho) {
            double acc = 0.0;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    for (int a = 0; a < m; ++a)
                        for (int s = 0; s < m; ++s) acc += K(l, i, j, rho, a, s) * R.R(j, i, a, s);
            D(l, rho) = pref * acc;
        }
    return D;
}

CoordinateOracle coordinate_oracle(const CoframeField& field, std::span<const double> x) {
    const int m = field.dim();
    if (static_cast<int>(x.size()) != m) throw ShapeError("coordinate_oracle: point has the wrong dimension");
    const Signature& sig = field.signature;
    const std::vector<Jet2> seeds = jet_seed(x);
    const Tensor<Jet2> ej = field.e(seeds);

    CoordinateOracle o;
    Tensor<Jet2> gj({m, m});
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            Jet2 acc(0.0);
            for (int mu = 0; mu < m; ++mu) acc += Jet2(sig[mu]) * ej(mu, i) * ej(mu, j);
            gj(i, j) = acc;
        }
    o.g = RealTensor({m, m}, {kCoordDown, kCoordDown});
    RealTensor dg({m, m, m}), ddg({m, m, m, m});  // dg(i,j,k) = d_k g_ij
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            o.g(i, j) = gj(i, j).value();
            for (int k = 0; k < m; ++k) {
                dg(i, j, k) = gj(i, j).grad(k);
                for (int l = 0; l < m; ++l) ddg(i, j, k, l) = gj(i, j).hess(k, l);
            }
        }
    const double scale = row_norm_product(o.g);
    if (scale == 0.0 || std::fabs(determinant(o.g)) < kDegenerateFrameTolerance * scale)
        throw DegenerateFrameError("degenerate metric at x = " + point_text(x));
    o.ginv = inverse(o.g);

    // d_k g^{ab} = -g^{ax} d_k g_xy g^{yb}
    RealTensor dginv({m, m, m});
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int k = 0; k < m; ++k) {
                double acc = 0.0;
                for (int p = 0; p < m; ++p)
                    for (int q = 0; q < m; ++q) acc -= o.ginv(a, p) * dg(p, q, k) * o.ginv(q, b);
                dginv(a, b, k) = acc;
            }

    // Christoffels of the first kind and their derivatives.
    RealTensor G1({m, m, m}), dG1({m, m, m, m});  // G1(l,i,j) = 1/2 (d_i g_lj + d_j g_li - d_l g_ij)
    for (int l = 0; l < m; ++l)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                G1(l, i, j) = 0.5 * (dg(l, j, i) + dg(l, i, j) - dg(i, j, l));
                for (int k = 0; k < m; ++k)
                    dG1(l, i, j, k) = 0.5 * (ddg(l, j, i, k) + ddg(l, i, j, k) - ddg(i, j, l, k));
            }
    o.Gamma = RealTensor({m, m, m}, {kCoordUp, kCoordDown, kCoordDown});
    o.dGamma = RealTensor({m, m, m, m}, {kCoordUp, kCoordDown, kCoordDown, kCoordDown});
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                double acc = 0.0;
                for (int l = 0; l < m; ++l) acc += o.ginv(k, l) * G1(l, i, j);
                o.Gamma(k, i, j) = acc;
                for (int d = 0; d < m; ++d) {
                    double dacc = 0.0;
                    for (int l = 0; l < m; ++l) dacc += dginv(k, l, d) * G1(l, i, j) + o.ginv(k, l) * dG1(l, i, j, d);
                    o.dGamma(k, i, j, d) = dacc;
                }
            }

    o.Riemann = RealTensor({m, m, m, m}, {kCoordUp, kCoordDown, kCoordDown, kCoordDown});
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
                for (int d = 0; d < m; ++d) {
                    double acc = o.dGamma(a, d, b, c) - o.dGamma(a, c, b, d);
                    for (int h = 0; h < m; ++h) acc += o.Gamma(a, c, h) * o.Gamma(h, d, b) - o.Gamma(a, d, h) * o.Gamma(h, c, b);
                    o.Riemann(a, b, c, d) = acc;
                }
    o.Ricci = RealTensor({m, m}, {kCoordDown, kCoordDown});
    for (int b = 0; b < m; ++b)
        for (int d = 0; d < m; ++d) {
            double acc = 0.0;
            for (int a = 0; a < m; ++a) acc += o.Riemann(a, b, a, d);
            o.Ricci(b, d) = acc;
        }
    o.scalar = 0.0;
    for (int b = 0; b < m; ++b)
        for (int d = 0; d < m; ++d) o.scalar += o.ginv(b, d) * o.Ricci(b, d);
    o.Einstein = RealTensor({m, m}, {kCoordDown, kCoordDown});
    for (int b = 0; b < m; ++b)
        for (int d = 0; d < m; ++d) o.Einstein(b, d) = o.Ricci(b, d) - 0.5 * o.g(b, d) * o.scalar;
    o.EinsteinMixed = RealTensor({m, m}, {kCoordUp, kCoordDown});
    for (int l = 0; l < m; ++l)
        for (int d = 0; d < m; ++d) {
            double acc = 0.0;
            for (int b = 0; b < m; ++b) acc += o.ginv(l, b) * o.Einstein(b, d);
            o.EinsteinMixed(l, d) = acc;
        }
    return o;
}

RealTensor omega_from_christoffel(const CoframePoint& cp, const CoordinateOracle& oracle) {
    const int m = cp.dim();
    const Signature& sig = cp.signature;
    // d_i e^k_nu = -e^k_a d_i e^a_l e^l_nu
    RealTensor deinv({m, m, m});  // deinv(k, nu, i)
    for (int k = 0; k < m; ++k)
        for (int nu = 0; nu < m; ++nu)
            for (int i = 0; i < m; ++i) {
                double acc = 0.0;
                for (int a = 0; a < m; ++a)
                    for (int l = 0; l < m; ++l) acc -= cp.einv(k, a) * cp.de(a, l, i) * cp.einv(l, nu);
                deinv(k, nu, i) = acc;
            }
    RealTensor w({m, m, m}, {kCoordDown, kFrameUp, kFrameUp});
    for (int i = 0; i < m; ++i)
        for (int mu = 0; mu < m; ++mu)
            for (int nu = 0; nu < m; ++nu) {
                double acc = 0.0;
                for (int k = 0; k < m; ++k) {
                    double inner = deinv(k, nu, i);
                    for (int j = 0; j < m; ++j) inner += oracle.Gamma(k, i, j) * cp.einv(j, nu);
                    acc += cp.e(mu, k) * inner;
                }
                w(i, mu, nu) = sig[nu] * acc;
            }
    return w;
}

RealTensor frame_to_coordinate_riemann(const CoframePoint& cp, const CurvaturePoint& R) {
    const int m = cp.dim();
    const Signature& sig = cp.signature;
    RealTensor out({m, m, m, m}, {kCoordUp, kCoordDown, kCoordDown, kCoordDown});
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
                for (int d = 0; d < m; ++d) {
                    double acc = 0.0;
                    for (int l = 0; l < m; ++l)
                        for (int s = 0; s < m; ++s) acc += cp.einv(a, l) * R.R(c, d, l, s) * sig[s] * cp.e(s, b);
                    out(a, b, c, d) = acc;
                }
    return out;
}

double kretschmann(const CoframePoint& cp, const CurvaturePoint& R) {
    const int m = cp.dim();
    const Signature& sig = cp.signature;
    // All-frame components R_{ab}^{ls}.
    RealTensor F({m, m, m, m});
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int l = 0; l < m; ++l)
                for (int s = 0; s < m; ++s) {
                    double acc = 0.0;
                    for (int j = 0; j < m; ++j)
                        for (int i = 0; i < m; ++i) acc += cp.einv(j, a) * cp.einv(i, b) * R.R(j, i, l, s);
                    F(a, b, l, s) = acc;
                }
    double k = 0.0;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int l = 0; l < m; ++l)
                for (int s = 0; s < m; ++s) k += sig[a] * sig[b] * sig[l] * sig[s] * F(a, b, l, s) * F(a, b, l, s);
    return k;
}

double kretschmann(const CoordinateOracle& o) {
    const int m = o.g.extent(0);
    // R_{abcd} and R^{abcd}.
    RealTensor low({m, m, m, m}), up({m, m, m, m});
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
                for (int d = 0; d < m; ++d) {
                    double acc = 0.0;
                    for (int x = 0; x < m; ++x) acc += o.g(a, x) * o.Riemann(x, b, c, d);
                    low(a, b, c, d) = acc;
                }
    // Raise b, c, d one slot at a time.
    RealTensor t1({m, m, m, m}), t2({m, m, m, m});
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
                for (int d = 0; d < m; ++d) {
                    double acc = 0.0;
                    for (int x = 0; x < m; ++x) acc += o.ginv(b, x) * o.Riemann(a, x, c, d);
                    t1(a, b, c, d) = acc;
                }
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
                for (int d = 0; d < m; ++d) {
                    double acc = 0.0;
                    for (int x = 0; x < m; ++x) acc += o.ginv(c, x) * t1(a, b, x, d);
                    t2(a, b, c, d) = acc;
                }
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
                for (int d = 0; d < m; ++d) {
                    double acc = 0.0;
                    for (int x = 0; x < m; ++x) acc += o.ginv(d, x) * t2(a, b, c, x);
                    up(a, b, c, d) = acc;
                }
    double k = 0.0;
    for (std::size_t n = 0; n < low.size(); ++n) k += low.data()[n] * up.data()[n];
    return k;
}

double scalar_curvature(const CoframePoint& cp, const CurvaturePoint& R) {
    const int m = cp.dim();
    double s = 0.0;
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i)
            for (int l = 0; l < m; ++l)
                for (int t = 0; t < m; ++t) s += R.R(j, i, l, t) * cp.einv(j, l) * cp.einv(i, t);
    return s;
}

RealTensor oracle_einstein_density(const CoframePoint& cp, const CoordinateOracle& oracle) {
    const int m = cp.dim();
    RealTensor D({m, m}, {kCoordUp, kFrameDown});
    for (int l = 0; l < m; ++l)
        for (int rho = 0; rho < m; ++rho) {
            double acc = 0.0;
            for (int d = 0; d < m; ++d) acc += oracle.EinsteinMixed(l, d) * cp.einv(d, rho);
            D(l, rho) = cp.det * acc;
        }
    return D;
}

}  // namespace vielbein
