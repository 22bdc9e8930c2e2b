#include "vielbein/jbundle.hpp"

#include <cmath>
#include <memory>

#include "vielbein/errors.hpp"

namespace vielbein {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

Jet1 jet1(double value, int m, const auto& grad_of) {
    Jet1 j(value);
    for (int h = 0; h < m; ++h) j.set_grad(h, grad_of(h));
    return j;
}

// X(j, i, l, s) = d_j omega_i^{ls} + omega_j^l_h omega_i^{hs}
RealTensor field_strength_block(const SectionPoint& s) {
    if (!s.sp.domega) throw MissingDerivativesError("this quantity needs the derivatives of omega");
    const int m = s.cp.dim();
    const Signature& sig = s.cp.signature;
    const RealTensor& w = s.sp.omega;
    const RealTensor& dw = *s.sp.domega;
    RealTensor X({m, m, m, m});
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i)
            for (int l = 0; l < m; ++l)
                for (int t = 0; t < m; ++t) {
                    double acc = dw(j, i, l, t);
                    for (int h = 0; h < m; ++h) acc += w(j, l, h) * sig[h] * w(i, h, t);
                    X(j, i, l, t) = acc;
                }
    return X;
}

template <class T>
Tensor<T> square_matmul(const Tensor<T>& a, const Tensor<T>& b) {
    const int n = a.extent(0);
    Tensor<T> c({n, n});
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const T& aik = a(i, k);
            for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

}  // namespace

RealTensor GaugePoint::lambda_values() const {
    RealTensor out(Lambda.shape());
    for (std::size_t k = 0; k < Lambda.size(); ++k) out.data()[k] = Lambda.data()[k].value();
    return out;
}

RealTensor GaugePoint::jinv_values() const {
    RealTensor out(Jinv.shape());
    for (std::size_t k = 0; k < Jinv.size(); ++k) out.data()[k] = Jinv.data()[k].value();
    return out;
}

GaugeElement identity_gauge(int m) {
    MatrixField map{1, m, [m](std::span<const Jet2> x) {
                        Tensor<Jet2> out({1, m});
                        for (int a = 0; a < m; ++a) out(0, a) = x[static_cast<std::size_t>(a)];
                        return out;
                    }};
    return {identity_matrix(m), std::move(map)};
}

GaugePoint evaluate_gauge(const GaugeElement& g, std::span<const double> x) {
    const int m = static_cast<int>(x.size());
    if (g.Lambda.rows != m || g.Lambda.cols != m || g.coord_map.rows != 1 || g.coord_map.cols != m)
        throw ShapeError("gauge element does not match the point dimension");
    const std::vector<Jet2> seeds = jet_seed(x);
    const Tensor<Jet2> L = g.Lambda(seeds);
    const Tensor<Jet2> map = g.coord_map(seeds);

    GaugePoint gp;
    gp.Lambda = Tensor<Jet1>({m, m}, {kFrameUp, kFrameDown});
    gp.dLambda = Tensor<Jet1>({m, m, m});
    for (int mu = 0; mu < m; ++mu)
        for (int nu = 0; nu < m; ++nu) {
            gp.Lambda(mu, nu) = L(mu, nu).first_order();
            for (int h = 0; h < m; ++h) gp.dLambda(mu, nu, h) = L(mu, nu).partial(h);
        }
    Tensor<Jet1> J({m, m}, {kCoordUp, kCoordDown});
    RealTensor Jv({m, m});
    for (int a = 0; a < m; ++a) {
        gp.xbar.push_back(map(0, a).value());
        for (int i = 0; i < m; ++i) {
            J(a, i) = map(0, a).partial(i);
            Jv(a, i) = map(0, a).grad(i);
        }
    }
    gp.detJ = determinant(Jv);
    const double scale = row_norm_product(Jv);
    if (scale == 0.0 || std::fabs(gp.detJ) < kDegenerateFrameTolerance * scale)
        throw DegenerateFrameError("singular coordinate-change Jacobian");
    gp.Jinv = inverse(J);
    return gp;
}

double lorentz_defect(const GaugePoint& gp, const Signature& sig) {
    const int m = sig.dim();
    double worst = 0.0;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            double acc = 0.0;
            for (int mu = 0; mu < m; ++mu) acc += gp.Lambda(mu, a).value() * sig[mu] * gp.Lambda(mu, b).value();
            worst = std::max(worst, std::fabs(acc - (a == b ? sig[a] : 0.0)));
        }
    return worst;
}

CoframePoint gauge_transform_frame(const CoframePoint& cp, const GaugeElement& g) {
    return gauge_transform_frame(cp, evaluate_gauge(g, cp.x));
}

CoframePoint gauge_transform_frame(const CoframePoint& cp, const GaugePoint& gp) {
    const int m = cp.dim();
    Tensor<Jet1> e({m, m});
    for (int s = 0; s < m; ++s)
        for (int i = 0; i < m; ++i) e(s, i) = jet1(cp.e(s, i), m, [&](int h) { return cp.de(s, i, h); });
    const RealTensor Jinv = gp.jinv_values();
    RealTensor eb({m, m}), deb({m, m, m});
    for (int mu = 0; mu < m; ++mu)
        for (int j = 0; j < m; ++j) {
            Jet1 acc(0.0);
            for (int s = 0; s < m; ++s) {
                Jet1 inner(0.0);
                for (int i = 0; i < m; ++i) inner += e(s, i) * gp.Jinv(i, j);
                acc += gp.Lambda(mu, s) * inner;
            }
            eb(mu, j) = acc.value();
            for (int k = 0; k < m; ++k) {
                double d = 0.0;
                for (int h = 0; h < m; ++h) d += acc.grad(h) * Jinv(h, k);
                deb(mu, j, k) = d;
            }
        }
    return make_coframe_point(cp.signature, gp.xbar, std::move(eb), std::move(deb), std::nullopt);
}

SpinConnectionPoint gauge_transform_omega(const SpinConnectionPoint& sp, const CoframePoint& cp,
                                          const GaugeElement& g, double inhomogeneous_sign) {
    return gauge_transform_omega(sp, evaluate_gauge(g, cp.x), inhomogeneous_sign);
}

SpinConnectionPoint gauge_transform_omega(const SpinConnectionPoint& sp, const GaugePoint& gp,
                                          double inhomogeneous_sign) {
    const int m = sp.dim();
    const Signature& sig = sp.signature;
    const bool chained = sp.domega.has_value();
    Tensor<Jet1> w({m, m, m});
    for (int j = 0; j < m; ++j)
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                w(j, a, b) = chained ? jet1(sp.omega(j, a, b), m, [&](int h) { return (*sp.domega)(h, j, a, b); })
                                     : Jet1(sp.omega(j, a, b));

    // Homogeneous part in two steps: u(j, mu, g) = Lambda(mu, s) w(j, s, g), then
    // v(j, mu, nu) = u(j, mu, g) Lambda(nu, g).
    Tensor<Jet1> u({m, m, m}), v({m, m, m});
    for (int j = 0; j < m; ++j)
        for (int mu = 0; mu < m; ++mu)
            for (int c = 0; c < m; ++c) {
                Jet1 acc(0.0);
                for (int s = 0; s < m; ++s) acc += gp.Lambda(mu, s) * w(j, s, c);
                u(j, mu, c) = acc;
            }
    for (int j = 0; j < m; ++j)
        for (int mu = 0; mu < m; ++mu)
            for (int nu = 0; nu < m; ++nu) {
                Jet1 acc(0.0);
                for (int c = 0; c < m; ++c) acc += u(j, mu, c) * gp.Lambda(nu, c);
                v(j, mu, nu) = acc;
            }
    // Inhomogeneous part: eta_h Lambda(nu, h) d_k Lambda(mu, h).
    Tensor<Jet1> q({m, m, m});  // q(k, mu, nu)
    for (int k = 0; k < m; ++k)
        for (int mu = 0; mu < m; ++mu)
            for (int nu = 0; nu < m; ++nu) {
                Jet1 acc(0.0);
                for (int h = 0; h < m; ++h) acc += Jet1(sig[h]) * gp.Lambda(nu, h) * gp.dLambda(mu, h, k);
                q(k, mu, nu) = acc;
            }

    Tensor<Jet1> wb({m, m, m});
    for (int i = 0; i < m; ++i)
        for (int mu = 0; mu < m; ++mu)
            for (int nu = 0; nu < m; ++nu) {
                Jet1 acc(0.0);
                for (int j = 0; j < m; ++j) acc += gp.Jinv(j, i) * (v(j, mu, nu) - Jet1(inhomogeneous_sign) * q(j, mu, nu));
                wb(i, mu, nu) = acc;
            }

    const RealTensor Jinv = gp.jinv_values();
    SpinConnectionPoint out;
    out.signature = sig;
    out.omega = RealTensor({m, m, m}, {kCoordDown, kFrameUp, kFrameUp});
    RealTensor domega({m, m, m, m}, {kCoordDown, kCoordDown, kFrameUp, kFrameUp});
    for (int i = 0; i < m; ++i)
        for (int mu = 0; mu < m; ++mu)
            for (int nu = mu; nu < m; ++nu) {
                const double val = mu == nu ? 0.0 : 0.5 * (wb(i, mu, nu).value() - wb(i, nu, mu).value());
                out.omega(i, mu, nu) = val;
                out.omega(i, nu, mu) = -val;
                for (int k = 0; k < m; ++k) {
                    double d = 0.0;
                    if (mu != nu)
                        for (int a = 0; a < m; ++a) d += Jinv(a, k) * 0.5 * (wb(i, mu, nu).grad(a) - wb(i, nu, mu).grad(a));
                    domega(k, i, mu, nu) = d;
                    domega(k, i, nu, mu) = -d;
                }
            }
    if (chained) out.domega = std::move(domega);
    return out;
}

RealTensor gauge_transform_E(const CoframePoint& cp, const GaugeElement& g) {
    return gauge_transform_E(cp, evaluate_gauge(g, cp.x));
}

RealTensor gauge_transform_E(const CoframePoint& cp, const GaugePoint& gp) {
    const int m = cp.dim();
    const RealTensor L = gp.lambda_values();
    const RealTensor Jinv = gp.jinv_values();
    // P(mu, i, h) = e^s_i d_h Lambda^mu_s
    RealTensor P({m, m, m});
    for (int mu = 0; mu < m; ++mu)
        for (int i = 0; i < m; ++i)
            for (int h = 0; h < m; ++h) {
                double acc = 0.0;
                for (int s = 0; s < m; ++s) acc += cp.e(s, i) * gp.dLambda(mu, s, h).value();
                P(mu, i, h) = acc;
            }
    // LE(mu, i, h) = Lambda^mu_s E^s_ih
    RealTensor LE({m, m, m});
    for (int mu = 0; mu < m; ++mu)
        for (int i = 0; i < m; ++i)
            for (int h = 0; h < m; ++h) {
                double acc = 0.0;
                for (int s = 0; s < m; ++s) acc += L(mu, s) * cp.E(s, i, h);
                LE(mu, i, h) = acc;
            }
    RealTensor Eb({m, m, m}, {kFrameUp, kCoordDown, kCoordDown});
    for (int mu = 0; mu < m; ++mu)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                double acc = 0.0;
                for (int i = 0; i < m; ++i)
                    for (int h = 0; h < m; ++h) {
                        acc += LE(mu, i, h) * Jinv(h, k) * Jinv(i, j);
                        acc += 0.5 * P(mu, i, h) * (Jinv(h, k) * Jinv(i, j) - Jinv(h, j) * Jinv(i, k));
                    }
                Eb(mu, j, k) = acc;
            }
    return Eb;
}

SectionPoint holonomic_section(const CoframeField& field, std::span<const double> x) {
    CoframePoint cp = evaluate_coframe(field, x);
    SpinConnectionPoint sp = spin_connection(cp);
    return {std::move(cp), std::move(sp)};
}

SectionPoint random_section_point(const Signature& sig, PortableRng& rng, double spread) {
    const int m = sig.dim();
    std::vector<double> x(static_cast<std::size_t>(m));
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    RealTensor e({m, m}), de({m, m, m});
    for (int a = 0; a < m; ++a)
        for (int i = 0; i < m; ++i) e(a, i) = (a == i ? 1.0 : 0.0) + spread * rng.uniform(-1.0, 1.0);
    for (double& v : de.data()) v = rng.uniform(-1.0, 1.0);
    CoframePoint cp = make_coframe_point(sig, x, std::move(e), std::move(de), std::nullopt);
    SpinConnectionPoint sp;
    sp.signature = sig;
    sp.omega = RealTensor({m, m, m}, {kCoordDown, kFrameUp, kFrameUp});
    RealTensor domega({m, m, m, m}, {kCoordDown, kCoordDown, kFrameUp, kFrameUp});
    for (int i = 0; i < m; ++i)
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b < m; ++b) {
                const double w = rng.uniform(-1.0, 1.0);
                sp.omega(i, a, b) = w;
                sp.omega(i, b, a) = -w;
                for (int j = 0; j < m; ++j) {
                    const double d = rng.uniform(-1.0, 1.0);
                    domega(j, i, a, b) = d;
                    domega(j, i, b, a) = -d;
                }
            }
    sp.domega = std::move(domega);
    return {std::move(cp), std::move(sp)};
}

RealTensor contact_pullback(const SectionPoint& s) {
    const int m = s.cp.dim();
    const Signature& sig = s.cp.signature;
    RealTensor C({m, m, m}, {kFrameUp, kCoordDown, kCoordDown});
    for (int mu = 0; mu < m; ++mu)
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                double acc = 0.5 * (s.cp.de(mu, b, a) - s.cp.de(mu, a, b));
                for (int nu = 0; nu < m; ++nu)
                    acc += 0.5 * sig[nu] * (s.sp.omega(a, mu, nu) * s.cp.e(nu, b) - s.sp.omega(b, mu, nu) * s.cp.e(nu, a));
                C(mu, a, b) = acc;
            }
    return C;
}

double theta_density(const SectionPoint& s) {
    const int m = s.cp.dim();
    const RealTensor K = frame_contracted_epsilon(s.cp, 2);
    const RealTensor X = field_strength_block(s);
    double acc = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int l = 0; l < m; ++l)
                for (int t = 0; t < m; ++t) acc += K(i, j, l, t) * X(j, i, l, t);
    return acc / (factorial(m - 2) * 2.0);
}

double theta_gauge_invariance_check(const SectionPoint& s, const GaugeElement& g, double inhomogeneous_sign) {
    const GaugePoint gp = evaluate_gauge(g, s.cp.x);
    SectionPoint t{gauge_transform_frame(s.cp, gp), gauge_transform_omega(s.sp, gp, inhomogeneous_sign)};
    return std::fabs(theta_density(t) * gp.detJ - theta_density(s));
}

double omega_domega_identity_check(const SectionPoint& s) {
    const int m = s.cp.dim();
    const Signature& sig = s.cp.signature;
    const RealTensor& w = s.sp.omega;
    const RealTensor K2 = frame_contracted_epsilon(s.cp, 2);
    const RealTensor K3 = frame_contracted_epsilon(s.cp, 3);

    // Coefficients of d(omega)_i^{ab}.
    RealTensor CL({m, m, m}), CR({m, m, m});
    const double pl = 1.0 / factorial(m - 2);
    const double pr = -1.0 / (factorial(m - 3) * 2.0);
    for (int i = 0; i < m; ++i)
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                double l = 0.0;
                for (int j = 0; j < m; ++j)
                    for (int lam = 0; lam < m; ++lam) l += K2(i, j, lam, b) * w(j, lam, a) * sig[a];
                CL(i, a, b) = pl * l;
                double r = 0.0;
                for (int ll = 0; ll < m; ++ll)
                    for (int j = 0; j < m; ++j)
                        for (int t = 0; t < m; ++t) {
                            const double k = K3(ll, i, j, t, a, b);
                            if (k == 0.0) continue;
                            double ew = 0.0;
                            for (int rho = 0; rho < m; ++rho) ew += s.cp.e(rho, ll) * w(j, t, rho) * sig[rho];
                            r += k * ew;
                        }
                CR(i, a, b) = pr * r;
            }
    double worst = 0.0;
    for (int i = 0; i < m; ++i)
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                worst = std::max(worst, std::fabs((CL(i, a, b) - CL(i, b, a)) - (CR(i, a, b) - CR(i, b, a))));
    if (s.sp.domega) {
        const RealTensor& dw = *s.sp.domega;
        for (int k = 0; k < m; ++k) {
            double l = 0.0, r = 0.0;
            for (int i = 0; i < m; ++i)
                for (int a = 0; a < m; ++a)
                    for (int b = 0; b < m; ++b) {
                        l += CL(i, a, b) * dw(k, i, a, b);
                        r += CR(i, a, b) * dw(k, i, a, b);
                    }
            worst = std::max(worst, std::fabs(l - r));
        }
    }
    return worst;
}

RealTensor el_residual_A(const SectionPoint& s, const RealTensor* K3) {
    const int m = s.cp.dim();
    const Signature& sig = s.cp.signature;
    RealTensor own;
    if (!K3) {
        own = frame_contracted_epsilon(s.cp, 3);
        K3 = &own;
    }
    // Y(rho, l, j) = d_j e^rho_l + omega_j^rho_t e^t_l
    RealTensor Y({m, m, m});
    for (int rho = 0; rho < m; ++rho)
        for (int l = 0; l < m; ++l)
            for (int j = 0; j < m; ++j) {
                double acc = s.cp.de(rho, l, j);
                for (int t = 0; t < m; ++t) acc += s.sp.omega(j, rho, t) * sig[t] * s.cp.e(t, l);
                Y(rho, l, j) = acc;
            }
    const double pref = 1.0 / factorial(m - 3);
    RealTensor out({m, m, m}, {kCoordUp, kFrameDown, kFrameDown});
    for (int i = 0; i < m; ++i)
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                double acc = 0.0;
                for (int l = 0; l < m; ++l)
                    for (int j = 0; j < m; ++j)
                        for (int rho = 0; rho < m; ++rho) acc += (*K3)(l, i, j, rho, a, b) * Y(rho, l, j);
                out(i, a, b) = pref * acc;
            }
    return out;
}

RealTensor el_residual_B(const SectionPoint& s, const RealTensor* K3) {
    const int m = s.cp.dim();
    RealTensor own;
    if (!K3) {
        own = frame_contracted_epsilon(s.cp, 3);
        K3 = &own;
    }
    const RealTensor X = field_strength_block(s);
    const double pref = 1.0 / (factorial(m - 3) * 2.0);
    RealTensor out({m, m}, {kCoordUp, kFrameDown});
    for (int l = 0; l < m; ++l)
        for (int rho = 0; rho < m; ++rho) {
            double acc = 0.0;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    for (int a = 0; a < m; ++a)
                        for (int b = 0; b < m; ++b) acc += (*K3)(l, i, j, rho, a, b) * X(j, i, a, b);
            out(l, rho) = pref * acc;
        }
    return out;
}

MatrixField lorentz_exponential(const Signature& sig, MatrixField generator) {
    const int m = sig.dim();
    if (generator.rows != m || generator.cols != m) throw ShapeError("lorentz_exponential: generator must be m x m");
    auto gen = std::make_shared<MatrixField>(std::move(generator));
    return {m, m, [sig, m, gen](std::span<const Jet2> x) {
                const Tensor<Jet2> S = (*gen)(x);
                Tensor<Jet2> A({m, m});
                double norm = 0.0;
                for (int a = 0; a < m; ++a)
                    for (int b = a + 1; b < m; ++b) {
                        A(a, b) = Jet2(sig[a]) * S(a, b);
                        A(b, a) = Jet2(-sig[b]) * S(a, b);
                        norm = std::max(norm, std::fabs(S(a, b).value()));
                    }
                // Scaling and squaring keeps the Taylor series short and accurate.
                int squarings = 0;
                while (norm * m > 0.25) {
                    norm *= 0.5;
                    ++squarings;
                }
                const Jet2 scale(std::ldexp(1.0, -squarings));
                for (auto& v : A.data()) v *= scale;
                Tensor<Jet2> result({m, m}), term({m, m});
                for (int a = 0; a < m; ++a) result(a, a) = term(a, a) = Jet2(1.0);
                for (int n = 1; n <= 18; ++n) {
                    term = square_matmul(term, A);
                    const Jet2 inv_n(1.0 / n);
                    for (auto& v : term.data()) v *= inv_n;
                    for (std::size_t k = 0; k < result.size(); ++k) result.data()[k] += term.data()[k];
                }
                for (int s = 0; s < squarings; ++s) result = square_matmul(result, result);
                return result;
            }};
}

MatrixField random_generator(int m, PortableRng& rng, double amplitude, bool constant) {
    // Per upper-triangle entry: c0 + sum_k c1_k x_k + c2 x_a x_b.
    struct Entry {
        double c0;
        std::vector<double> c1;
        double c2;
        int a, b;
    };
    auto entries = std::make_shared<std::vector<Entry>>();
    for (int mu = 0; mu < m; ++mu)
        for (int nu = mu + 1; nu < m; ++nu) {
            Entry e{amplitude * rng.uniform(-1.0, 1.0), std::vector<double>(static_cast<std::size_t>(m), 0.0), 0.0, 0, 0};
            if (!constant) {
                for (double& c : e.c1) c = amplitude * rng.uniform(-1.0, 1.0) / m;
                e.c2 = amplitude * rng.uniform(-1.0, 1.0);
                e.a = static_cast<int>(rng.below(static_cast<std::uint64_t>(m)));
                e.b = static_cast<int>(rng.below(static_cast<std::uint64_t>(m)));
            }
            entries->push_back(std::move(e));
        }
    return {m, m, [m, entries](std::span<const Jet2> x) {
                Tensor<Jet2> S({m, m});
                std::size_t n = 0;
                for (int mu = 0; mu < m; ++mu)
                    for (int nu = mu + 1; nu < m; ++nu) {
                        const Entry& e = (*entries)[n++];
                        Jet2 v(e.c0);
                        for (int k = 0; k < m; ++k)
                            if (e.c1[static_cast<std::size_t>(k)] != 0.0)
                                v += Jet2(e.c1[static_cast<std::size_t>(k)]) * x[static_cast<std::size_t>(k)];
                        if (e.c2 != 0.0) v += Jet2(e.c2) * x[static_cast<std::size_t>(e.a)] * x[static_cast<std::size_t>(e.b)];
                        S(mu, nu) = v;
                        S(nu, mu) = -v;
                    }
                return S;
            }};
}

MatrixField random_coordinate_map(int m, PortableRng& rng, CoordinateChange kind) {
    if (kind == CoordinateChange::identity) return identity_gauge(m).coord_map;
    const double lin = kind == CoordinateChange::affine ? 0.8 / m : 0.4 / m;
    const double quad = kind == CoordinateChange::affine ? 0.0 : 0.1 / m;
    auto M = std::make_shared<RealTensor>(std::vector<int>{m, m});
    auto b = std::make_shared<std::vector<double>>(static_cast<std::size_t>(m));
    auto Q = std::make_shared<RealTensor>(std::vector<int>{m, m, m});
    for (int a = 0; a < m; ++a) {
        (*b)[static_cast<std::size_t>(a)] = rng.uniform(-1.0, 1.0);
        for (int i = 0; i < m; ++i) (*M)(a, i) = (a == i ? 1.0 : 0.0) + lin * rng.uniform(-1.0, 1.0);
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) (*Q)(a, i, j) = quad * rng.uniform(-1.0, 1.0);
    }
    return {1, m, [m, M, b, Q, quad](std::span<const Jet2> x) {
                Tensor<Jet2> out({1, m});
                for (int a = 0; a < m; ++a) {
                    Jet2 v((*b)[static_cast<std::size_t>(a)]);
                    for (int i = 0; i < m; ++i) v += Jet2((*M)(a, i)) * x[static_cast<std::size_t>(i)];
                    if (quad != 0.0)
                        for (int i = 0; i < m; ++i)
                            for (int j = i; j < m; ++j)
                                v += Jet2((*Q)(a, i, j)) * x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
                    out(0, a) = v;
                }
                return out;
            }};
}

GaugeElement random_gauge_element(const Signature& sig, PortableRng& rng, CoordinateChange kind, bool constant_lambda) {
    const int m = sig.dim();
    MatrixField L = lorentz_exponential(sig, random_generator(m, rng, 0.4, constant_lambda));
    return {std::move(L), random_coordinate_map(m, rng, kind)};
}

GaugeElement centred_gauge(const GaugeElement& g, std::span<const double> center) {
    auto c = std::make_shared<std::vector<double>>(center.begin(), center.end());
    const std::size_t n = c->size();
    if (static_cast<int>(n) != g.coord_map.cols) throw ShapeError("centred_gauge: center has the wrong dimension");
    const auto shift = [c, n](std::span<const Jet2> x) {
        std::vector<Jet2> y(x.begin(), x.end());
        for (std::size_t i = 0; i < n; ++i) y[i] -= Jet2((*c)[i]);
        return y;
    };
    auto L = std::make_shared<MatrixField>(g.Lambda);
    auto map = std::make_shared<MatrixField>(g.coord_map);
    GaugeElement out;
    out.Lambda = {L->rows, L->cols, [L, shift](std::span<const Jet2> x) { return (*L)(shift(x)); }};
    out.coord_map = {map->rows, map->cols, [map, shift, c, n](std::span<const Jet2> x) {
                         Tensor<Jet2> y = (*map)(shift(x));
                         for (std::size_t i = 0; i < n; ++i) y(0, static_cast<int>(i)) += Jet2((*c)[i]);
                         return y;
                     }};
    return out;
}

}  // namespace vielbein
