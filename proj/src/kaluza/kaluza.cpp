#include "vielbein/kaluza.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "vielbein/errors.hpp"

namespace vielbein {

namespace {

constexpr int kBase = 4;
constexpr int kFifth = 4;
const Signature kSig4{1, 3};
const Signature kSig5{1, 4};

Tensor<Jet1> first_order(const Tensor<Jet2>& t) {
    Tensor<Jet1> out(t.shape());
    for (std::size_t n = 0; n < t.size(); ++n) out.data()[n] = t.data()[n].first_order();
    return out;
}

Tensor<Jet1> frame_jets(const CoframePoint& cp) {
    const int m = cp.dim();
    Tensor<Jet1> e({m, m});
    for (int a = 0; a < m; ++a)
        for (int i = 0; i < m; ++i) {
            Jet1 j(cp.e(a, i));
            for (int h = 0; h < m; ++h) j.set_grad(h, cp.de(a, i, h));
            e(a, i) = j;
        }
    return e;
}

// F from jets of F_ab and of the frame. `chain(c, k)` converts gradients to
// the chart the point lives in; null means they already are.
FieldStrengthPoint field_strength_from(const Signature& sig, const Tensor<Jet1>& Fij, const Tensor<Jet1>& e,
                                       const RealTensor* chain) {
    const int m = sig.dim();
    const Tensor<Jet1> einv = inverse(e);
    FieldStrengthPoint F;
    F.Fij = RealTensor({m, m}, {kCoordDown, kCoordDown});
    F.Fmunu = RealTensor({m, m}, {kFrameDown, kFrameDown});
    F.Fup = RealTensor({m, m}, {kFrameUp, kFrameUp});
    F.Fmix = RealTensor({m, m}, {kFrameUp, kFrameDown});
    F.dFup = RealTensor({m, m, m}, {kFrameUp, kFrameUp, kCoordDown});
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) F.Fij(a, b) = Fij(a, b).value();
    for (int mu = 0; mu < m; ++mu)
        for (int nu = 0; nu < m; ++nu) {
            Jet1 acc(0.0);
            for (int j = 0; j < m; ++j)
                for (int i = 0; i < m; ++i) acc += Fij(j, i) * einv(j, mu) * einv(i, nu);
            F.Fmunu(mu, nu) = acc.value();
            F.Fup(mu, nu) = sig[mu] * sig[nu] * acc.value();
            F.Fmix(mu, nu) = sig[mu] * acc.value();
            for (int k = 0; k < m; ++k) {
                double d = 0.0;
                if (chain)
                    for (int c = 0; c < m; ++c) d += (*chain)(c, k) * acc.grad(c);
                else
                    d = acc.grad(k);
                F.dFup(mu, nu, k) = sig[mu] * sig[nu] * d;
            }
        }
    return F;
}

Tensor<Jet1> potential_curl(const Tensor<Jet2>& A) {
    Tensor<Jet1> Fij({kBase, kBase});
    for (int a = 0; a < kBase; ++a)
        for (int b = 0; b < kBase; ++b) Fij(a, b) = A(0, a).partial(b) - A(0, b).partial(a);
    return Fij;
}

// Sum over eps^{p l i j} eps_{n r a s} f(p, i, j, n, a, s) for fixed l and r.
template <class F>
double eps_pair_sum(const RealTensor& eps, int l, int r, F&& f) {
    double acc = 0.0;
    for (int p = 0; p < kBase; ++p)
        for (int i = 0; i < kBase; ++i)
            for (int j = 0; j < kBase; ++j) {
                const double su = eps(p, l, i, j);
                if (su == 0.0) continue;
                for (int n = 0; n < kBase; ++n)
                    for (int a = 0; a < kBase; ++a)
                        for (int s = 0; s < kBase; ++s) {
                            const double sd = eps(n, r, a, s);
                            if (sd != 0.0) acc += su * sd * f(p, i, j, n, a, s);
                        }
            }
    return acc;
}

void add_closed_forms(DiscrepancyReport& rep, const std::string& prefix, const SpinConnectionPoint& sp5,
                      const SpinConnectionPoint& sp4, const FieldStrengthPoint& F, std::span<const double> A,
                      const CoframePoint& cp4, double k) {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
    const RealTensor& w = sp5.omega;
    for (int r = 0; r < kBase; ++r) {
        a = std::max(a, std::fabs(w(kFifth, r, kFifth)));
        for (int l = 0; l < kBase; ++l) b = std::max(b, std::fabs(w(kFifth, r, l) + 0.5 * k * F.Fup(r, l)));
    }
    for (int j = 0; j < kBase; ++j)
        for (int nu = 0; nu < kBase; ++nu) {
            double rhs = 0.0;
            for (int r = 0; r < kBase; ++r) rhs += F.Fmix(nu, r) * cp4.e(r, j);
            c = std::max(c, std::fabs(w(j, nu, kFifth) + 0.5 * k * rhs));
            for (int mu = 0; mu < kBase; ++mu)
                d = std::max(d, std::fabs(w(j, mu, nu) - sp4.omega(j, mu, nu) -
                                          0.5 * k * k * F.Fup(mu, nu) * A[static_cast<std::size_t>(j)]));
        }
    rep.add(prefix + "omega_5^{r5}", a);
    rep.add(prefix + "omega_5^{rl}", b);
    rep.add(prefix + "omega_j^{n5}", c);
    rep.add(prefix + "omega_i^{mn}", d);
}

}  // namespace

double DiscrepancyReport::max() const {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, std::isnan(e.value) ? INFINITY : e.value);
    return m;
}

double DiscrepancyReport::at(const std::string& name) const {
    for (const auto& e : entries)
        if (e.name == name) return e.value;
    throw std::out_of_range("no discrepancy named '" + name + "'");
}

KaluzaConfig kaluza_config(const NamedSolution& sol) {
    if (sol.dim() != kBase) throw std::invalid_argument(sol.name + ": the five-dimensional lift needs a 4D solution");
    if (!sol.has_potential()) throw std::invalid_argument(sol.name + " carries no potential");
    return {sol.coframe(), sol.potential_field(), sol.coupling_k};
}

CoframeField lift_coframe(const KaluzaConfig& cfg) {
    auto tetrad = std::make_shared<MatrixField>(cfg.tetrad.e);
    auto A = std::make_shared<MatrixField>(cfg.A);
    const double k = cfg.k;
    return {kSig5, {5, 5, [tetrad, A, k](std::span<const Jet2> x) {
                        const auto base = x.first(kBase);
                        const Tensor<Jet2> e = (*tetrad)(base);
                        const Tensor<Jet2> a = (*A)(base);
                        Tensor<Jet2> out({5, 5});
                        for (int mu = 0; mu < kBase; ++mu)
                            for (int i = 0; i < kBase; ++i) out(mu, i) = e(mu, i);
                        for (int i = 0; i < kBase; ++i) out(kFifth, i) = Jet2(-k) * a(0, i);
                        out(kFifth, kFifth) = Jet2(1.0);
                        return out;
                    }}};
}

KaluzaPoint evaluate_kaluza(const KaluzaConfig& cfg, std::span<const double> x, double x5) {
    if (x.size() != static_cast<std::size_t>(kBase)) throw ShapeError("Kaluza points have four coordinates");
    KaluzaPoint kp;
    kp.k = cfg.k;
    kp.cp4 = evaluate_coframe(cfg.tetrad, x);
    kp.sp4 = spin_connection(kp.cp4);
    kp.R4 = curvature(kp.sp4);
    const std::vector<Jet2> seeds = jet_seed(x);
    const Tensor<Jet2> A = cfg.A(seeds);
    for (int i = 0; i < kBase; ++i) kp.A.push_back(A(0, i).value());
    kp.F = field_strength_from(kSig4, potential_curl(A), first_order(cfg.tetrad.e(seeds)), nullptr);
    std::vector<double> x5pt(x.begin(), x.end());
    x5pt.push_back(x5);
    kp.cp5 = evaluate_coframe(lift_coframe(cfg), x5pt);
    kp.sp5 = spin_connection(kp.cp5);
    return kp;
}

FieldStrengthPoint field_strength(const KaluzaConfig& cfg, std::span<const double> x) {
    const std::vector<Jet2> seeds = jet_seed(x);
    return field_strength_from(kSig4, potential_curl(cfg.A(seeds)), first_order(cfg.tetrad.e(seeds)), nullptr);
}

StressTensorPoint em_stress(const CoframePoint& cp4, const FieldStrengthPoint& F) {
    const int m = cp4.dim();
    const RealTensor ginv = inverse(metric(cp4));
    // Fud(l, j) = F^l_j = g^{la} F_aj
    RealTensor Fud({m, m});
    for (int l = 0; l < m; ++l)
        for (int j = 0; j < m; ++j) {
            double acc = 0.0;
            for (int a = 0; a < m; ++a) acc += ginv(l, a) * F.Fij(a, j);
            Fud(l, j) = acc;
        }
    double FF = 0.0;  // F_ij F^ij
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double up = 0.0;
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b) up += ginv(i, a) * ginv(j, b) * F.Fij(a, b);
            FF += F.Fij(i, j) * up;
        }
    StressTensorPoint out{RealTensor({m, m}, {kCoordUp, kFrameDown})};
    for (int l = 0; l < m; ++l)
        for (int r = 0; r < m; ++r) {
            double acc = 0.25 * cp4.einv(l, r) * FF;
            for (int j = 0; j < m; ++j)
                for (int i = 0; i < m; ++i) acc += Fud(l, j) * Fud(j, i) * cp4.einv(i, r);
            out.T(l, r) = acc;
        }
    return out;
}

RealTensor einstein_maxwell_residual(const KaluzaPoint& kp) {
    RealTensor res = einstein_density(kp.cp4, kp.R4);
    const RealTensor T = em_stress(kp.cp4, kp.F).T;
    const double c = 0.5 * kp.cp4.det * kp.k * kp.k;
    for (std::size_t n = 0; n < res.size(); ++n) res.data()[n] += c * T.data()[n];
    return res;
}

RealTensor einstein_maxwell_residual(const KaluzaConfig& cfg, std::span<const double> x) {
    return einstein_maxwell_residual(evaluate_kaluza(cfg, x));
}

RealTensor maxwell_divergence(const KaluzaPoint& kp) {
    const Signature& sig = kp.cp4.signature;
    const int m = sig.dim();
    const RealTensor& w = kp.sp4.omega;
    RealTensor out({m}, {kFrameUp});
    for (int a = 0; a < m; ++a) {
        double acc = 0.0;
        for (int i = 0; i < m; ++i)
            for (int b = 0; b < m; ++b) {
                double t = kp.F.dFup(a, b, i);
                for (int h = 0; h < m; ++h)
                    t += w(i, a, h) * sig[h] * kp.F.Fup(h, b) + w(i, b, h) * sig[h] * kp.F.Fup(a, h);
                acc += kp.cp4.einv(i, b) * t;
            }
        out(a) = acc;
    }
    return out;
}

RealTensor maxwell_residual(const KaluzaPoint& kp) {
    RealTensor out = maxwell_divergence(kp);
    const double c = 0.5 * kp.cp4.det * kp.k;
    for (double& v : out.data()) v *= c;
    return out;
}

RealTensor maxwell_residual(const KaluzaConfig& cfg, std::span<const double> x) {
    return maxwell_residual(evaluate_kaluza(cfg, x));
}

RealTensor lifted_vacuum_density(const KaluzaPoint& kp) { return einstein_density(kp.cp5, curvature(kp.sp5)); }

DiscrepancyReport reduction_check(const KaluzaConfig& cfg, std::span<const double> x) {
    return reduction_check(evaluate_kaluza(cfg, x, 0.0), evaluate_kaluza(cfg, x, 1.7));
}

DiscrepancyReport reduction_check(const KaluzaPoint& kp, const KaluzaPoint& shifted) {
    DiscrepancyReport rep;
    add_closed_forms(rep, "", kp.sp5, kp.sp4, kp.F, kp.A, kp.cp4, kp.k);
    // Vortex tensor -2 de^5 against -2k F.
    double vortex = 0.0;
    for (int a = 0; a < kBase; ++a)
        for (int b = 0; b < kBase; ++b)
            vortex = std::max(vortex, std::fabs(4.0 * kp.cp5.E(kFifth, a, b) + 2.0 * kp.k * kp.F.Fij(a, b)));
    rep.add("vortex", vortex);
    double constraint = std::fabs(kp.cp5.e(kFifth, kFifth) - 1.0);
    for (int mu = 0; mu < kBase; ++mu) constraint = std::max(constraint, std::fabs(kp.cp5.e(mu, kFifth)));
    rep.add("constraint", constraint);
    rep.add("x5_independence", max_abs_diff(metric(kp.cp5), metric(shifted.cp5)));
    return rep;
}

ChainTerms field_equation_chain_terms(const KaluzaPoint& kp) {
    const RealTensor eps = levi_civita(kBase, kFrameUp);
    const Signature& sig = kp.cp4.signature;
    const RealTensor& w = kp.sp5.omega;
    const RealTensor& dw = *kp.sp5.domega;
    const RealTensor& e = kp.cp5.e;
    const SectionPoint s5{kp.cp5, kp.sp5};
    const RealTensor B5 = el_residual_B(s5);

    // omega_a^b_h omega_c^{h d} summed over the four base frame values of h.
    auto ww = [&](int a, int b, int c, int d) {
        double acc = 0.0;
        for (int h = 0; h < kBase; ++h) acc += w(a, b, h) * sig[h] * w(c, h, d);
        return acc;
    };

    ChainTerms t;
    t.einstein_5d = RealTensor({kBase, kBase}, {kCoordUp, kFrameDown});
    t.einstein_expanded = RealTensor({kBase, kBase}, {kCoordUp, kFrameDown});
    for (int l = 0; l < kBase; ++l)
        for (int r = 0; r < kBase; ++r) {
            t.einstein_5d(l, r) = B5(l, r);
            const double sum = eps_pair_sum(eps, l, r, [&](int p, int i, int j, int n, int a, int s) {
                double v = (dw(j, i, a, s) + ww(j, a, i, s)) * e(n, p);
                v += w(j, a, kFifth) * w(i, kFifth, s) * e(n, p);
                v += (dw(j, kFifth, a, s) + ww(j, a, kFifth, s)) * e(kFifth, p) * e(n, i);
                v -= ww(kFifth, a, j, s) * e(kFifth, p) * e(n, i);
                v += ww(kFifth, s, j, kFifth) * e(n, p) * e(a, i);
                return v;
            });
            t.einstein_expanded(l, r) = 0.5 * sum;
        }

    t.maxwell_5d = RealTensor({kBase}, {kCoordUp});
    t.maxwell_expanded = RealTensor({kBase}, {kCoordUp});
    for (int l = 0; l < kBase; ++l) {
        t.maxwell_5d(l) = B5(l, kFifth);
        double acc = 0.0;
        for (int q = 0; q < kBase; ++q)
            for (int p = 0; p < kBase; ++p)
                for (int i = 0; i < kBase; ++i) {
                    const double su = eps(q, p, l, i);
                    if (su == 0.0) continue;
                    for (int mu = 0; mu < kBase; ++mu)
                        for (int nu = 0; nu < kBase; ++nu)
                            for (int a = 0; a < kBase; ++a)
                                for (int s = 0; s < kBase; ++s) {
                                    const double sd = eps(mu, nu, a, s);
                                    if (sd == 0.0) continue;
                                    const double X = dw(i, kFifth, a, s) + ww(i, a, kFifth, s);
                                    acc += su * sd * (-X + ww(kFifth, a, i, s)) * e(mu, q) * e(nu, p);
                                }
                }
        t.maxwell_expanded(l) = 0.25 * acc;
    }
    t.maxwell_saturated = RealTensor({kBase}, {kFrameUp});
    for (int a = 0; a < kBase; ++a) {
        double acc = 0.0;
        for (int l = 0; l < kBase; ++l) acc += e(a, l) * t.maxwell_expanded(l);
        t.maxwell_saturated(a) = acc;
    }
    return t;
}

DiscrepancyReport field_equation_chain_check(const KaluzaConfig& cfg, std::span<const double> x) {
    return field_equation_chain_check(evaluate_kaluza(cfg, x));
}

DiscrepancyReport field_equation_chain_check(const KaluzaPoint& kp) {
    const ChainTerms t = field_equation_chain_terms(kp);
    const RealTensor em = einstein_maxwell_residual(kp);
    RealTensor mx = maxwell_residual(kp);
    for (double& v : mx.data()) v *= kMaxwellSaturationFactor;
    DiscrepancyReport rep;
    rep.add("einstein:5d-expanded", max_abs_diff(t.einstein_5d, t.einstein_expanded));
    rep.add("einstein:expanded-final", max_abs_diff(t.einstein_expanded, em));
    rep.add("einstein:5d-final", max_abs_diff(t.einstein_5d, em));
    rep.add("maxwell:5d-expanded", max_abs_diff(t.maxwell_5d, t.maxwell_expanded));
    rep.add("maxwell:saturated-final", max_abs_diff(t.maxwell_saturated, mx));
    return rep;
}

double calibrate_coupling(const KaluzaConfig& cfg, std::span<const std::vector<double>> points) {
    double dt = 0.0, tt = 0.0;
    for (const auto& x : points) {
        const CoframePoint cp = evaluate_coframe(cfg.tetrad, x);
        const RealTensor D = einstein_density(cp, curvature(spin_connection(cp)));
        const RealTensor T = em_stress(cp, field_strength(cfg, x)).T;
        for (std::size_t n = 0; n < D.size(); ++n) {
            const double eT = cp.det * T.data()[n];
            dt += D.data()[n] * eT;
            tt += eT * eT;
        }
    }
    if (tt == 0.0) throw EvaluationError("calibrate_coupling: the configuration carries no field stress");
    const double k2 = -2.0 * dt / tt;
    if (!(k2 > 0.0)) throw EvaluationError("calibrate_coupling: fitted k^2 is not positive");
    return std::sqrt(k2);
}

RestrictedGauge random_restricted_gauge(PortableRng& rng, CoordinateChange kind) {
    GaugeElement g4 = random_gauge_element(kSig4, rng, kind);
    // f = c0 + c1.x + c2 x_a x_b
    auto c = std::make_shared<std::vector<double>>();
    for (int n = 0; n < 1 + kBase + 1; ++n) c->push_back(rng.uniform(-0.5, 0.5));
    const int a = static_cast<int>(rng.below(kBase)), b = static_cast<int>(rng.below(kBase));
    ScalarField f = [c, a, b](std::span<const Jet2> x) {
        Jet2 v((*c)[0]);
        for (int i = 0; i < kBase; ++i) v += Jet2((*c)[static_cast<std::size_t>(1 + i)]) * x[static_cast<std::size_t>(i)];
        v += Jet2((*c)[1 + kBase]) * x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(b)];
        return v;
    };
    return {std::move(g4.Lambda), std::move(g4.coord_map), std::move(f)};
}

RestrictedGauge centred_gauge(const RestrictedGauge& g, std::span<const double> center) {
    if (center.size() != static_cast<std::size_t>(kBase)) throw std::invalid_argument("centred_gauge: need a 4D center");
    GaugeElement base = centred_gauge(GaugeElement{g.Lambda, g.coord_map}, center);
    auto c = std::make_shared<std::vector<double>>(center.begin(), center.end());
    auto f = std::make_shared<ScalarField>(g.f);
    ScalarField shifted_f = [f, c](std::span<const Jet2> x) {
        std::vector<Jet2> y(x.begin(), x.end());
        for (int i = 0; i < kBase; ++i) y[static_cast<std::size_t>(i)] -= Jet2((*c)[static_cast<std::size_t>(i)]);
        return (*f)(y);
    };
    return {std::move(base.Lambda), std::move(base.coord_map), std::move(shifted_f)};
}

GaugeElement lift_gauge(const RestrictedGauge& g) {
    auto L = std::make_shared<MatrixField>(g.Lambda);
    auto map = std::make_shared<MatrixField>(g.coord_map);
    auto f = std::make_shared<ScalarField>(g.f);
    MatrixField L5{5, 5, [L](std::span<const Jet2> x) {
                       const Tensor<Jet2> l = (*L)(x.first(kBase));
                       Tensor<Jet2> out({5, 5});
                       for (int a = 0; a < kBase; ++a)
                           for (int b = 0; b < kBase; ++b) out(a, b) = l(a, b);
                       out(kFifth, kFifth) = Jet2(1.0);
                       return out;
                   }};
    MatrixField map5{1, 5, [map, f](std::span<const Jet2> x) {
                         const auto base = x.first(kBase);
                         const Tensor<Jet2> xb = (*map)(base);
                         Tensor<Jet2> out({1, 5});
                         for (int a = 0; a < kBase; ++a) out(0, a) = xb(0, a);
                         out(0, kFifth) = x[kFifth] + (*f)(base);
                         return out;
                     }};
    return {std::move(L5), std::move(map5)};
}

DiscrepancyReport restricted_gauge_check(const KaluzaConfig& cfg, const RestrictedGauge& g,
                                         std::span<const double> x, double potential_sign) {
    const KaluzaPoint kp = evaluate_kaluza(cfg, x);
    const GaugePoint gp = evaluate_gauge(GaugeElement{g.Lambda, g.coord_map}, x);
    const RealTensor Jinv = gp.jinv_values();
    const RealTensor J = inverse(Jinv);
    const std::vector<Jet2> seeds = jet_seed(x);
    const Tensor<Jet2> A = cfg.A(seeds);
    const Jet2 f = g.f(seeds);

    // Transformed 4D data as first-order jets in the old coordinates.
    KaluzaPoint kb;
    kb.k = kp.k;
    kb.cp4 = gauge_transform_frame(kp.cp4, gp);
    kb.sp4 = gauge_transform_omega(kp.sp4, gp);
    kb.R4 = curvature(kb.sp4);
    std::vector<Jet1> Abar(kBase);
    for (int a = 0; a < kBase; ++a) {
        Jet1 acc(0.0);
        for (int i = 0; i < kBase; ++i)
            acc += (A(0, i).first_order() + Jet1(potential_sign / kp.k) * f.partial(i)) * gp.Jinv(i, a);
        Abar[static_cast<std::size_t>(a)] = acc;
        kb.A.push_back(acc.value());
    }
    const Tensor<Jet1> Fij = potential_curl(A);
    Tensor<Jet1> Fbar({kBase, kBase}), ebar({kBase, kBase});
    const Tensor<Jet1> e = frame_jets(kp.cp4);
    for (int a = 0; a < kBase; ++a)
        for (int b = 0; b < kBase; ++b) {
            Jet1 acc(0.0), eb(0.0);
            for (int i = 0; i < kBase; ++i)
                for (int j = 0; j < kBase; ++j) {
                    acc += gp.Jinv(i, a) * gp.Jinv(j, b) * Fij(i, j);
                    eb += gp.Lambda(a, i) * e(i, j) * gp.Jinv(j, b);
                }
            Fbar(a, b) = acc;
            ebar(a, b) = eb;
        }
    kb.F = field_strength_from(kSig4, Fbar, ebar, &Jinv);

    DiscrepancyReport rep;
    // F computed from the transformed potential against the tensorial law.
    double curl = 0.0;
    for (int a = 0; a < kBase; ++a)
        for (int b = 0; b < kBase; ++b) {
            double d = 0.0;
            for (int c = 0; c < kBase; ++c)
                d += Jinv(c, b) * Abar[static_cast<std::size_t>(a)].grad(c) - Jinv(c, a) * Abar[static_cast<std::size_t>(b)].grad(c);
            curl = std::max(curl, std::fabs(d - kb.F.Fij(a, b)));
        }
    rep.add("F_gauge_law", curl);

    // The lifted frame transformed as a 5D configuration.
    std::vector<double> x5(x.begin(), x.end());
    x5.push_back(0.0);
    const GaugePoint gp5 = evaluate_gauge(lift_gauge(g), x5);
    const CoframePoint cp5 = gauge_transform_frame(kp.cp5, gp5);
    double constraint = std::fabs(cp5.e(kFifth, kFifth) - 1.0);
    for (int mu = 0; mu < kBase; ++mu) constraint = std::max(constraint, std::fabs(cp5.e(mu, kFifth)));
    rep.add("constraint_preserved", constraint);
    double route = 0.0;
    for (int i = 0; i < kBase; ++i) {
        route = std::max(route, std::fabs(cp5.e(kFifth, i) + kp.k * kb.A[static_cast<std::size_t>(i)]));
        for (int mu = 0; mu < kBase; ++mu) route = std::max(route, std::fabs(cp5.e(mu, i) - kb.cp4.e(mu, i)));
    }
    rep.add("lift_commutes", route);
    kb.cp5 = cp5;
    kb.sp5 = gauge_transform_omega(kp.sp5, gp5);
    add_closed_forms(rep, "reduction:", kb.sp5, kb.sp4, kb.F, kb.A, kb.cp4, kb.k);

    // Residuals as coordinate tensors: Z^l_d = res^l_r e^r_d / det, V^l = e^l_a M^a / det.
    auto mixed = [](const KaluzaPoint& p, const RealTensor& res) {
        RealTensor Z({kBase, kBase});
        for (int l = 0; l < kBase; ++l)
            for (int d = 0; d < kBase; ++d) {
                double acc = 0.0;
                for (int r = 0; r < kBase; ++r) acc += res(l, r) * p.cp4.e(r, d);
                Z(l, d) = acc / p.cp4.det;
            }
        return Z;
    };
    auto vector = [](const KaluzaPoint& p, const RealTensor& M) {
        RealTensor V({kBase});
        for (int l = 0; l < kBase; ++l) {
            double acc = 0.0;
            for (int a = 0; a < kBase; ++a) acc += p.cp4.einv(l, a) * M(a);
            V(l) = acc / p.cp4.det;
        }
        return V;
    };
    const RealTensor Z = mixed(kp, einstein_maxwell_residual(kp));
    const RealTensor Zb = mixed(kb, einstein_maxwell_residual(kb));
    const RealTensor V = vector(kp, maxwell_residual(kp));
    const RealTensor Vb = vector(kb, maxwell_residual(kb));
    double em = 0.0, mx = 0.0;
    for (int l = 0; l < kBase; ++l) {
        double v = 0.0;
        for (int a = 0; a < kBase; ++a) v += J(l, a) * V(a);
        mx = std::max(mx, std::fabs(v - Vb(l)));
        for (int d = 0; d < kBase; ++d) {
            double z = 0.0;
            for (int a = 0; a < kBase; ++a)
                for (int b = 0; b < kBase; ++b) z += J(l, a) * Z(a, b) * Jinv(b, d);
            em = std::max(em, std::fabs(z - Zb(l, d)));
        }
    }
    rep.add("einstein_maxwell_covariance", em);
    rep.add("maxwell_covariance", mx);
    return rep;
}

}  // namespace vielbein
