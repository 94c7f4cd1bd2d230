#include "pdisc/tubedisc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "pdisc/fft.hpp"
#include "pdisc/fourier.hpp"
#include "pdisc/par.hpp"
#include "pdisc/riemann.hpp"
#include "pdisc/roots.hpp"

namespace pdisc {

double rho_max(const C2& z) { return std::max(z.z1.real(), z.z2.real()); }

namespace {

double G_model(double eps, double x1, double y1, double x2) {
    const double q = (1.0 - 2.0 * eps * x1) / (1.0 - 2.0 * eps * x2);
    return x1 + x2 - eps * (x1 * x1 + x2 * x2) + eps * y1 * y1 * (1.0 + q * q) - 1.0 + eps;
}

double dG_dx2(double eps, double x1, double y1, double x2) {
    const double a = 1.0 - 2.0 * eps * x1;
    const double b = 1.0 - 2.0 * eps * x2;
    return 1.0 - 2.0 * eps * x2 + 4.0 * eps * eps * y1 * y1 * a * a / (b * b * b);
}

}  // namespace

double ModelDisc::y2_of(double x1, double y1, double x2) const {
    return -y1 * (1.0 - 2.0 * eps * x1) / (1.0 - 2.0 * eps * x2);
}

double ModelDisc::xi(double x1, double y1) const {
    double lo = -0.75, hi = 1.0;
    if (!(dG_dx2(eps, x1, y1, lo) > 0.0) || !(dG_dx2(eps, x1, y1, hi) > 0.0))
        throw ConstructionError("model_disc: monotonicity of the defining function failed (eps too large)");
    double glo = G_model(eps, x1, y1, lo);
    double ghi = G_model(eps, x1, y1, hi);
    if (glo >= 0.0) return lo;  // far outside; callers treat via residual checks
    if (ghi <= 0.0) throw ConstructionError("model_disc: no root in the bracket (point outside the model range)");
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (G_model(eps, x1, y1, mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double ModelDisc::h_curve(double x1) const {
    // root of x1 + x2 - eps(x1^2+x2^2) - 1 + eps in x2 (the y1 = 0 slice)
    return xi(x1, 0.0);
}

C2 ModelDisc::point(cplx z1) const {
    const double x1 = z1.real(), y1 = z1.imag();
    const double x2 = xi(x1, y1);
    return {z1, cplx(x2, y2_of(x1, y1, x2))};
}

ModelDisc model_disc(double eps, int boundarySamples, int interiorGrid, bool certify) {
    if (!(eps > 0.0 && eps < 0.5)) throw PreconditionError("model_disc: eps must lie in (0, 1/2)");
    ModelDisc md;
    md.eps = eps;
    md.aEps = std::sqrt((1.0 - eps) / (2.0 * eps));

    // trace the bulge x1 = g(y1) and close the domain with the left edge
    const int m = std::max(64, boundarySamples);
    auto solve_g = [&](double y) {
        double lo = 0.0, hi = 1.0;
        const double glo = G_model(eps, lo, y, 0.0);
        if (glo >= 0.0) return 0.0;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (G_model(eps, mid, y, 0.0) < 0.0)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    md.domain.boundary.clear();
    md.domain.boundary.reserve(static_cast<size_t>(m) + 66);
    md.domain.boundary.emplace_back(0.0, -md.aEps);
    for (int i = 1; i < m; ++i) {
        const double y = -md.aEps + 2.0 * md.aEps * static_cast<double>(i) / static_cast<double>(m);
        md.domain.boundary.emplace_back(solve_g(y), y);
    }
    md.domain.boundary.emplace_back(0.0, md.aEps);
    for (int i = 1; i < 64; ++i) {
        const double y = md.aEps - 2.0 * md.aEps * static_cast<double>(i) / 64.0;
        md.domain.boundary.emplace_back(0.0, y);
    }
    md.domain.center = cplx(0.5, 0.0);

    // real trace gamma as a graph over [0,1]
    const int gSamples = 129;
    md.curveX1.resize(gSamples);
    md.curveH.resize(gSamples);
    for (int i = 0; i < gSamples; ++i) {
        const double x1 = static_cast<double>(i) / static_cast<double>(gSamples - 1);
        md.curveX1[static_cast<size_t>(i)] = x1;
        md.curveH[static_cast<size_t>(i)] = md.xi(x1, 0.0);
    }

    if (certify) {
        double worstSys = 0.0, worstK = 0.0, worstY = 0.0, worstTrace = 0.0;
        auto system_residual = [&](const C2& p) {
            const double x1 = p.z1.real(), y1 = p.z1.imag(), x2 = p.z2.real(), y2 = p.z2.imag();
            const double e1 = x1 + x2 - eps * (x1 * x1 + x2 * x2) + eps * (y1 * y1 + y2 * y2) - 1.0 + eps;
            const double e2 = (1.0 - 2.0 * eps * x1) * y1 + (1.0 - 2.0 * eps * x2) * y2;
            return std::max(std::abs(e1), std::abs(e2));
        };
        auto corner_dist = [](double x1, double x2) {
            const double d1 = std::hypot(x1 - std::clamp(x1, 0.0, 1.0), x2);
            const double d2 = std::hypot(x1, x2 - std::clamp(x2, 0.0, 1.0));
            return std::min(d1, d2);
        };
        // boundary samples
        for (int i = 0; i < static_cast<int>(md.domain.boundary.size()); ++i) {
            const C2 p = md.point(md.domain.boundary[static_cast<size_t>(i)]);
            worstSys = std::max(worstSys, system_residual(p));
            worstK = std::max(worstK, corner_dist(p.z1.real(), p.z2.real()));
            worstY = std::max(worstY, p.z1.imag() * p.z1.imag() + p.z2.imag() * p.z2.imag() - 1.0 / eps);
        }
        // interior grid and the real trace
        for (int a = 1; a < interiorGrid; ++a) {
            for (int b = 1; b < interiorGrid; ++b) {
                const double x1 = static_cast<double>(a) / interiorGrid;
                const double y1 = -md.aEps + 2.0 * md.aEps * static_cast<double>(b) / interiorGrid;
                if (G_model(eps, x1, y1, 0.0) >= 0.0) continue;  // outside D_eps
                worstSys = std::max(worstSys, system_residual(md.point(cplx(x1, y1))));
            }
        }
        for (int i = 0; i < gSamples; ++i) {
            const C2 p = md.point(cplx(md.curveX1[static_cast<size_t>(i)], 0.0));
            worstTrace = std::max(worstTrace, std::abs(p.z2.imag()));
            worstTrace = std::max(worstTrace, std::abs(p.z2.real() - md.curveH[static_cast<size_t>(i)]));
        }
        md.cert.add("system_residual", "<=", worstSys, 1e-9);
        md.cert.add("boundary_on_corner_set", "<=", worstK, 1e-8);
        md.cert.add("boundary_y_bound", "<=", worstY, 1e-8);
        md.cert.add("real_trace", "<=", worstTrace, 1e-9);
        md.cert.add("endpoint_xi_1_0", "<=", std::abs(md.xi(1.0, 0.0)), 1e-10);
        md.cert.add("endpoint_xi_0_0", "<=", std::abs(md.xi(0.0, 0.0) - 1.0), 1e-10);
        md.cert.params["eps"] = eps;
        md.cert.params["a_eps"] = md.aEps;
    }
    return md;
}

namespace {

struct ChordData {
    double alpha = 0.0, beta = 0.0;  // direction (alpha, -beta)
    double v = 0.0;                  // diagonal-crossing value of the raw chord
};

ChordData chord_direction(double x1, double x2, double C0, double C1, const TubeOptions& opt, bool* swappedOut) {
    ChordData cd;
    if (opt.rule == ChordRule::MaxCoordinate) {
        const bool swapped = x2 > x1;
        if (swappedOut) *swappedOut = swapped;
        const double xa = swapped ? x2 : x1;
        const double xb = swapped ? x1 : x2;
        const double vStar = 0.5 * (xa + C0);
        double delta = 1.0;
        if (xb < vStar) delta = std::clamp((xa - vStar) / (vStar - xb), 1e-6, 1.0);
        cd.alpha = delta;
        cd.beta = 1.0;
        cd.v = (xa + delta * xb) / (1.0 + delta);
        return cd;
    }
    // smooth symmetric rule: soft clearance weights keep the chord away from
    // a coordinate that sits near the floor, without any swap
    if (swappedOut) *swappedOut = false;
    const double scale = C1 - C0;
    const double tau = opt.sigmaScale * scale;
    auto soft = [tau](double u) { return 0.5 * (u + std::sqrt(u * u + tau * tau)); };
    cd.alpha = (C1 - x1) * soft(x2 - C0);
    cd.beta = (C1 - x2) * soft(x1 - C0);
    cd.v = (cd.beta * x1 + cd.alpha * x2) / (cd.alpha + cd.beta);
    return cd;
}

}  // namespace

C2 PointDisc::eval(cplx w) const {
    const cplx u = phi.eval(w);
    const C2 mp = model->point(u);
    C2 out(tri.l12 * mp.z2 + tri.v01, tri.l21 * mp.z1 + tri.v02);
    if (tri.swapped) std::swap(out.z1, out.z2);
    return out;
}

C2 PointDisc::centered(cplx w) const { return eval(w) - eval(cplx(0.0, 0.0)); }

PointDisc disc_through_point(const C2& z, double C0, double C1, double tol, const TubeOptions& opt) {
    if (!(C0 < rho_max(z) && rho_max(z) < C1))
        throw PreconditionError("disc_through_point: requires C0 < rho_max(z) < C1");

    // work with possibly swapped coordinates so the rule sees (x1 >= x2)
    bool swapped = false;
    ChordData cd = chord_direction(z.z1.real(), z.z2.real(), C0, C1, opt, &swapped);
    const C2 zz = swapped ? C2(z.z2, z.z1) : z;
    if (opt.rule == ChordRule::MaxCoordinate) {
        // direction recomputed in the swapped frame
        cd.alpha = cd.alpha;  // alpha was already computed against (xa, xb)
    }
    const double x1 = zz.z1.real(), x2 = zz.z2.real();
    const double y1 = zz.z1.imag(), y2 = zz.z2.imag();

    ChordTriangle tri;
    tri.base = z;
    tri.C0 = C0;
    tri.C1 = C1;
    tri.swapped = swapped;
    tri.delta = cd.alpha / cd.beta;
    tri.crossingValue = cd.v;
    if (!(cd.v > C0))
        throw ConstructionError("disc_through_point: chord crossing value does not clear the floor");

    // offset the chord away from the corner so z becomes interior
    const double eta = opt.offsetFactor * (C1 - rho_max(z));
    tri.offset = eta;
    const double nn = std::hypot(cd.beta, cd.alpha);
    const double ox1 = x1 - eta * cd.beta / nn;
    const double ox2 = x2 - eta * cd.alpha / nn;

    const double tp = (C1 - ox1) / cd.alpha;
    const double p2 = ox2 - tp * cd.beta;
    const double tq = -(C1 - ox2) / cd.beta;
    const double q1 = ox1 + tq * cd.alpha;
    if (!(p2 < C1 && q1 < C1)) throw ConstructionError("disc_through_point: degenerate chord endpoints");
    tri.p = cplx(C1, p2);
    tri.q = cplx(q1, C1);
    tri.l12 = q1 - C1;  // both negative
    tri.l21 = p2 - C1;
    tri.v01 = cplx(C1, y1);
    tri.v02 = cplx(C1, y2);

    // pull the base point back to model coordinates
    const double m1 = (x2 - C1) / tri.l21;
    const double m2 = (x1 - C1) / tri.l12;
    if (!(m1 > 0.0 && m1 < 1.0 && m2 > 0.0 && m2 < 1.0))
        throw ConstructionError("disc_through_point: base point does not pull back into the model triangle");

    // model parameter by bisection on the planar quadric value at (m1, m2)
    auto F = [&](double e) { return m1 + m2 - e * (m1 * m1 + m2 * m2) - 1.0 + e; };
    double lo = 1e-9, hi = 0.5 - 1e-9;
    if (!(F(lo) < 0.0 && F(hi) > 0.0))
        throw ConstructionError("disc_through_point: no admissible model parameter for this offset");
    for (int it = 0; it < 90; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (F(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    tri.eps = 0.5 * (lo + hi);
    tri.uc = m1;

    PointDisc disc;
    disc.tri = tri;
    auto md = std::make_shared<ModelDisc>(model_disc(tri.eps, opt.boundarySamples, opt.interiorGrid, opt.certify));
    md->domain.center = cplx(tri.uc, 0.0);
    disc.model = md;
    disc.phi = riemann_map(md->domain, 1e-3, opt.riemann);
    if (!disc.phi.ok) throw ConstructionError("disc_through_point: conformal certification failed on the model domain");

    if (opt.certify) {
        double bandErr = 0.0;
        const int wGrid = 128;
        for (int k = 0; k < wGrid; ++k)
            bandErr = std::max(bandErr, std::abs(rho_max(disc.eval(unit_node(k, wGrid))) - C1));
        double minRho = 1e300;
        for (double t : radius_ladder(0.0, 1.0, 6)) {
            for (int k = 0; k < 64; ++k) {
                const cplx w = (t == 0.0) ? cplx(0.0, 0.0) : t * unit_node(k, 64);
                minRho = std::min(minRho, rho_max(disc.eval(w)));
                if (t == 0.0) break;
            }
        }
        disc.cert.add("boundary_level", "<=", bandErr, tol);
        disc.cert.add("interior_floor", ">", minRho, C0);
        disc.cert.add("center_hit", "<=", dist(disc.eval(cplx(0.0, 0.0)), z), tol);
        disc.cert.params["eps"] = tri.eps;
        disc.cert.params["u_c"] = tri.uc;
        disc.cert.absorb(md->cert, "model.");
    }
    return disc;
}

LeviStep lift_step_tube(const PolyMap& g0, double C0, double C1, double eps, double r, const LiftOptions& opt,
                        const TubeOptions& tubeIn) {
    if (!(C0 < C1)) throw PreconditionError("lift_step_tube: requires C0 < C1");
    if (!(eps > 0.0) || !(r > 0.0 && r < 1.0)) throw PreconditionError("lift_step_tube: bad eps or r");

    TubeOptions tube = tubeIn;
    tube.rule = ChordRule::Smooth;  // the family must vary continuously along the circle
    tube.certify = false;
    tube.riemann.quadPoints = opt.riemannQuad;
    tube.riemann.basisSize = opt.riemannBasis;
    tube.riemann.fftSize = opt.riemannFFT;
    tube.riemann.maxPhiDegree = opt.riemannMaxPhi;
    tube.riemann.polishSweeps = opt.riemannPolish;
    tube.riemann.verifyNodes = 256;
    tube.riemann.validateDomain = false;

    // hypothesis: the base map stays strictly inside the level band on the annulus
    {
        const int nn = pow2_ceil(opt.verifyTheta);
        for (double t : radius_ladder(r, 1.0, opt.verifyRadii)) {
            std::vector<C2> bv = g0.degree() > 2048 ? g0.values_on_circle(t, nn) : std::vector<C2>{};
            for (int k = 0; k < nn; ++k) {
                const C2 v = bv.empty() ? g0.eval(t * unit_node(k, nn)) : bv[static_cast<size_t>(k)];
                const double rv = rho_max(v);
                if (!(rv > C0)) throw HypothesisError("(band low)", k, rv);
                if (!(rv < C1)) throw HypothesisError("(band high)", k, rv);
            }
        }
    }

    int n = pow2_ceil(std::max(opt.familyNodes, static_cast<int>(opt.nodeFactor * (g0.degree() + 1))));
    n = std::min(n, std::max(8, opt.maxFamilyNodes));
    const int wOrder = std::min(opt.maxWOrder, std::max(opt.wOrder, 24));
    const double rescale = std::max(opt.taylorRescale, 1.0 - 0.25 / static_cast<double>(wOrder));
    const double a0tol = 1e-5 * std::max(1.0, C1 - C0);

    const bool constantBase = g0.degree() == 0;
    auto build_node = [&](cplx zeta) {
        const C2 z = g0.eval(zeta);
        PointDisc disc = disc_through_point(z, C0, C1, 0.1 * eps, tube);
        std::vector<cplx> single{zeta};
        auto fam = taylor_truncate(
            single, [&](cplx, cplx w) { return disc.centered(w); }, wOrder, rescale,
            pow2_ceil(std::max(64, 4 * wOrder)), a0tol);
        return fam.coeffs[0];
    };

    DiscFamily family;
    family.nodes = unit_nodes(n);
    family.wOrder = wOrder;
    family.coeffs.resize(static_cast<size_t>(n) * static_cast<size_t>(wOrder));
    if (constantBase) {
        auto cs = build_node(family.nodes[0]);
        for (int i = 0; i < n; ++i)
            std::copy(cs.begin(), cs.end(), family.coeffs.begin() + static_cast<long long>(i) * wOrder);
    } else {
        parallel_for(n, [&](int i) {
            auto cs = build_node(family.nodes[static_cast<size_t>(i)]);
            std::copy(cs.begin(), cs.end(), family.coeffs.begin() + static_cast<long long>(i) * wOrder);
        });
    }
    {
        const PolyMap g0copy = g0;
        family.resample = [g0copy, C0, C1, eps, wOrder, rescale, a0tol, tube](cplx zeta) {
            const C2 z = g0copy.eval(zeta);
            PointDisc disc = disc_through_point(z, C0, C1, 0.1 * eps, tube);
            std::vector<cplx> single{zeta};
            auto fam = taylor_truncate(
                single, [&](cplx, cplx w) { return disc.centered(w); }, wOrder, rescale,
                pow2_ceil(std::max(64, 4 * wOrder)), a0tol);
            return fam.coeffs[0];
        };
    }

    // measured boundary band of the truncated family
    double hypBand = 0.0;
    {
        std::vector<double> bands(static_cast<size_t>(n), 0.0);
        const int wGrid = std::max(64, 4 * wOrder);
        parallel_for(n, [&](int i) {
            const C2 base = g0.eval(family.nodes[static_cast<size_t>(i)]);
            double worst = 0.0;
            for (int k = 0; k < wGrid; ++k)
                worst = std::max(worst,
                                 std::abs(rho_max(base + family.eval_node(i, unit_node(k, wGrid))) - C1));
            bands[static_cast<size_t>(i)] = worst;
        });
        for (double b : bands) hypBand = std::max(hypBand, b);
    }

    RhoFn rho = [](const C2& v) { return rho_max(v); };
    LevelFn level = [C1](cplx, const C2&) { return C1; };
    FloorFn floor = [C0](cplx, const C2&) { return C0; };
    PushResult push = push_boundary_level(g0, family, rho, level, floor, true, eps, r, hypBand + 1e-12, opt);

    LeviStep out;
    out.g = push.g;
    out.cert = push.cert;
    out.hypBand = hypBand;
    out.cert.params["tube_hyp_band"] = hypBand;
    out.cert.params["tube_nodes"] = static_cast<double>(n);
    out.cert.params["tube_w_order"] = static_cast<double>(wOrder);
    return out;
}

FactorResult factor_zeros(const PolyMap& h, double r) {
    if (!(r > 0.0 && r < 1.0)) throw PreconditionError("factor_zeros: r must lie in (0,1)");
    FactorResult out;
    std::vector<std::vector<cplx>> comps{h.component(0), h.component(1)};
    std::vector<std::vector<cplx>> reduced;
    for (int which = 0; which < 2; ++which) {
        auto c = poly_trimmed(comps[static_cast<size_t>(which)], 0.0);
        double scale = 0.0;
        for (const auto& v : c) scale = std::max(scale, std::abs(v));
        if (scale == 0.0)
            throw PreconditionError("factor_zeros: component " + std::to_string(which + 1) + " is identically zero");
        auto roots = companion_roots(c);
        for (const auto& root : roots) {
            const double m = std::abs(root);
            if (m < r * (1.0 - 1e-12)) {
                c = deflate_root(c, root);
                (which == 0 ? out.removedRoots1 : out.removedRoots2).push_back(root);
            } else if (m <= 1.0 + 1e-9) {
                throw PreconditionError("factor_zeros: component " + std::to_string(which + 1) +
                                        " has a zero on the annulus r <= |zeta| <= 1");
            }
        }
        reduced.push_back(c);
    }
    out.reduced = PolyMap::from_components(reduced[0], reduced[1]);

    double minMod = 1e300;
    double scale = 0.0;
    for (double t : radius_ladder(0.0, 1.0, 9)) {
        for (int k = 0; k < 512; ++k) {
            const cplx pt = (t == 0.0) ? cplx(0.0, 0.0) : t * unit_node(k, 512);
            const C2 v = out.reduced.eval(pt);
            minMod = std::min(minMod, std::min(std::abs(v.z1), std::abs(v.z2)));
            scale = std::max(scale, std::max(std::abs(v.z1), std::abs(v.z2)));
            if (t == 0.0) break;
        }
    }
    out.minModulus = minMod;
    out.cert.add("nonvanishing_margin", ">", minMod, 1e-10 * std::max(1.0, scale));
    return out;
}

ExpDisc exponentiate(const PolyMap& g, int nTheta, int nRadii) {
    ExpDisc out;
    out.g = g;
    double worst = 0.0;
    double worstLog = 0.0;
    bool guarded = false;
    const int nn = pow2_ceil(nTheta);
    for (double t : radius_ladder(0.0, 1.0, nRadii)) {
        std::vector<C2> gv = g.degree() > 2048 ? g.values_on_circle(t, nn) : std::vector<C2>{};
        for (int k = 0; k < nn; ++k) {
            const cplx pt = t * unit_node(k, nn);
            const C2 v = gv.empty() ? g.eval(pt) : gv[static_cast<size_t>(k)];
            const double u1 = v.z1.real(), u2 = v.z2.real();
            if (u1 > 300.0 || u2 > 300.0) {
                guarded = true;  // magnitudes compared in log form only
                continue;
            }
            const cplx f1 = std::exp(v.z1), f2 = std::exp(v.z2);
            worst = std::max(worst, std::abs(std::abs(f1) - std::exp(u1)));
            worst = std::max(worst, std::abs(std::abs(f2) - std::exp(u2)));
            worstLog = std::max(worstLog, std::abs(std::log(std::max(std::abs(f1), std::abs(f2))) -
                                                   std::max(u1, u2)));
            if (t == 0.0) break;
        }
    }
    out.maxIdentityErr = worst;
    out.overflowGuarded = guarded;
    out.cert.add("modulus_identity", "<=", worst, 1e-10);
    out.cert.add("log_max_identity", "<=", worstLog, 1e-10);
    return out;
}

namespace {

double rho_extreme_on_annulus(const PolyMap& g, double rLo, double rHi, int nTheta, int nRadii, bool wantMin) {
    double best = wantMin ? 1e300 : -1e300;
    const int nn = pow2_ceil(nTheta);
    for (double t : radius_ladder(rLo, rHi, nRadii)) {
        std::vector<C2> gv = g.degree() > 2048 ? g.values_on_circle(t, nn) : std::vector<C2>{};
        for (int k = 0; k < nn; ++k) {
            const cplx pt = t * unit_node(k, nn);
            const double v = rho_max(gv.empty() ? g.eval(pt) : gv[static_cast<size_t>(k)]);
            best = wantMin ? std::min(best, v) : std::max(best, v);
        }
    }
    return best;
}

double sup_diff_disc(const PolyMap& a, const PolyMap& b, double rHi, int nTheta, int nRadii) {
    double worst = 0.0;
    const int nn = pow2_ceil(nTheta);
    for (double t : radius_ladder(0.0, rHi, nRadii)) {
        if (t == 0.0) {
            worst = std::max(worst, (a.eval(cplx(0.0, 0.0)) - b.eval(cplx(0.0, 0.0))).norm());
            continue;
        }
        std::vector<C2> av = a.degree() > 2048 ? a.values_on_circle(t, nn) : std::vector<C2>{};
        std::vector<C2> bv = b.degree() > 2048 ? b.values_on_circle(t, nn) : std::vector<C2>{};
        for (int k = 0; k < nn; ++k) {
            const cplx pt = t * unit_node(k, nn);
            const C2 va = av.empty() ? a.eval(pt) : av[static_cast<size_t>(k)];
            const C2 vb = bv.empty() ? b.eval(pt) : bv[static_cast<size_t>(k)];
            worst = std::max(worst, (va - vb).norm());
        }
    }
    return worst;
}

}  // namespace

TubeSequence build_axis_avoiding_disc(const PolyMap& h, double r1, const std::vector<double>& epsSchedule, int K,
                                      const LiftOptions& opt, const TubeOptions& tube) {
    if (!(r1 > 0.0 && r1 < 1.0)) throw PreconditionError("build_axis_avoiding_disc: r1 must lie in (0,1)");
    if (K < 1) throw PreconditionError("build_axis_avoiding_disc: stage count must be >= 1");
    if (static_cast<int>(epsSchedule.size()) < K - 1)
        throw PreconditionError("build_axis_avoiding_disc: eps schedule too short for the stage count");
    {
        double sum = 0.0;
        for (double e : epsSchedule) {
            if (!(e > 0.0)) throw PreconditionError("build_axis_avoiding_disc: eps schedule must be positive");
            sum += e;
        }
        if (!(sum < 1.0)) throw PreconditionError("build_axis_avoiding_disc: eps schedule must sum below 1");
    }

    const auto t0 = std::chrono::steady_clock::now();
    auto out_of_time = [&]() {
        if (opt.timeBudgetSec <= 0.0) return false;
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() > opt.timeBudgetSec;
    };

    TubeSequence seq;
    seq.epsSchedule = epsSchedule;

    // reduce to a zero-free seed and take its logarithm with a continuous branch
    FactorResult fr = factor_zeros(h, r1);
    seq.seed = fr.reduced;

    PolyMap g1;
    {
        std::vector<std::vector<cplx>> logs;
        const int m = pow2_ceil(std::max(512, 8 * (fr.reduced.degree() + 1)));
        for (int which = 0; which < 2; ++which) {
            std::vector<cplx> vals(static_cast<size_t>(m));
            double prevArg = 0.0;
            for (int k = 0; k < m; ++k) {
                const C2 v = fr.reduced.eval(unit_node(k, m));
                const cplx fv = which == 0 ? v.z1 : v.z2;
                double a = std::arg(fv);
                if (k == 0) {
                    prevArg = a;
                } else {
                    while (a - prevArg > kTwoPi / 2.0) a -= kTwoPi;
                    while (a - prevArg < -kTwoPi / 2.0) a += kTwoPi;
                    prevArg = a;
                }
                vals[static_cast<size_t>(k)] = cplx(std::log(std::abs(fv)), a);
            }
            auto dft = dft_coefficients(vals);
            std::vector<cplx> coeffs;
            for (int k = 0; k <= m / 2 - 1; ++k) {
                coeffs.push_back(dft[static_cast<size_t>(k)]);
            }
            coeffs = poly_trimmed(coeffs, 1e-13);
            logs.push_back(coeffs);
        }
        g1 = PolyMap::from_components(logs[0], logs[1]);
    }

    Stage s1;
    s1.g = g1;
    s1.r = r1;
    {
        double worst = 0.0;
        for (int k = 0; k < 1024; ++k) {
            const cplx zeta = unit_node(k, 1024);
            const C2 lg = g1.eval(zeta);
            const C2 hv = fr.reduced.eval(zeta);
            worst = std::max(worst, std::abs(std::exp(lg.z1) - hv.z1));
            worst = std::max(worst, std::abs(std::exp(lg.z2) - hv.z2));
        }
        s1.cert.add("log_branch_residual", "<=", worst, 1e-8);
        s1.cert.absorb(fr.cert, "factor.");
    }
    const double mx = rho_extreme_on_annulus(g1, r1, 1.0, opt.verifyTheta, opt.verifyRadii, false);
    const double mn = rho_extreme_on_annulus(g1, r1, 1.0, opt.verifyTheta, opt.verifyRadii, true);
    seq.levels.push_back(mn - 0.5);  // M_0
    seq.levels.push_back(mx + 0.5);  // M_1
    s1.M = seq.levels[1];
    s1.eps = epsSchedule.empty() ? 0.5 : epsSchedule[0];
    seq.stages.push_back(std::move(s1));

    for (int k = 2; k <= K; ++k) {
        if (out_of_time()) {
            seq.abortReason = "time budget exhausted before stage " + std::to_string(k);
            return seq;
        }
        const Stage& prev = seq.stages.back();
        const double epsK = epsSchedule[static_cast<size_t>(k - 2)];
        const double Mk = seq.levels.back() + 1.0;
        seq.levels.push_back(Mk);
        const double Mk1 = seq.levels[static_cast<size_t>(k - 1)];
        const double Mk2 = seq.levels[static_cast<size_t>(k - 2)];
        const double C1 = Mk - 2.0 * epsK;
        const double C0 = Mk2;

        LeviStep step;
        try {
            step = lift_step_tube(prev.g, C0, C1, epsK, prev.r, opt, tube);
        } catch (const std::exception& e) {
            seq.abortReason = std::string("stage ") + std::to_string(k) + " failed: " + e.what();
            return seq;
        }

        Stage s;
        s.g = step.g;
        s.M = Mk;
        s.eps = epsK;
        s.cert = step.cert;

        if (!step.cert.pass()) {
            s.r = prev.r;
            seq.stages.push_back(std::move(s));
            seq.abortReason = "stage " + std::to_string(k) + " certificate failed";
            return seq;
        }

        // (b_k) and (c_k)
        {
            const double minOn = rho_extreme_on_annulus(s.g, prev.r, 1.0, opt.verifyTheta, opt.verifyRadii, true);
            s.cert.add("stage_floor(b_k)", ">", minOn, Mk2);
            const double close = sup_diff_disc(s.g, prev.g, prev.r, opt.verifyTheta, opt.verifyRadii);
            s.cert.add("stage_closeness(c_k)", "<", close, epsK);
        }

        // radius with the strict halving law and the two-sided band (a_k)
        {
            bool found = false;
            for (int i = 0; i <= 30; ++i) {
                const double rk = 1.0 - (1.0 - prev.r) * 0.49 * std::pow(2.0, -i);
                if (rk <= prev.r) continue;
                const double lo = rho_extreme_on_annulus(s.g, rk, 1.0, opt.verifyTheta, opt.verifyRadii, true);
                const double hi = rho_extreme_on_annulus(s.g, rk, 1.0, opt.verifyTheta, opt.verifyRadii, false);
                if (lo > Mk1 && hi < Mk) {
                    s.r = rk;
                    s.cert.add("stage_band_low(a_k)", ">", lo, Mk1);
                    s.cert.add("stage_band_high(a_k)", "<", hi, Mk);
                    s.cert.add("radius_law", "<", 1.0 - rk, (1.0 - prev.r) / 2.0);
                    found = true;
                    break;
                }
            }
            if (!found) {
                s.r = prev.r;
                s.cert.add("stage_band_low(a_k)", ">", -1e300, Mk1);
                seq.stages.push_back(std::move(s));
                seq.abortReason = "no admissible radius for stage " + std::to_string(k);
                return seq;
            }
        }
        seq.stages.push_back(std::move(s));
    }

    // final annulus bounds and telescoping
    {
        const PolyMap& gK = seq.stages.back().g;
        double tailSum = 0.0;
        for (size_t j = 0; j < epsSchedule.size(); ++j) tailSum += epsSchedule[j];
        for (size_t k = 1; k < seq.stages.size(); ++k) {
            const Stage& st = seq.stages[k];
            const Stage& prevSt = seq.stages[k - 1];
            const double minOn =
                rho_extreme_on_annulus(gK, prevSt.r, st.r, opt.verifyTheta / 2, opt.verifyRadii, true);
            seq.finalBounds.add("annulus_floor_stage_" + std::to_string(k + 1), ">", minOn,
                                seq.levels[k - 1] - 1.0);
            double tail = 0.0;
            for (size_t j = k - 1; j < epsSchedule.size(); ++j) tail += epsSchedule[j];
            const double sup = sup_diff_disc(gK, st.g, st.r, opt.verifyTheta / 2, opt.verifyRadii);
            seq.finalBounds.add("telescoping_stage_" + std::to_string(k + 1), "<", sup, std::min(1.0, tail + 1e-15));
        }
        seq.expDisc = exponentiate(gK, opt.verifyTheta, opt.verifyRadii);
    }
    seq.complete = true;
    return seq;
}

}  // namespace pdisc
