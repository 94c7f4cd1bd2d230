#include "pdisc/conedisc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "pdisc/levi.hpp"
#include "pdisc/par.hpp"

namespace pdisc {

C2 flow(double c, const C2& z, double t) {
    if (t == 0.0) return z;
    const double ex = std::exp(2.0 * t);
    const double ey = std::exp(-2.0 * c * t);
    return {cplx(z.z1.real() * ex, z.z1.imag() * ey), cplx(z.z2.real() * ex, z.z2.imag() * ey)};
}

namespace {

double smoothstep01(double x) {
    x = std::clamp(x, 0.0, 1.0);
    return x * x * (3.0 - 2.0 * x);
}

}  // namespace

CrossResult cross_critical_level(const PolyMap& f0, double c, double targetLevel, double bumpInnerRadius,
                                 const CrossOptions& opt) {
    if (!(targetLevel > 0.0)) throw PreconditionError("cross_critical_level: target level must be positive");
    if (!(bumpInnerRadius > 0.0 && bumpInnerRadius < 1.0))
        throw PreconditionError("cross_critical_level: bump inner radius must lie in (0,1)");
    const int n = opt.nTheta;

    // transversality clearance: the stable manifold of the origin is {x = 0}
    for (int k = 0; k < n; ++k) {
        const C2 v = f0.eval(unit_node(k, n));
        const double xpart = std::hypot(v.z1.real(), v.z2.real());
        if (xpart <= opt.clearance)
            throw PreconditionError("cross_critical_level: boundary node " + std::to_string(k) +
                                    " lies on the stable manifold x = 0 within clearance");
    }

    // per-node flow time by bisection to the overshoot level
    const double overshoot = targetLevel * (1.0 + opt.margin) + 1e-9;
    std::vector<double> tau(static_cast<size_t>(n), 0.0);
    for (int k = 0; k < n; ++k) {
        const C2 v = f0.eval(unit_node(k, n));
        if (rho_cone(c, v) >= overshoot) {
            tau[static_cast<size_t>(k)] = 0.0;
            continue;
        }
        double hi = 1.0;
        while (rho_cone(c, flow(c, v, hi)) < overshoot && hi < 64.0) hi *= 2.0;
        double lo = 0.0;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (rho_cone(c, flow(c, v, mid)) < overshoot)
                lo = mid;
            else
                hi = mid;
        }
        tau[static_cast<size_t>(k)] = hi;
    }

    CrossResult out;
    out.params.c = c;
    out.params.bumpInnerRadius = bumpInnerRadius;
    out.params.schedule = tau;
    out.radii.resize(static_cast<size_t>(opt.nRadii));
    out.rings.resize(static_cast<size_t>(opt.nRadii));
    for (int j = 0; j < opt.nRadii; ++j) {
        const double t = static_cast<double>(j + 1) / static_cast<double>(opt.nRadii);
        out.radii[static_cast<size_t>(j)] = t;
        auto& ring = out.rings[static_cast<size_t>(j)];
        ring.resize(static_cast<size_t>(n));
        const double bump = smoothstep01((t - bumpInnerRadius) / (1.0 - bumpInnerRadius));
        for (int k = 0; k < n; ++k) {
            const C2 v = f0.eval(t * unit_node(k, n));
            const double a = t <= bumpInnerRadius ? 0.0 : bump * tau[static_cast<size_t>(k)];
            ring[static_cast<size_t>(k)] = a == 0.0 ? v : flow(c, v, a);
        }
    }

    // boundary level certification
    double minBoundary = 1e300;
    const auto& bring = out.rings.back();
    for (const auto& v : bring) minBoundary = std::min(minBoundary, rho_cone(c, v));
    out.cert.add("crossed_level", ">", minBoundary, targetLevel);

    // bit-identity inside the bump radius
    double innerDelta = 0.0;
    for (int j = 0; j < opt.nRadii; ++j) {
        const double t = out.radii[static_cast<size_t>(j)];
        if (t > bumpInnerRadius) continue;
        for (int k = 0; k < n; ++k)
            innerDelta =
                std::max(innerDelta, dist(out.rings[static_cast<size_t>(j)][static_cast<size_t>(k)],
                                          f0.eval(t * unit_node(k, n))));
    }
    out.cert.add("inner_identity", "<=", innerDelta, 0.0);

    // discrete dbar defect: (e^{i theta}/2)(d/dt + (i/t) d/dtheta), centred
    // differences on the sampled polar grid
    double defect = 0.0;
    const double dtheta = kTwoPi / static_cast<double>(n);
    const double dt = 1.0 / static_cast<double>(opt.nRadii);
    for (int j = 1; j + 1 < opt.nRadii; ++j) {
        const double t = out.radii[static_cast<size_t>(j)];
        for (int k = 0; k < n; ++k) {
            const C2 dr = (1.0 / (2.0 * dt)) * (out.rings[static_cast<size_t>(j + 1)][static_cast<size_t>(k)] -
                                                out.rings[static_cast<size_t>(j - 1)][static_cast<size_t>(k)]);
            const C2 dth =
                (1.0 / (2.0 * dtheta)) * (out.rings[static_cast<size_t>(j)][static_cast<size_t>((k + 1) % n)] -
                                          out.rings[static_cast<size_t>(j)][static_cast<size_t>((k + n - 1) % n)]);
            const cplx factor = 0.5 * unit_node(k, n);
            const C2 dbar = factor * (dr + (cplx(0.0, 1.0) / t) * dth);
            defect = std::max(defect, dbar.norm());
        }
    }
    out.params.defectNorm = defect;
    out.cert.params["defect_norm"] = defect;
    return out;
}

namespace {

double min_rho_on_annulus(const PolyMap& g, double c, double rLo, int nTheta, int nRadii) {
    double worst = 1e300;
    const int nn = pow2_ceil(nTheta);
    for (double t : radius_ladder(rLo, 1.0, nRadii)) {
        if (g.degree() > 2048) {
            auto gv = g.values_on_circle(t, nn);
            for (const auto& v : gv) worst = std::min(worst, rho_cone(c, v));
        } else {
            for (int k = 0; k < nn; ++k) worst = std::min(worst, rho_cone(c, g.eval(t * unit_node(k, nn))));
        }
    }
    return worst;
}

double sup_diff_on_disc(const PolyMap& a, const PolyMap& b, double rHi, int nTheta, int nRadii) {
    double worst = 0.0;
    const int nn = pow2_ceil(nTheta);
    const bool bigA = a.degree() > 2048, bigB = b.degree() > 2048;
    for (double t : radius_ladder(0.0, rHi, nRadii)) {
        if (t == 0.0) {
            worst = std::max(worst, (a.eval(cplx(0.0, 0.0)) - b.eval(cplx(0.0, 0.0))).norm());
            continue;
        }
        std::vector<C2> av = bigA ? a.values_on_circle(t, nn) : std::vector<C2>{};
        std::vector<C2> bv = bigB ? b.values_on_circle(t, nn) : std::vector<C2>{};
        for (int k = 0; k < nn; ++k) {
            const cplx pt = t * unit_node(k, nn);
            const C2 va = bigA ? av[static_cast<size_t>(k)] : a.eval(pt);
            const C2 vb = bigB ? bv[static_cast<size_t>(k)] : b.eval(pt);
            worst = std::max(worst, (va - vb).norm());
        }
    }
    return worst;
}

}  // namespace

StageSequence build_proper_cone_disc(const PolyMap& h, double c, double M, double eps, double r1, int K,
                                     const LiftOptions& opt) {
    if (!(c < 1.0)) throw PreconditionError("build_proper_cone_disc: requires c < 1");
    if (!(M > 0.0))
        throw PreconditionError("build_proper_cone_disc: requires M > 0 (cross the critical level first)");
    if (!(eps > 0.0)) throw PreconditionError("build_proper_cone_disc: eps must be positive");
    if (!(r1 > 0.0 && r1 < 1.0)) throw PreconditionError("build_proper_cone_disc: r1 must lie in (0,1)");
    if (K < 1) throw PreconditionError("build_proper_cone_disc: stage count must be >= 1");

    const auto t0 = std::chrono::steady_clock::now();
    auto out_of_time = [&]() {
        if (opt.timeBudgetSec <= 0.0) return false;
        const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return el > opt.timeBudgetSec;
    };

    StageSequence seq;
    seq.c = c;
    seq.M1 = M;
    seq.eps = eps;
    seq.r1 = r1;

    {
        double mT = 1e300;
        const int nn = pow2_ceil(2 * opt.verifyTheta);
        for (int k = 0; k < nn; ++k) mT = std::min(mT, rho_cone(c, h.eval(unit_node(k, nn))));
        if (!(mT > M))
            throw PreconditionError("build_proper_cone_disc: rho_c of the initial map must exceed M on the circle");
    }

    const LiftingRadius lr = lifting_radius(c, 256, opt.seed);
    seq.a = lr.a;

    // stage 1: the initial map with its annulus certificate
    {
        Stage s;
        s.g = h;
        s.M = M;
        s.eps = eps;
        double r = r1;
        bool found = false;
        for (int attempt = 0; attempt < 44; ++attempt) {
            const double minOn = min_rho_on_annulus(h, c, r, opt.verifyTheta, opt.verifyRadii);
            if (minOn > M) {
                s.cert.add("stage_floor(a_1)", ">", minOn, M);
                found = true;
                break;
            }
            const int j = static_cast<int>(std::ceil(-std::log2(std::max(1e-12, 1.0 - r)))) + 1;
            r = 1.0 - std::pow(2.0, -j);
        }
        if (!found) {
            seq.abortReason = "no annulus certifies the initial stage floor";
            return seq;
        }
        s.r = r;
        seq.stages.push_back(std::move(s));
    }

    for (int k = 2; k <= K; ++k) {
        if (out_of_time()) {
            seq.abortReason = "time budget exhausted before stage " + std::to_string(k);
            return seq;
        }
        const Stage& prev = seq.stages.back();
        const double Mk = (1.0 + seq.a) * prev.M;
        const double epsK = prev.eps / 2.0;

        ConeStep step;
        try {
            step = lift_step_cone(prev.g, c, epsK, prev.r, opt, &lr);
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

        // (b_k) and (c_k) against the previous stage tolerance
        {
            const double epsPrev = prev.eps;
            double floorMargin = 1e300;
            const int nn = pow2_ceil(opt.verifyTheta);
            for (double t : radius_ladder(0.0, 1.0, opt.verifyRadii + 1)) {
                if (t == 0.0) {
                    floorMargin = std::min(floorMargin, rho_cone(c, s.g.eval(cplx(0.0, 0.0))) -
                                                            rho_cone(c, prev.g.eval(cplx(0.0, 0.0))) + epsPrev);
                    continue;
                }
                std::vector<C2> gv = s.g.degree() > 2048 ? s.g.values_on_circle(t, nn) : std::vector<C2>{};
                std::vector<C2> pv = prev.g.degree() > 2048 ? prev.g.values_on_circle(t, nn) : std::vector<C2>{};
                for (int q = 0; q < nn; ++q) {
                    const cplx pt = t * unit_node(q, nn);
                    const C2 va = gv.empty() ? s.g.eval(pt) : gv[static_cast<size_t>(q)];
                    const C2 vb = pv.empty() ? prev.g.eval(pt) : pv[static_cast<size_t>(q)];
                    floorMargin = std::min(floorMargin, rho_cone(c, va) - rho_cone(c, vb) + epsPrev);
                }
            }
            s.cert.add("stage_monotone(b_k)", ">", floorMargin, 0.0);
            const double close = sup_diff_on_disc(s.g, prev.g, prev.r, opt.verifyTheta, opt.verifyRadii);
            s.cert.add("stage_closeness(c_k)", "<", close, epsPrev);
        }

        // choose r_k on the dyadic ladder, strictly past the previous radius
        {
            int j = static_cast<int>(std::ceil(-std::log2(std::max(1e-15, 1.0 - prev.r)))) + 1;
            j = std::max(j, k);  // the ladder keeps r_k >= 1 - 2^{-k}
            bool found = false;
            for (; j <= 48; ++j) {
                const double rk = 1.0 - std::pow(2.0, -j);
                if (rk <= prev.r) continue;
                const double minOn = min_rho_on_annulus(s.g, c, rk, opt.verifyTheta, opt.verifyRadii);
                if (minOn > Mk) {
                    s.r = rk;
                    s.cert.add("stage_floor(a_k)", ">", minOn, Mk);
                    found = true;
                    break;
                }
            }
            if (!found) {
                s.r = prev.r;
                s.cert.add("stage_floor(a_k)", ">", -1e300, Mk);
                seq.stages.push_back(std::move(s));
                seq.abortReason = "no admissible radius for stage " + std::to_string(k);
                return seq;
            }
        }
        seq.stages.push_back(std::move(s));
    }

    // telescoping bounds of the limit argument, re-verified on grids
    {
        const PolyMap& gK = seq.stages.back().g;
        const double supInit = sup_diff_on_disc(gK, seq.stages.front().g, r1, opt.verifyTheta, opt.verifyRadii);
        seq.telescoping.add("telescoping_initial", "<", supInit, eps);
        for (size_t k = 0; k + 1 < seq.stages.size(); ++k) {
            const Stage& st = seq.stages[k];
            const double sup = sup_diff_on_disc(gK, st.g, st.r, opt.verifyTheta / 2, opt.verifyRadii);
            seq.telescoping.add("telescoping_stage_" + std::to_string(k + 1), "<", sup, 2.0 * st.eps);
            const double minOn = min_rho_on_annulus(gK, c, st.r, opt.verifyTheta / 2, opt.verifyRadii);
            seq.telescoping.add("annulus_floor_stage_" + std::to_string(k + 1), ">", minOn, st.M - eps);
        }
        const Stage& last = seq.stages.back();
        const double minFinal = min_rho_on_annulus(gK, c, last.r, opt.verifyTheta, opt.verifyRadii);
        seq.telescoping.add("annulus_floor_final", ">", minFinal, last.M - eps);
    }
    seq.complete = true;
    return seq;
}

MeanValueReport falsify_c_ge_1(const PolyMap& f, double c, const std::vector<double>& radii, int nTheta) {
    if (!(c >= 1.0)) throw PreconditionError("falsify_c_ge_1: requires c >= 1");
    MeanValueReport rep;
    rep.c = c;
    const C2 f0 = f.eval(cplx(0.0, 0.0));
    rep.centerRho1 = rho_cone(1.0, f0);
    double worstGap = 0.0;
    for (double r : radii) {
        MeanValueReport::Row row;
        row.r = r;
        double mean = 0.0, min1 = 1e300, minc = 1e300;
        for (int k = 0; k < nTheta; ++k) {
            const C2 v = f.eval(r * unit_node(k, nTheta));
            const double r1v = rho_cone(1.0, v);
            mean += r1v;
            min1 = std::min(min1, r1v);
            minc = std::min(minc, rho_cone(c, v));
        }
        mean /= static_cast<double>(nTheta);
        row.meanRho1 = mean;
        row.minRho1 = min1;
        row.minRhoC = minc;
        rep.rows.push_back(row);
        worstGap = std::max(worstGap, std::abs(mean - rep.centerRho1));
        rep.cert.add("min_below_mean_r=" + std::to_string(r), "<=", min1, mean + 1e-12);
        rep.cert.add("rho_c_below_rho_1_r=" + std::to_string(r), "<=", minc, min1 + 1e-12);
    }
    rep.worstMeanGap = worstGap;
    rep.cert.add("harmonic_mean_identity", "<=", worstGap, 1e-7);
    return rep;
}

}  // namespace pdisc
