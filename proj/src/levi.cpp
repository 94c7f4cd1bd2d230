#include "pdisc/levi.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "pdisc/par.hpp"
#include "pdisc/rng.hpp"

namespace pdisc {

double rho_cone(double c, const C2& z) {
    const double x1 = z.z1.real(), y1 = z.z1.imag();
    const double x2 = z.z2.real(), y2 = z.z2.imag();
    return x1 * x1 + x2 * x2 - c * (y1 * y1 + y2 * y2);
}

cplx cone_multiplier(double c, cplx z) { return {z.real(), c * z.imag()}; }

C2 LeviChart::chart_point(cplx u) const {
    const cplx h1 = 0.5 * linCoeffs.z1;
    const cplx h2 = 0.5 * linCoeffs.z2;
    if (linearChart) {
        const double nrm = std::sqrt(std::norm(h1) + std::norm(h2));
        return u * C2(h2 / nrm, -h1 / nrm);
    }
    const cplx denom = quadCoeff * (cplx(1.0, 0.0) + u * u);
    if (std::abs(denom) < 1e-300) throw PreconditionError("LeviChart: chart parameter at singularity u = +-i");
    if (!swapped) {
        const cplx t = -2.0 * (h1 + h2 * u) / denom;
        return {t, t * u};
    }
    const cplx t = -2.0 * (h2 + h1 * u) / denom;
    return {t * u, t};
}

cplx LeviChart::Q(const C2& w) const {
    return linCoeffs.z1 * w.z1 + linCoeffs.z2 * w.z2 + quadCoeff * (w.z1 * w.z1 + w.z2 * w.z2);
}

C2 LeviChart::tangent_dir() const {
    const cplx h1 = 0.5 * linCoeffs.z1;
    const cplx h2 = 0.5 * linCoeffs.z2;
    const double nrm = std::sqrt(std::norm(h1) + std::norm(h2));
    return {h2 / nrm, -h1 / nrm};
}

LeviChart levi_chart(double c, const C2& z) {
    const cplx h1 = cone_multiplier(c, z.z1);
    const cplx h2 = cone_multiplier(c, z.z2);
    if (std::norm(h1) + std::norm(h2) < 1e-28)
        throw PreconditionError("levi_chart: base point is critical for rho (complex gradient vanishes)");
    LeviChart chart;
    chart.c = c;
    chart.base = z;
    chart.rhoAtBase = rho_cone(c, z);
    chart.linCoeffs = C2(2.0 * h1, 2.0 * h2);
    chart.quadCoeff = 0.5 * (1.0 + c);
    chart.leviScalar = 0.5 * (1.0 - c);
    chart.linearChart = chart.quadCoeff == 0.0;
    chart.swapped = std::abs(h2) < std::abs(h1);
    if (chart.linearChart)
        chart.u0 = cplx(0.0, 0.0);
    else
        chart.u0 = chart.swapped ? -h2 / h1 : -h1 / h2;
    return chart;
}

namespace {

// System for the critical points of rho restricted to the quadric:
//   F1 = 2 conj(h2) w1 - 2 conj(h1) w2 + (1+c)(w1 conj(w2) - conj(w1) w2)
//   F2 = 4 h1 w1 + 4 h2 w2 + (1+c)(w1^2 + w2^2)
struct CritSystem {
    cplx h1, h2;
    double opc;  // 1 + c

    void eval(const C2& w, cplx& f1, cplx& f2) const {
        f1 = 2.0 * std::conj(h2) * w.z1 - 2.0 * std::conj(h1) * w.z2 +
             opc * (w.z1 * std::conj(w.z2) - std::conj(w.z1) * w.z2);
        f2 = 4.0 * h1 * w.z1 + 4.0 * h2 * w.z2 + opc * (w.z1 * w.z1 + w.z2 * w.z2);
    }

    // Wirtinger derivatives of (F1, F2).
    void wirtinger(const C2& w, cplx d[2][4]) const {
        // columns: dw1, dw1bar, dw2, dw2bar
        d[0][0] = 2.0 * std::conj(h2) + opc * std::conj(w.z2);
        d[0][1] = -opc * w.z2;
        d[0][2] = -2.0 * std::conj(h1) - opc * std::conj(w.z1);
        d[0][3] = opc * w.z1;
        d[1][0] = 4.0 * h1 + 2.0 * opc * w.z1;
        d[1][1] = cplx(0.0, 0.0);
        d[1][2] = 4.0 * h2 + 2.0 * opc * w.z2;
        d[1][3] = cplx(0.0, 0.0);
    }

    bool newton(C2& w, int iters, double tol) const {
        for (int it = 0; it < iters; ++it) {
            cplx f1, f2;
            eval(w, f1, f2);
            if (std::abs(f1) + std::abs(f2) < 0.01 * tol) return true;
            cplx d[2][4];
            wirtinger(w, d);
            Eigen::Matrix4d J;
            Eigen::Vector4d rhs;
            // real Jacobian columns: d/dRe w1 = dw1 + dw1bar; d/dIm w1 = i(dw1 - dw1bar)
            for (int r = 0; r < 2; ++r) {
                const cplx cRe1 = d[r][0] + d[r][1];
                const cplx cIm1 = cplx(0.0, 1.0) * (d[r][0] - d[r][1]);
                const cplx cRe2 = d[r][2] + d[r][3];
                const cplx cIm2 = cplx(0.0, 1.0) * (d[r][2] - d[r][3]);
                J(2 * r, 0) = cRe1.real();
                J(2 * r, 1) = cIm1.real();
                J(2 * r, 2) = cRe2.real();
                J(2 * r, 3) = cIm2.real();
                J(2 * r + 1, 0) = cRe1.imag();
                J(2 * r + 1, 1) = cIm1.imag();
                J(2 * r + 1, 2) = cRe2.imag();
                J(2 * r + 1, 3) = cIm2.imag();
            }
            rhs << -f1.real(), -f1.imag(), -f2.real(), -f2.imag();
            Eigen::FullPivLU<Eigen::Matrix4d> lu(J);
            if (!lu.isInvertible()) return false;
            Eigen::Vector4d step = lu.solve(rhs);
            if (!step.allFinite()) return false;
            w.z1 += cplx(step(0), step(1));
            w.z2 += cplx(step(2), step(3));
        }
        cplx f1, f2;
        eval(w, f1, f2);
        return std::abs(f1) + std::abs(f2) < tol;
    }
};

}  // namespace

double CriticalSolutionSet::gain_threshold() const {
    if (solutions.empty()) return std::numeric_limits<double>::infinity();
    return 0.5 * (1.0 - c) * minNorm * minNorm;
}

CriticalSolutionSet critical_system_solve(double c, const C2& z, const OracleOptions& opt) {
    if (!(c < 1.0)) throw PreconditionError("critical_system_solve: requires c < 1");
    if (!(rho_cone(c, z) > 0.0)) throw PreconditionError("critical_system_solve: requires rho_c(z) > 0");
    const LeviChart chart = levi_chart(c, z);
    const double zn = z.norm();
    const double ball = opt.searchRadiusFactor * zn;
    const double gate = opt.residualGate * std::max(1.0, zn * zn);

    CritSystem sys{cone_multiplier(c, z.z1), cone_multiplier(c, z.z2), 1.0 + c};

    CriticalSolutionSet out;
    out.c = c;
    out.base = z;

    // Multi-start: chart-parameter grid (critical points lie on the quadric)
    // plus a small transversal perturbation.
    const int G = std::max(4, opt.gridSize);
    std::vector<C2> found;
    std::vector<C2> starts;
    starts.reserve(static_cast<size_t>(G * G * 2));
    for (int a = 0; a < G; ++a) {
        for (int b = 0; b < G; ++b) {
            const double re = -2.0 + 4.0 * (a + 0.5) / G;
            const double im = -2.0 + 4.0 * (b + 0.5) / G;
            cplx u = chart.u0 + cplx(re, im);
            if (!chart.linearChart && std::abs(cplx(1.0, 0.0) + u * u) < 1e-6) continue;
            C2 w = chart.chart_point(u);
            if (!w.finite()) continue;
            const double wn = w.norm();
            if (wn > 3.0 * ball || wn < 1e-12 * std::max(1.0, zn)) continue;
            starts.push_back(w);
            starts.push_back(w + C2(cplx(1e-3 * zn, -1e-3 * zn), cplx(-1e-3 * zn, 1e-3 * zn)));
        }
    }

    std::vector<C2> slots(starts.size(), C2());
    std::vector<char> okFlags(starts.size(), 0);
    parallel_for(static_cast<int>(starts.size()), [&](int i) {
        C2 w = starts[static_cast<size_t>(i)];
        if (sys.newton(w, opt.newtonIters, gate)) {
            slots[static_cast<size_t>(i)] = w;
            okFlags[static_cast<size_t>(i)] = 1;
        }
    });
    for (size_t i = 0; i < starts.size(); ++i) {
        if (!okFlags[i]) continue;  // non-converged starts are dropped
        const C2& w = slots[i];
        const double wn = w.norm();
        if (wn < 1e-7 * std::max(1.0, zn)) continue;  // the trivial solution
        if (wn > ball) continue;
        bool dup = false;
        for (const auto& f : found)
            if (dist(f, w) < 1e-6 * std::max(1.0, zn)) {
                dup = true;
                break;
            }
        if (!dup) found.push_back(w);
    }

    double minNorm = std::numeric_limits<double>::infinity();
    for (const auto& w : found) {
        cplx f1, f2;
        sys.eval(w, f1, f2);
        CriticalSolutionSet::Sol s;
        s.w = w;
        s.res1 = std::abs(f1);
        s.res2 = std::abs(f2);
        out.solutions.push_back(s);
        minNorm = std::min(minNorm, w.norm());
    }
    std::sort(out.solutions.begin(), out.solutions.end(),
              [](const CriticalSolutionSet::Sol& a, const CriticalSolutionSet::Sol& b) { return a.w.norm() < b.w.norm(); });
    out.minNorm = out.solutions.empty() ? 0.0 : minNorm;
    return out;
}

SublevelResult sublevel_component(const LeviChart& chart, double C, int rays, std::optional<double> knownThreshold,
                                  const OracleOptions& opt) {
    if (!(chart.c < 1.0)) throw PreconditionError("sublevel_component: requires c < 1");
    if (!(C > 0.0)) throw PreconditionError("sublevel_component: requires C > 0");
    double threshold;
    if (knownThreshold.has_value()) {
        threshold = *knownThreshold;
    } else {
        threshold = critical_system_solve(chart.c, chart.base, opt).gain_threshold();
    }
    if (C >= threshold)
        throw PreconditionError("sublevel_component: gain target " + std::to_string(C) +
                                " reaches the critical threshold " + std::to_string(threshold));

    const double R = std::sqrt(2.0 * C / (1.0 - chart.c));
    SublevelResult res;
    res.radius = R;
    res.threshold = threshold;
    res.domain.center = chart.u0;
    res.domain.boundary.resize(static_cast<size_t>(rays));

    // |w(u)| grows without bound toward the chart singularities, so every ray
    // from u0 crosses the level |w| = R; the first crossing bounds the
    // star-shaped component.
    auto levelGap = [&](cplx u) { return chart.chart_point(u).norm() - R; };
    const double sMax = 64.0;
    double prevS = 0.1;
    for (int k = 0; k < rays; ++k) {
        const cplx dir = unit_node(k, rays);
        double lo = 0.0, hi = 0.0;
        double s = std::max(1e-6, 0.5 * prevS);
        bool bracketed = false;
        double g0 = levelGap(chart.u0 + s * dir);
        if (g0 >= 0.0) {
            hi = s;
            // shrink toward u0 to find an inside point
            double inner = s;
            while (inner > 1e-14) {
                inner *= 0.5;
                if (levelGap(chart.u0 + inner * dir) < 0.0) {
                    lo = inner;
                    bracketed = true;
                    break;
                }
            }
        } else {
            lo = s;
            while (s < sMax) {
                s *= 1.35;
                if (levelGap(chart.u0 + s * dir) >= 0.0) {
                    hi = s;
                    bracketed = true;
                    break;
                }
                lo = s;
            }
        }
        if (!bracketed) throw ConstructionError("sublevel_component: level crossing not found along a ray");
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (levelGap(chart.u0 + mid * dir) < 0.0)
                lo = mid;
            else
                hi = mid;
        }
        const double sStar = 0.5 * (lo + hi);
        res.domain.boundary[static_cast<size_t>(k)] = chart.u0 + sStar * dir;
        prevS = sStar;
    }
    return res;
}

LiftingRadius lifting_radius(double c, int batch, uint64_t seed, double safety, const OracleOptions& opt) {
    if (!(c < 1.0)) throw PreconditionError("lifting_radius: requires c < 1");
    if (batch < 1) throw PreconditionError("lifting_radius: batch must be positive");

    std::vector<double> ratios(static_cast<size_t>(batch), std::numeric_limits<double>::infinity());
    parallel_for(batch, [&](int i) {
        Rng rng(derive_seed(seed, static_cast<uint64_t>(i)));
        C2 z;
        for (int attempt = 0; attempt < 10000; ++attempt) {
            z = C2(cplx(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)),
                   cplx(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)));
            const double r = rho_cone(c, z);
            if (r >= 0.5 && r <= 10.0) break;
        }
        const auto oracle = critical_system_solve(c, z, opt);
        if (!oracle.empty()) ratios[static_cast<size_t>(i)] = oracle.gain_threshold() / rho_cone(c, z);
    });

    LiftingRadius out;
    out.safety = safety;
    out.batch = batch;
    out.seed = seed;
    double minRatio = std::numeric_limits<double>::infinity();
    for (double r : ratios) minRatio = std::min(minRatio, r);
    if (!std::isfinite(minRatio)) {
        out.capped = true;
        minRatio = opt.ratioCap;
    } else {
        minRatio = std::min(minRatio, opt.ratioCap);
    }
    out.minRatio = minRatio;
    out.a = safety * minRatio;
    return out;
}

}  // namespace pdisc
