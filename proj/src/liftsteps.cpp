#include "pdisc/liftsteps.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pdisc/fft.hpp"
#include "pdisc/fourier.hpp"
#include "pdisc/par.hpp"
#include "pdisc/riemann.hpp"

namespace pdisc {

C2 DiscFamily::eval_coeffs(const C2* c, int order, cplx w) {
    C2 acc = c[order - 1];
    for (int j = order - 2; j >= 0; --j) acc = w * acc + c[j];
    return w * acc;
}

C2 DiscFamily::eval_node(int i, cplx w) const { return eval_coeffs(node_coeffs(i), wOrder, w); }

namespace {

struct SparseBand {
    std::vector<long long> freq;
    std::vector<cplx> amp;
    double dropped = 0.0;
    long long lowBand = 0;  // max(0, -min freq)
};

// Keeps the largest spectral lines until the dropped l1 mass fits the budget.
SparseBand select_band(const std::vector<cplx>& dft, double budget) {
    const size_t n = dft.size();
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        const double ma = std::abs(dft[a]), mb = std::abs(dft[b]);
        if (ma != mb) return ma > mb;
        return a < b;
    });
    double total = 0.0;
    for (const auto& c : dft) total += std::abs(c);
    SparseBand out;
    double kept = 0.0;
    for (size_t r = 0; r < n; ++r) {
        if (total - kept <= budget) break;
        const size_t j = idx[r];
        kept += std::abs(dft[j]);
        out.freq.push_back(dft_frequency(j, n));
        out.amp.push_back(dft[j]);
    }
    out.dropped = std::max(0.0, total - kept);
    for (long long f : out.freq) out.lowBand = std::max(out.lowBand, -f);
    return out;
}

std::vector<double> inner_radii(double r, int count) {
    std::vector<double> out;
    out.push_back(0.0);
    for (int i = 1; i <= count; ++i) out.push_back(r * static_cast<double>(i) / static_cast<double>(count));
    return out;
}

cplx pow_ll(cplx z, long long e) {
    cplx acc(1.0, 0.0);
    cplx base = z;
    while (e > 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

// Values of a map on the circle grid of size n at radius t; FFT-folded for
// long coefficient vectors.
std::vector<C2> grid_values(const PolyMap& p, double t, int n) {
    if (p.degree() > 2048) return p.values_on_circle(t, n);
    std::vector<C2> out(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) out[static_cast<size_t>(k)] = p.eval(t * unit_node(k, n));
    return out;
}

}  // namespace

ApproxResult approx_disc_family(const DiscFamily& family, double eps, double r, const LiftOptions& opt) {
    if (!(eps > 0.0)) throw PreconditionError("approx_disc_family: eps must be positive");
    if (!(r > 0.0 && r < 1.0)) throw PreconditionError("approx_disc_family: r must lie in (0,1)");
    const int n = family.nodeCount();
    if (!is_power_of_two(n)) throw PreconditionError("approx_disc_family: node count must be a power of two");
    const int N = family.wOrder;

    ApproxResult out;
    out.cert.params["family_nodes"] = static_cast<double>(n);
    out.cert.params["w_order"] = static_cast<double>(N);
    out.cert.params["eps"] = eps;
    out.cert.params["r"] = r;

    // spectral analysis of each w-coefficient function along the node circle
    const double trigBudget = opt.trigTolFactor * eps;
    std::vector<SparseBand> bands(static_cast<size_t>(2 * N));
    double droppedTotal = 0.0;
    {
        std::vector<cplx> buf(static_cast<size_t>(n));
        for (int j = 0; j < N; ++j) {
            for (int comp = 0; comp < 2; ++comp) {
                for (int i = 0; i < n; ++i) {
                    const C2& c = family.coeffs[static_cast<size_t>(i) * static_cast<size_t>(N) + static_cast<size_t>(j)];
                    buf[static_cast<size_t>(i)] = comp == 0 ? c.z1 : c.z2;
                }
                auto dft = dft_coefficients(buf);
                bands[static_cast<size_t>(2 * j + comp)] = select_band(dft, trigBudget / (2.0 * N));
                droppedTotal += bands[static_cast<size_t>(2 * j + comp)].dropped;
            }
        }
    }
    out.cert.params["trig_dropped_mass"] = droppedTotal;

    long long Kmin = 4;
    long long maxLow = 0;
    for (int j = 0; j < N; ++j) {
        for (int comp = 0; comp < 2; ++comp) {
            const auto& b = bands[static_cast<size_t>(2 * j + comp)];
            maxLow = std::max(maxLow, b.lowBand);
            if (!b.freq.empty()) Kmin = std::max(Kmin, (b.lowBand + j) / (j + 1) + 1);
        }
    }
    out.maxLowBand = static_cast<int>(std::min<long long>(maxLow, 1LL << 30));

    long long K = 1;
    while (K < Kmin) K <<= 1;

    const auto innerGrid = inner_radii(r, opt.verifyRadii);
    const auto annulus = radius_ladder(r, 1.0, opt.verifyRadii);

    PolyMap best;
    bool built = false;
    double bestBoundaryErr = 0.0, bestDiscErr = 0.0, bestInnerSup = 0.0;
    for (;; K <<= 1) {
        long long maxExp = 0;
        for (int j = 0; j < N; ++j)
            for (int comp = 0; comp < 2; ++comp)
                for (long long f : bands[static_cast<size_t>(2 * j + comp)].freq)
                    maxExp = std::max(maxExp, (j + 1) * K + f);
        if (maxExp > opt.maxDegree) {
            out.cert.notes.push_back("winding-exponent budget exhausted at K=" + std::to_string(K));
            out.cert.add("approx_degree_budget", "<=", static_cast<double>(maxExp), static_cast<double>(opt.maxDegree));
            break;
        }
        std::vector<C2> hc(static_cast<size_t>(maxExp) + 1);
        for (int j = 0; j < N; ++j) {
            for (int comp = 0; comp < 2; ++comp) {
                const auto& b = bands[static_cast<size_t>(2 * j + comp)];
                for (size_t t = 0; t < b.freq.size(); ++t) {
                    const long long e = (j + 1) * K + b.freq[t];
                    if (e < 0) throw ConstructionError("approx_disc_family: negative exponent after escalation");
                    if (comp == 0)
                        hc[static_cast<size_t>(e)].z1 += b.amp[t];
                    else
                        hc[static_cast<size_t>(e)].z2 += b.amp[t];
                }
            }
        }
        PolyMap h(std::move(hc));

        // (iii) smallness on the inner disc
        double innerSup = 0.0;
        for (double t : innerGrid) {
            if (t == 0.0)
                innerSup = std::max(innerSup, h.eval(cplx(0.0, 0.0)).norm());
            else
                innerSup = std::max(innerSup, h.sup_on_circle(t, std::max(4096, pow2_ceil(2 * opt.verifyTheta))));
        }

        // (i)/(ii) proximity through the composition points w = (t zeta)^K
        double boundaryErr = 0.0, discErr = 0.0;
        {
            std::vector<double> be(static_cast<size_t>(n), 0.0), de(static_cast<size_t>(n), 0.0);
            parallel_for(n, [&](int i) {
                const cplx zeta = family.nodes[static_cast<size_t>(i)];
                be[static_cast<size_t>(i)] = (h.eval(zeta) - family.eval_node(i, pow_ll(zeta, K))).norm();
                double worst = 0.0;
                for (double t : annulus) {
                    if (t >= 1.0) continue;
                    const cplx tz = t * zeta;
                    worst = std::max(worst, (h.eval(tz) - family.eval_node(i, pow_ll(tz, K))).norm());
                }
                de[static_cast<size_t>(i)] = worst;
            });
            for (int i = 0; i < n; ++i) {
                boundaryErr = std::max(boundaryErr, be[static_cast<size_t>(i)]);
                discErr = std::max(discErr, de[static_cast<size_t>(i)]);
            }
        }

        built = true;
        best = std::move(h);
        bestBoundaryErr = boundaryErr;
        bestDiscErr = discErr;
        bestInnerSup = innerSup;
        out.K = static_cast<int>(std::min<long long>(K, 1LL << 30));
        if (boundaryErr < eps && discErr < eps && innerSup < eps) break;
    }

    out.cert.params["K"] = static_cast<double>(out.K);
    if (built) {
        out.h = best;
        out.degree = best.degree();
        out.cert.params["h_degree"] = static_cast<double>(best.degree());
        out.cert.add("boundary_proximity", "<", bestBoundaryErr, eps);
        out.cert.add("disc_proximity", "<", bestDiscErr, eps);
        out.cert.add("inner_smallness", "<", bestInnerSup, eps);

        if (family.resample && opt.doubledNodeChecks > 0) {
            const long long K2 = out.K;
            const int checks = std::min(opt.doubledNodeChecks, family.nodeCount());
            std::vector<double> errs(static_cast<size_t>(checks), 0.0);
            parallel_for(checks, [&](int t) {
                const int i = static_cast<int>((static_cast<long long>(t) * family.nodeCount()) / checks);
                const cplx zeta = unit_node(2 * i + 1, 2 * family.nodeCount());
                auto cs = family.resample(zeta);
                errs[static_cast<size_t>(t)] =
                    (best.eval(zeta) -
                     DiscFamily::eval_coeffs(cs.data(), static_cast<int>(cs.size()), pow_ll(zeta, K2)))
                        .norm();
            });
            double worst = 0.0;
            for (double e : errs) worst = std::max(worst, e);
            out.cert.add("boundary_proximity_fresh_nodes", "<", worst, eps);
        }
    }
    return out;
}

Certificate verify_push(const PolyMap& g0, const PolyMap& g, const RhoFn& rho, const LevelFn& level,
                        const FloorFn& floor, bool floorAnnulusOnly, double eps, double r, int nTheta, int nRadii) {
    Certificate cert;
    cert.params["verify_theta"] = static_cast<double>(nTheta);
    cert.params["verify_radii"] = static_cast<double>(nRadii);
    const int nn = pow2_ceil(nTheta);

    // (i) boundary band
    double bandErr = 0.0;
    {
        auto gv = grid_values(g, 1.0, nn);
        auto bv = grid_values(g0, 1.0, nn);
        for (int k = 0; k < nn; ++k) {
            const cplx zeta = unit_node(k, nn);
            bandErr = std::max(bandErr,
                               std::abs(rho(gv[static_cast<size_t>(k)]) - level(zeta, bv[static_cast<size_t>(k)])));
        }
    }
    cert.add("level_band", "<", bandErr, eps);

    // (ii) floor over the annulus, or the whole closed disc
    double floorMargin = 1e300;
    {
        const auto radii = floorAnnulusOnly ? radius_ladder(r, 1.0, nRadii) : radius_ladder(0.0, 1.0, nRadii + 1);
        for (double t : radii) {
            if (t == 0.0) {
                const cplx pt(0.0, 0.0);
                floorMargin = std::min(floorMargin, rho(g.eval(pt)) - floor(pt, g0.eval(pt)));
                continue;
            }
            auto gv = grid_values(g, t, nn);
            auto bv = grid_values(g0, t, nn);
            for (int k = 0; k < nn; ++k) {
                const cplx pt = t * unit_node(k, nn);
                floorMargin = std::min(floorMargin,
                                       rho(gv[static_cast<size_t>(k)]) - floor(pt, bv[static_cast<size_t>(k)]));
            }
        }
    }
    cert.add("floor_margin", ">", floorMargin, 0.0);

    // (iii) closeness on the inner disc
    double closeness = 0.0;
    {
        const auto radii = radius_ladder(0.0, r, nRadii);
        for (double t : radii) {
            if (t == 0.0) {
                closeness = std::max(closeness, (g.eval(cplx(0.0, 0.0)) - g0.eval(cplx(0.0, 0.0))).norm());
                continue;
            }
            auto gv = grid_values(g, t, nn);
            auto bv = grid_values(g0, t, nn);
            for (int k = 0; k < nn; ++k)
                closeness = std::max(closeness, (gv[static_cast<size_t>(k)] - bv[static_cast<size_t>(k)]).norm());
        }
    }
    cert.add("inner_closeness", "<", closeness, eps);
    return cert;
}

PushResult push_boundary_level(const PolyMap& g0, const DiscFamily& family, const RhoFn& rho, const LevelFn& level,
                               const FloorFn& floor, bool floorAnnulusOnly, double eps, double r, double hypBand,
                               const LiftOptions& opt) {
    if (!(eps > 0.0)) throw PreconditionError("push_boundary: eps must be positive");
    if (!(r > 0.0 && r < 1.0)) throw PreconditionError("push_boundary: r must lie in (0,1)");

    const int n = family.nodeCount();
    const int wGrid = std::max(32, 4 * family.wOrder);

    // hypotheses on the input grids, before any construction
    for (int i = 0; i < n; ++i) {
        const cplx zeta = family.nodes[static_cast<size_t>(i)];
        const C2 base = g0.eval(zeta);
        const double lv = level(zeta, base);
        double worst = 0.0;
        for (int k = 0; k < wGrid; ++k)
            worst = std::max(worst, std::abs(rho(base + family.eval_node(i, unit_node(k, wGrid))) - lv));
        if (worst > hypBand * (1.0 + 1e-9) + 1e-14) throw HypothesisError("(a)", i, worst);
        double lowest = 1e300;
        for (int m = 1; m <= 4; ++m) {
            const double t = 0.25 * m;
            for (int k = 0; k < wGrid; ++k)
                lowest = std::min(lowest, rho(base + family.eval_node(i, t * unit_node(k, wGrid))) - floor(zeta, base));
        }
        if (lowest <= -0.5 * eps) throw HypothesisError("(b)", i, lowest);
    }
    {
        const auto radii = radius_ladder(r, 1.0, opt.verifyRadii);
        const int nn = pow2_ceil(opt.verifyTheta);
        for (double t : radii) {
            auto bv = grid_values(g0, t, nn);
            for (int k = 0; k < nn; ++k) {
                const cplx pt = t * unit_node(k, nn);
                const double margin = rho(bv[static_cast<size_t>(k)]) - floor(pt, bv[static_cast<size_t>(k)]);
                if (margin <= -1e-12) throw HypothesisError("(c)", k, margin);
            }
        }
    }

    PushResult out;
    auto approx = approx_disc_family(family, std::max(1e-14, 0.5 * (eps - hypBand)), r, opt);
    out.h = approx.h;
    out.g = g0.plus(approx.h);
    out.cert.absorb(approx.cert, "approx.");
    Certificate concl =
        verify_push(g0, out.g, rho, level, floor, floorAnnulusOnly, eps, r, opt.verifyTheta, opt.verifyRadii);
    out.cert.absorb(concl, "");
    out.cert.params["hyp_band"] = hypBand;
    return out;
}

PushResult push_boundary(const PolyMap& g0, const DiscFamily& family, const RhoFn& rho, double C0, double C1,
                         double eps, double r, double hypBand, const LiftOptions& opt) {
    return push_boundary_level(
        g0, family, rho, [C1](cplx, const C2&) { return C1; }, [C0](cplx, const C2&) { return C0; }, true, eps, r,
        hypBand, opt);
}

namespace {

struct LeviNode {
    std::vector<C2> wCoeffs;
    double band = 0.0;
};

LeviNode build_levi_node(const PolyMap& g0, double c, double Cval, int wOrder, const LiftOptions& opt, cplx zeta) {
    const C2 z = g0.eval(zeta);
    const LeviChart chart = levi_chart(c, z);
    OracleOptions oopt;
    oopt.gridSize = opt.oracleGrid;
    const auto oracle = critical_system_solve(c, z, oopt);
    const double threshold = oracle.gain_threshold();
    if (!(Cval > 0.0))
        throw PreconditionError("lift_step_levi: gain target must be positive (value " + std::to_string(Cval) + ")");
    if (Cval >= 0.9 * threshold)
        throw PreconditionError("lift_step_levi: gain target " + std::to_string(Cval) +
                                " too close to the critical threshold " + std::to_string(threshold));
    const double Ceff = opt.levelShrink * Cval;
    auto sub = sublevel_component(chart, Ceff, 256, threshold, oopt);

    RiemannOptions ro;
    ro.quadPoints = opt.riemannQuad;
    ro.basisSize = opt.riemannBasis;
    ro.fftSize = opt.riemannFFT;
    ro.maxPhiDegree = opt.riemannMaxPhi;
    ro.polishSweeps = opt.riemannPolish;
    ro.verifyNodes = 256;
    ro.validateDomain = false;
    auto phi = riemann_map(sub.domain, opt.riemannRelTol, ro);
    if (!phi.ok) throw ConstructionError("lift_step_levi: conformal certification failed on a sublevel disc");

    // rotate the disc parameter so the centre tangent aligns with the quadric
    // tangent; this keeps the family continuous across chart swaps
    const C2 tdir = chart.tangent_dir();
    auto lambda = [&](cplx w) { return chart.chart_point(phi.eval(w)); };
    const double fd = 1e-5;
    const cplx mu = hdot((1.0 / fd) * lambda(cplx(fd, 0.0)), tdir);
    const cplx rot = std::abs(mu) > 0.0 ? std::conj(mu) / std::abs(mu) : cplx(1.0, 0.0);

    std::vector<cplx> single{zeta};
    auto fam = taylor_truncate(
        single, [&](cplx, cplx w) { return lambda(rot * w); }, wOrder, opt.taylorRescale,
        pow2_ceil(std::max(64, 4 * wOrder)), 1e-6 * std::max(1.0, std::sqrt(std::abs(chart.rhoAtBase))));

    LeviNode node;
    node.wCoeffs = fam.coeffs[0];
    const double target = chart.rhoAtBase + Ceff;
    double band = 0.0;
    const int wGrid = std::max(64, 4 * wOrder);
    for (int k = 0; k < wGrid; ++k) {
        const C2 lam = DiscFamily::eval_coeffs(node.wCoeffs.data(), wOrder, unit_node(k, wGrid));
        band = std::max(band, std::abs(rho_cone(c, z + lam) - target));
    }
    node.band = band;
    return node;
}

}  // namespace

LeviStep lift_step_levi(const PolyMap& g0, double c, const GainFn& C, double eps, double r, const LiftOptions& opt) {
    if (!(c < 1.0)) throw PreconditionError("lift_step_levi: requires c < 1");
    if (!(eps > 0.0) || !(r > 0.0 && r < 1.0)) throw PreconditionError("lift_step_levi: bad eps or r");

    int n = pow2_ceil(std::max(opt.familyNodes, static_cast<int>(opt.nodeFactor * (g0.degree() + 1))));
    n = std::min(n, std::max(8, opt.maxFamilyNodes));

    auto gainAt = [&](cplx zeta) {
        const C2 base = g0.eval(zeta);
        return C(zeta, base);
    };

    // pilot node fixes the w-order for the whole stage
    int wOrder = opt.wOrder;
    {
        const cplx zeta0 = unit_node(0, n);
        while (true) {
            LeviNode pilot = build_levi_node(g0, c, gainAt(zeta0), wOrder, opt, zeta0);
            if (pilot.band <= 0.3 * eps || wOrder >= opt.maxWOrder) break;
            wOrder = std::min(2 * wOrder, opt.maxWOrder);
        }
    }

    DiscFamily family;
    family.nodes = unit_nodes(n);
    family.wOrder = wOrder;
    family.coeffs.resize(static_cast<size_t>(n) * static_cast<size_t>(wOrder));
    std::vector<double> bandSlots(static_cast<size_t>(n), 0.0);
    {
        // evaluate g0 along the node circle once; nodes are rebuilt from the
        // values through the same constructor the resampler uses
        parallel_for(n, [&](int i) {
            const cplx zeta = family.nodes[static_cast<size_t>(i)];
            LeviNode node = build_levi_node(g0, c, gainAt(zeta), wOrder, opt, zeta);
            std::copy(node.wCoeffs.begin(), node.wCoeffs.end(),
                      family.coeffs.begin() + static_cast<long long>(i) * wOrder);
            bandSlots[static_cast<size_t>(i)] = node.band;
        });
    }
    double hypBand = 0.0;
    for (double b : bandSlots) hypBand = std::max(hypBand, b);
    {
        const PolyMap g0copy = g0;
        const LiftOptions optCopy = opt;
        const GainFn Ccopy = C;
        family.resample = [g0copy, c, Ccopy, wOrder, optCopy](cplx zeta) {
            const C2 base = g0copy.eval(zeta);
            return build_levi_node(g0copy, c, Ccopy(zeta, base), wOrder, optCopy, zeta).wCoeffs;
        };
    }

    const double shrink = opt.levelShrink;
    const GainFn Cfun = C;
    LevelFn level = [c, shrink, Cfun](cplx zeta, const C2& base) {
        return rho_cone(c, base) + shrink * Cfun(zeta, base);
    };
    FloorFn floor = [c, eps](cplx, const C2& base) { return rho_cone(c, base) - eps; };
    RhoFn rho = [c](const C2& v) { return rho_cone(c, v); };

    PushResult push = push_boundary_level(g0, family, rho, level, floor, false, eps, r, hypBand + 1e-12, opt);

    LeviStep out;
    out.g = push.g;
    out.cert = push.cert;
    out.hypBand = hypBand;
    out.cert.params["levi_hyp_band"] = hypBand;
    out.cert.params["levi_w_order"] = static_cast<double>(wOrder);
    out.cert.params["levi_nodes"] = static_cast<double>(n);
    return out;
}

ConeStep lift_step_cone(const PolyMap& h, double c, double eps, double r, const LiftOptions& opt,
                        const LiftingRadius* aOverride) {
    if (!(c < 1.0)) throw PreconditionError("lift_step_cone: requires c < 1");
    const int fineTheta = pow2_ceil(2 * opt.verifyTheta);
    double mH = 1e300;
    {
        auto hv = grid_values(h, 1.0, fineTheta);
        for (const auto& v : hv) mH = std::min(mH, rho_cone(c, v));
    }
    if (!(mH > 0.0))
        throw PreconditionError("lift_step_cone: boundary minimum of rho_c must be positive (m = " +
                                std::to_string(mH) + ")");

    LiftingRadius lr;
    if (aOverride)
        lr = *aOverride;
    else
        lr = lifting_radius(c, 192, opt.seed);
    const double a = lr.a;

    GainFn Cfun;
    if (opt.equalizeLevels) {
        // smooth max(L - rho, floorC): pulls the whole boundary toward one
        // level, which keeps the node data spectrally narrow in later stages
        const double L = (1.0 + a) * mH;
        const double floorC = std::max(1e-3 * a * mH, 0.1 * eps);
        const double tau = 0.5 * a * mH;
        Cfun = [c, L, floorC, tau](cplx, const C2& base) {
            const double x = L - rho_cone(c, base) - floorC;
            return floorC + 0.5 * (x + std::sqrt(x * x + tau * tau));
        };
    } else {
        Cfun = [c, a](cplx, const C2& base) { return a * rho_cone(c, base); };
    }

    LeviStep step = lift_step_levi(h, c, Cfun, eps, r, opt);

    ConeStep out;
    out.g = step.g;
    out.cert = step.cert;
    out.mBefore = mH;
    out.aUsed = a;

    double mG = 1e300;
    {
        auto gv = grid_values(out.g, 1.0, fineTheta);
        for (const auto& v : gv) mG = std::min(mG, rho_cone(c, v));
    }
    out.mAfter = mG;
    out.cert.params["a"] = a;
    out.cert.params["m_before"] = mH;
    out.cert.params["m_after"] = mG;
    out.cert.add("cone_growth", ">=", mG, (1.0 + a) * mH - eps);
    return out;
}

}  // namespace pdisc
