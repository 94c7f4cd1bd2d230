#include "pdisc/riemann.hpp"

#include <algorithm>
#include <cmath>

#include "pdisc/fft.hpp"
#include "pdisc/polymap.hpp"

namespace pdisc {

cplx ConformalMap::eval(cplx z) const { return poly_eval(coeffs, z); }

cplx ConformalMap::deriv(cplx z) const {
    if (coeffs.size() <= 1) return {0.0, 0.0};
    cplx acc = static_cast<double>(coeffs.size() - 1) * coeffs.back();
    for (size_t k = coeffs.size() - 1; k-- > 1;) acc = acc * z + static_cast<double>(k) * coeffs[k];
    return acc;
}

namespace {

// Discrete inner product <p,q> = Int_Omega p' conj(q') dA reduced to the
// boundary: (1/2i) Int p'(z) conj(q(z)) dz, midpoint rule on the resampled
// polyline. Hermitian-symmetrized to absorb quadrature asymmetry.
struct BoundaryQuad {
    std::vector<cplx> mid;  // midpoints
    std::vector<cplx> dz;   // segment vectors
};

cplx raw_form(const BoundaryQuad& q, const std::vector<cplx>& pDer, const std::vector<cplx>& qVal) {
    cplx acc(0.0, 0.0);
    for (size_t i = 0; i < q.mid.size(); ++i) acc += pDer[i] * std::conj(qVal[i]) * q.dz[i];
    return acc / cplx(0.0, 2.0);
}

struct BasisVec {
    std::vector<cplx> val;
    std::vector<cplx> der;
    cplx der0;  // derivative at the center
};

cplx inner(const BoundaryQuad& q, const BasisVec& a, const BasisVec& b) {
    const cplx f = raw_form(q, a.der, b.val);
    const cplx g = raw_form(q, b.der, a.val);
    return 0.5 * (f + std::conj(g));
}

// Nearest position (fractional polyline index) of p on poly, searching the
// whole polyline or a window around a previous position.
double nearest_position(const std::vector<cplx>& poly, cplx p, double hint, int window) {
    const int v = static_cast<int>(poly.size());
    double bestDist = 1e300;
    double bestPos = 0.0;
    auto probe = [&](int i) {
        const cplx a = poly[static_cast<size_t>(i)];
        const cplx b = poly[static_cast<size_t>((i + 1) % v)];
        const cplx ab = b - a;
        const double len2 = std::norm(ab);
        double t = len2 > 0.0 ? std::clamp(((p.real() - a.real()) * ab.real() + (p.imag() - a.imag()) * ab.imag()) / len2, 0.0, 1.0)
                              : 0.0;
        const double d = std::abs(p - (a + t * ab));
        if (d < bestDist) {
            bestDist = d;
            bestPos = static_cast<double>(i) + t;
        }
    };
    if (window >= v || hint < 0.0) {
        for (int i = 0; i < v; ++i) probe(i);
    } else {
        const int c = static_cast<int>(hint);
        for (int o = -window; o <= window; ++o) probe(((c + o) % v + v) % v);
    }
    return bestPos;
}

}  // namespace

ConformalMap riemann_map(const PlanarDomain& domain, double relTol, const RiemannOptions& opt) {
    if (opt.validateDomain) domain.validate();
    const double diam = domain.diameter();
    const double tolAbs = relTol * diam;
    const cplx z0 = domain.center;
    const double scale = 0.5 * diam;

    // boundary quadrature nodes
    const std::vector<cplx> pts = resample_closed_polyline(domain.boundary, opt.quadPoints);
    BoundaryQuad quad;
    quad.mid.resize(pts.size());
    quad.dz.resize(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        const cplx a = pts[i];
        const cplx b = pts[(i + 1) % pts.size()];
        quad.mid[i] = 0.5 * (a + b);
        quad.dz[i] = b - a;
    }
    const size_t Q = quad.mid.size();

    ConformalMap result;
    result.center = z0;
    result.tolAbs = tolAbs;
    result.cert.params["rel_tol"] = relTol;
    result.cert.params["diameter"] = diam;

    // Arnoldi basis for span{(z-z0)/d, ..., ((z-z0)/d)^n} under the area
    // inner product of derivatives; every basis element vanishes at z0.
    const int n = std::max(4, opt.basisSize);
    std::vector<BasisVec> basis;
    basis.reserve(static_cast<size_t>(n));
    {
        BasisVec w;
        w.val.resize(Q);
        w.der.assign(Q, cplx(1.0 / scale, 0.0));
        for (size_t i = 0; i < Q; ++i) w.val[i] = (quad.mid[i] - z0) / scale;
        w.der0 = cplx(1.0 / scale, 0.0);
        const double nrm = std::sqrt(std::max(1e-300, inner(quad, w, w).real()));
        for (auto& v : w.val) v /= nrm;
        for (auto& v : w.der) v /= nrm;
        w.der0 /= nrm;
        basis.push_back(std::move(w));
    }
    for (int k = 1; k < n; ++k) {
        const BasisVec& prev = basis.back();
        BasisVec t;
        t.val.resize(Q);
        t.der.resize(Q);
        for (size_t i = 0; i < Q; ++i) {
            const cplx om = (quad.mid[i] - z0) / scale;
            t.val[i] = om * prev.val[i];
            t.der[i] = prev.val[i] / scale + om * prev.der[i];
        }
        t.der0 = cplx(0.0, 0.0);  // omega(z0) = 0 and prev(z0) = 0
        for (const auto& b : basis) {
            const cplx h = inner(quad, t, b);
            for (size_t i = 0; i < Q; ++i) {
                t.val[i] -= h * b.val[i];
                t.der[i] -= h * b.der[i];
            }
            t.der0 -= h * b.der0;
        }
        const double nrm2 = inner(quad, t, t).real();
        if (!(nrm2 > 1e-28)) break;  // basis saturated
        const double nrm = std::sqrt(nrm2);
        for (size_t i = 0; i < Q; ++i) {
            t.val[i] /= nrm;
            t.der[i] /= nrm;
        }
        t.der0 /= nrm;
        basis.push_back(std::move(t));
    }

    // Minimal derivative-energy map with F'(z0) = 1: in the orthonormal
    // basis the minimizer is proportional to the conjugated constraint.
    double der0Norm2 = 0.0;
    for (const auto& b : basis) der0Norm2 += std::norm(b.der0);
    if (!(der0Norm2 > 0.0)) {
        result.cert.notes.push_back("degenerate least-squares system");
        return result;
    }
    std::vector<cplx> boundaryF(Q, cplx(0.0, 0.0));
    for (const auto& b : basis) {
        const cplx c = std::conj(b.der0) / der0Norm2;
        for (size_t i = 0; i < Q; ++i) boundaryF[i] += c * b.val[i];
    }

    // Boundary correspondence from the argument of F along the boundary.
    std::vector<double> psi(Q);
    psi[0] = std::arg(boundaryF[0]);
    for (size_t i = 1; i < Q; ++i) psi[i] = psi[i - 1] + std::arg(boundaryF[i] / boundaryF[i - 1]);
    const double turn = psi[Q - 1] - psi[0] + std::arg(boundaryF[0] / boundaryF[Q - 1]);
    result.cert.params["correspondence_turn"] = turn;
    if (std::abs(turn - kTwoPi) > 0.5) {
        result.cert.notes.push_back("boundary correspondence does not wind once");
        result.cert.add("boundary_distance", "<=", 1e300, tolAbs);
        return result;
    }
    // monotone repair
    for (size_t i = 1; i < Q; ++i) psi[i] = std::max(psi[i], psi[i - 1] + 1e-12);

    const int nFFT = opt.fftSize;
    std::vector<cplx> bpts(static_cast<size_t>(nFFT));
    {
        // invert theta = psi(t) on the midpoint polyline
        size_t seg = 0;
        for (int m = 0; m < nFFT; ++m) {
            const double theta = psi[0] + kTwoPi * static_cast<double>(m) / static_cast<double>(nFFT);
            while (seg + 1 < Q && psi[seg + 1] < theta) ++seg;
            double frac;
            if (seg + 1 < Q) {
                const double width = psi[seg + 1] - psi[seg];
                frac = width > 0.0 ? (theta - psi[seg]) / width : 0.0;
            } else {
                const double width = (psi[0] + kTwoPi) - psi[Q - 1];
                frac = width > 0.0 ? (theta - psi[Q - 1]) / width : 0.0;
            }
            const cplx a = quad.mid[seg % Q];
            const cplx b = quad.mid[(seg + 1) % Q];
            bpts[static_cast<size_t>(m)] = a + frac * (b - a);
        }
    }

    // coefficients from boundary values; polish by projecting the candidate's
    // boundary trace back onto the polyline.
    std::vector<double> positions(static_cast<size_t>(nFFT), -1.0);
    std::vector<cplx> bestCoeffs;
    double bestProbe = 1e300;
    const int probeNodes = 128;

    auto fit_coeffs = [&](const std::vector<cplx>& bvals) {
        auto dft = dft_coefficients(bvals);
        int nphi = std::min(opt.maxPhiDegree, nFFT / 2 - 1);
        std::vector<cplx> co(static_cast<size_t>(nphi) + 1);
        for (int k = 0; k <= nphi; ++k) co[static_cast<size_t>(k)] = dft[static_cast<size_t>(k)];
        // drop negligible tail
        double tail = 0.0;
        int keep = nphi;
        while (keep > 8) {
            tail += std::abs(co[static_cast<size_t>(keep)]);
            if (tail > 0.02 * tolAbs) break;
            --keep;
        }
        co.resize(static_cast<size_t>(keep) + 1);
        co[0] = z0;  // exact recentering
        return co;
    };

    auto probe_distance = [&](const std::vector<cplx>& co) {
        double worst = 0.0;
        for (int k = 0; k < probeNodes; ++k) {
            const cplx p = poly_eval(co, unit_node(k, probeNodes));
            worst = std::max(worst, domain.boundaryDistance(p));
        }
        return worst;
    };

    std::vector<cplx> co = fit_coeffs(bpts);
    {
        const double d0 = probe_distance(co);
        bestProbe = d0;
        bestCoeffs = co;
    }
    for (int sweep = 0; sweep < opt.polishSweeps && bestProbe > 0.25 * tolAbs; ++sweep) {
        // evaluate the candidate on the correspondence grid
        std::vector<cplx> padded(static_cast<size_t>(nFFT), cplx(0.0, 0.0));
        for (size_t k = 0; k < co.size(); ++k) padded[k] = co[k];
        fft_inplace(padded, +1);
        // project onto the boundary polyline
        const int window = std::max(4, domain.vertexCount() / 32);
        for (int m = 0; m < nFFT; ++m) {
            const cplx p = padded[static_cast<size_t>(m)];
            positions[static_cast<size_t>(m)] =
                nearest_position(domain.boundary, p, positions[static_cast<size_t>(m)], sweep == 0 ? domain.vertexCount() : window);
            bpts[static_cast<size_t>(m)] = polyline_point(domain.boundary, positions[static_cast<size_t>(m)]);
        }
        co = fit_coeffs(bpts);
        const double d = probe_distance(co);
        if (d < bestProbe) {
            bestProbe = d;
            bestCoeffs = co;
        }
    }
    co = bestCoeffs;

    // rotation normalization phi'(0) > 0
    if (co.size() > 1 && std::abs(co[1]) > 0.0) {
        const double alpha = -std::arg(co[1]);
        cplx rot(1.0, 0.0);
        const cplx step(std::cos(alpha), std::sin(alpha));
        for (size_t k = 1; k < co.size(); ++k) {
            rot *= step;
            co[k] *= rot;
        }
    }

    result.coeffs = co;

    // certification on the verification circle
    const int V = opt.verifyNodes;
    double worstDist = 0.0;
    double minDeriv = 1e300;
    double turnSum = 0.0;
    cplx prevRel = poly_eval(co, unit_node(0, V)) - z0;
    for (int k = 0; k < V; ++k) {
        const cplx node = unit_node(k, V);
        const cplx p = poly_eval(co, node);
        worstDist = std::max(worstDist, domain.boundaryDistance(p));
        const cplx rel = p - z0;
        if (k > 0) {
            turnSum += std::arg(rel / prevRel);
            prevRel = rel;
        }
        // derivative via coefficient Horner
        cplx dacc(0.0, 0.0);
        if (co.size() > 1) {
            dacc = static_cast<double>(co.size() - 1) * co.back();
            for (size_t j = co.size() - 1; j-- > 1;) dacc = dacc * node + static_cast<double>(j) * co[j];
        }
        minDeriv = std::min(minDeriv, std::abs(dacc));
    }
    turnSum += std::arg((poly_eval(co, unit_node(0, V)) - z0) / prevRel);
    const int winding = static_cast<int>(std::lround(turnSum / kTwoPi));

    result.boundarySup = worstDist;
    result.cert.params["phi_degree"] = static_cast<double>(result.degree());
    result.cert.add("boundary_distance", "<=", worstDist, tolAbs);
    result.cert.add("center_error", "<=", std::abs(poly_eval(co, cplx(0.0, 0.0)) - z0), tolAbs);
    result.cert.add("winding_error", "<=", std::abs(static_cast<double>(winding) - 1.0), 0.0 + 1e-9);
    result.cert.add("min_deriv_on_grid", ">", minDeriv, 0.0);
    result.ok = result.cert.pass();
    return result;
}

}  // namespace pdisc
