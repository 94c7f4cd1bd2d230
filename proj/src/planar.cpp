#include "pdisc/planar.hpp"

#include <algorithm>
#include <cmath>

namespace pdisc {

double point_segment_distance(cplx p, cplx a, cplx b) {
    const cplx ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    double t = ((p.real() - a.real()) * ab.real() + (p.imag() - a.imag()) * ab.imag()) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

double PlanarDomain::diameter() const {
    // diameter of the vertex set via bounding box diagonal lower bound plus a
    // direct scan on a decimated vertex set; exact enough for tolerances.
    double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
    for (const auto& v : boundary) {
        lo_x = std::min(lo_x, v.real());
        hi_x = std::max(hi_x, v.real());
        lo_y = std::min(lo_y, v.imag());
        hi_y = std::max(hi_y, v.imag());
    }
    return std::hypot(hi_x - lo_x, hi_y - lo_y);
}

double PlanarDomain::boundaryLength() const {
    double len = 0.0;
    const int v = vertexCount();
    for (int i = 0; i < v; ++i) len += std::abs(boundary[static_cast<size_t>((i + 1) % v)] - boundary[static_cast<size_t>(i)]);
    return len;
}

double PlanarDomain::boundaryDistance(cplx p) const {
    const int v = vertexCount();
    double best = 1e300;
    for (int i = 0; i < v; ++i)
        best = std::min(best, point_segment_distance(p, boundary[static_cast<size_t>(i)],
                                                     boundary[static_cast<size_t>((i + 1) % v)]));
    return best;
}

int PlanarDomain::winding(cplx p) const {
    const int v = vertexCount();
    double total = 0.0;
    for (int i = 0; i < v; ++i) {
        const cplx a = boundary[static_cast<size_t>(i)] - p;
        const cplx b = boundary[static_cast<size_t>((i + 1) % v)] - p;
        total += std::arg(b / a);
    }
    return static_cast<int>(std::lround(total / kTwoPi));
}

namespace {

bool segments_cross(cplx a, cplx b, cplx c, cplx d) {
    auto orient = [](cplx p, cplx q, cplx r) {
        const double v = (q.real() - p.real()) * (r.imag() - p.imag()) - (q.imag() - p.imag()) * (r.real() - p.real());
        return (v > 0.0) - (v < 0.0);
    };
    const int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    return o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

}  // namespace

void PlanarDomain::validate() const {
    const int v = vertexCount();
    if (v < 3) throw PreconditionError("PlanarDomain: need at least 3 vertices");
    for (const auto& z : boundary)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw PreconditionError("PlanarDomain: vertices must be finite");
    if (winding(center) != 1)
        throw PreconditionError("PlanarDomain: boundary must wind once positively around the center");
    // Simplicity: proper crossings between non-adjacent edges. Bounding-box
    // prune keeps the scan fast for traced curves.
    struct Box {
        double lox, hix, loy, hiy;
    };
    std::vector<Box> boxes(static_cast<size_t>(v));
    for (int i = 0; i < v; ++i) {
        const cplx a = boundary[static_cast<size_t>(i)];
        const cplx b = boundary[static_cast<size_t>((i + 1) % v)];
        boxes[static_cast<size_t>(i)] = {std::min(a.real(), b.real()), std::max(a.real(), b.real()),
                                         std::min(a.imag(), b.imag()), std::max(a.imag(), b.imag())};
    }
    for (int i = 0; i < v; ++i) {
        for (int j = i + 2; j < v; ++j) {
            if (i == 0 && j == v - 1) continue;  // adjacent around the seam
            const Box &bi = boxes[static_cast<size_t>(i)], &bj = boxes[static_cast<size_t>(j)];
            if (bi.hix < bj.lox || bj.hix < bi.lox || bi.hiy < bj.loy || bj.hiy < bi.loy) continue;
            if (segments_cross(boundary[static_cast<size_t>(i)], boundary[static_cast<size_t>((i + 1) % v)],
                               boundary[static_cast<size_t>(j)], boundary[static_cast<size_t>((j + 1) % v)]))
                throw PreconditionError("PlanarDomain: boundary polyline is not simple");
        }
    }
}

PlanarDomain PlanarDomain::disc(cplx c, double r, int vertices) {
    PlanarDomain d;
    d.center = c;
    d.boundary.resize(static_cast<size_t>(vertices));
    for (int k = 0; k < vertices; ++k) d.boundary[static_cast<size_t>(k)] = c + r * unit_node(k, vertices);
    return d;
}

cplx polyline_point(const std::vector<cplx>& poly, double t) {
    const int v = static_cast<int>(poly.size());
    double tt = std::fmod(t, static_cast<double>(v));
    if (tt < 0.0) tt += static_cast<double>(v);
    const int i = std::min(v - 1, static_cast<int>(tt));
    const double frac = tt - static_cast<double>(i);
    const cplx a = poly[static_cast<size_t>(i)];
    const cplx b = poly[static_cast<size_t>((i + 1) % v)];
    return a + frac * (b - a);
}

std::vector<cplx> resample_closed_polyline(const std::vector<cplx>& poly, int n) {
    const int v = static_cast<int>(poly.size());
    std::vector<double> cum(static_cast<size_t>(v) + 1, 0.0);
    for (int i = 0; i < v; ++i)
        cum[static_cast<size_t>(i) + 1] =
            cum[static_cast<size_t>(i)] + std::abs(poly[static_cast<size_t>((i + 1) % v)] - poly[static_cast<size_t>(i)]);
    const double total = cum.back();
    std::vector<cplx> out(static_cast<size_t>(n));
    int seg = 0;
    for (int k = 0; k < n; ++k) {
        const double target = total * static_cast<double>(k) / static_cast<double>(n);
        while (seg + 1 < v && cum[static_cast<size_t>(seg) + 1] < target) ++seg;
        const double seglen = cum[static_cast<size_t>(seg) + 1] - cum[static_cast<size_t>(seg)];
        const double frac = seglen > 0.0 ? (target - cum[static_cast<size_t>(seg)]) / seglen : 0.0;
        const cplx a = poly[static_cast<size_t>(seg)];
        const cplx b = poly[static_cast<size_t>((seg + 1) % v)];
        out[static_cast<size_t>(k)] = a + frac * (b - a);
    }
    return out;
}

}  // namespace pdisc
