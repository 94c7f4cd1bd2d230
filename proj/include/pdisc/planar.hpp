#pragma once

#include <vector>

#include "pdisc/types.hpp"

namespace pdisc {

// A bounded Jordan domain given by a closed, simple, positively oriented
// polyline with a marked interior point.
struct PlanarDomain {
    std::vector<cplx> boundary;  // vertices; edge i runs boundary[i] -> boundary[i+1 mod V]
    cplx center{0.0, 0.0};

    int vertexCount() const { return static_cast<int>(boundary.size()); }
    double diameter() const;
    double boundaryLength() const;

    // Distance from a point to the boundary polyline.
    double boundaryDistance(cplx p) const;

    // Winding number of the boundary around p (angle summation, rounded).
    int winding(cplx p) const;

    // Checks closedness/simplicity/orientation/winding-1; throws on failure.
    void validate() const;

    // Regular polygon approximating the circle |z - c| = r.
    static PlanarDomain disc(cplx c, double r, int vertices = 4096);
};

double point_segment_distance(cplx p, cplx a, cplx b);

// Point at fractional position t in [0, V) along the polyline (vertex i at
// t = i, linear in between).
cplx polyline_point(const std::vector<cplx>& poly, double t);

// Resamples the polyline to n points, approximately equispaced in arclength.
std::vector<cplx> resample_closed_polyline(const std::vector<cplx>& poly, int n);

}  // namespace pdisc
