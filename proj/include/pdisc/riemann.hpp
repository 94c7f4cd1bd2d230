#pragma once

#include <vector>

#include "pdisc/certificate.hpp"
#include "pdisc/planar.hpp"
#include "pdisc/types.hpp"

namespace pdisc {

struct RiemannOptions {
    int quadPoints = 1024;   // boundary quadrature / correspondence resolution
    int basisSize = 64;      // least-squares basis dimension
    int fftSize = 4096;      // power of two; correspondence grid for the coefficients
    int maxPhiDegree = 1600;
    int polishSweeps = 24;
    int verifyNodes = 512;
    bool validateDomain = true;
};

// Polynomial approximation of the conformal map of the closed unit disc onto
// the domain, normalized by phi(0) = center and phi'(0) > 0.
struct ConformalMap {
    std::vector<cplx> coeffs;
    cplx center{0.0, 0.0};
    bool ok = false;
    double boundarySup = 0.0;  // max distance of phi(T-grid) to the boundary polyline
    double tolAbs = 0.0;
    Certificate cert;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    cplx eval(cplx z) const;
    cplx deriv(cplx z) const;
};

// Certified numerical Riemann map: least-squares polynomial objective with
// projection polishing, verified on a 512-node circle. relTol is measured
// against the domain diameter. A failed certification is returned with
// ok = false and diagnostics, never thrown.
ConformalMap riemann_map(const PlanarDomain& domain, double relTol, const RiemannOptions& opt = {});

}  // namespace pdisc
