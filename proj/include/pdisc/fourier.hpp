#pragma once

#include <functional>
#include <vector>

#include "pdisc/types.hpp"

namespace pdisc {

// Scalar samples at the equispaced nodes e^{2pi i k/nTheta}.
struct BoundaryGrid {
    int nTheta = 0;
    std::vector<cplx> values;

    BoundaryGrid() = default;
    BoundaryGrid(int n, std::vector<cplx> v);
    cplx node(int k) const { return unit_node(k, nTheta); }
};

BoundaryGrid sample_on_circle(const std::function<cplx(cplx)>& f, int nTheta);

// Coefficients of sum_{f=-M..N} c_f zeta^f; index 0 of coeffs holds f = -M.
struct LaurentCoeffs {
    int lowFreq = 0;  // M >= 0
    std::vector<cplx> coeffs;

    LaurentCoeffs() = default;
    LaurentCoeffs(int M, std::vector<cplx> c);
    int highFreq() const { return static_cast<int>(coeffs.size()) - 1 - lowFreq; }
    cplx coeff(int freq) const;  // zero outside the band
    cplx eval(cplx z) const;
};

struct TrigApproxResult {
    LaurentCoeffs laurent;
    double supError = 0.0;  // on the verification grid
    bool withinTol = false;
    int verifyGrid = 0;
};

// Least-frequencies fit of a circle function by a Laurent band -M..N: the
// coefficients are the discrete Fourier coefficients of the samples, and the
// sup error is measured on a doubled grid by resampling f.
TrigApproxResult trig_approx(const std::function<cplx(cplx)>& f, int nTheta, int M, int N, double tol);

// Same, but from fixed samples; the sup error is then measured on the sample
// grid itself (the finest grid available).
TrigApproxResult trig_approx(const BoundaryGrid& samples, int M, int N, double tol);

struct TaylorFamilyResult {
    // coeffs[node][j-1] is the coefficient of w^j, j = 1..order.
    std::vector<std::vector<C2>> coeffs;
    double maxCenterResidual = 0.0;  // max |a_0| over nodes
};

// Taylor coefficients in w of a family of centered discs, one disc per node,
// by Fourier analysis on the circle |w| = rescale. The family must vanish at
// w = 0 up to tol; otherwise this throws.
TaylorFamilyResult taylor_truncate(const std::vector<cplx>& nodes, const std::function<C2(cplx, cplx)>& family,
                                   int order, double rescale, int wSamples, double tol);

}  // namespace pdisc
