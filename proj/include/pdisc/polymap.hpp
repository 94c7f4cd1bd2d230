#pragma once

#include <vector>

#include "pdisc/types.hpp"

namespace pdisc {

// Polynomial map C -> C^2, coefficient of zeta^k stored at index k. This is
// the carrier for every disc approximation in the library. Coefficient
// vectors can get long in late lifting stages, so evaluation compresses runs
// of zero coefficients with binary-power jumps.
class PolyMap {
  public:
    PolyMap() : coeffs_(1) { reindex(); }
    explicit PolyMap(std::vector<C2> coeffs);
    static PolyMap constant(const C2& v) { return PolyMap(std::vector<C2>{v}); }
    static PolyMap from_components(const std::vector<cplx>& c1, const std::vector<cplx>& c2);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<C2>& coeffs() const { return coeffs_; }
    size_t nonzero_count() const { return nz_.size(); }

    C2 eval(cplx z) const;
    C2 operator()(cplx z) const { return eval(z); }

    PolyMap derivative() const;
    PolyMap plus(const PolyMap& o) const;
    PolyMap shifted(const C2& v) const;  // adds a constant
    PolyMap scaled(double s) const;

    std::vector<cplx> component(int which) const;

    // Values on the uniform circle grid of size n (power of two) at |z|=r,
    // computed by folding the coefficients mod n and one inverse FFT. Fast
    // for long coefficient vectors; not bit-compatible with eval().
    std::vector<C2> values_on_circle(double r, int n) const;

    double sup_on_circle(double r, int n) const;

  private:
    void reindex();
    std::vector<C2> coeffs_;
    std::vector<int> nz_;  // indices of nonzero coefficients, ascending
};

struct CircleSamples {
    double radius = 1.0;
    int nTheta = 0;
    std::vector<C2> values;
};

// Samples a polynomial map on circles |z| = r for each requested radius.
// Values at shared nodes of the n and 2n grids agree bit for bit.
std::vector<CircleSamples> eval_and_sample(const PolyMap& map, const std::vector<double>& radii, int nTheta);

// Scalar polynomial helpers (coefficient of z^k at index k).
cplx poly_eval(const std::vector<cplx>& coeffs, cplx z);
std::vector<cplx> poly_derivative(const std::vector<cplx>& coeffs);
std::vector<cplx> poly_trimmed(const std::vector<cplx>& coeffs, double tol = 0.0);

}  // namespace pdisc
