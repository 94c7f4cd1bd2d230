#include "pdisc/roots.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace pdisc {

std::vector<cplx> companion_roots(const std::vector<cplx>& coeffs) {
    const auto c = poly_trimmed(coeffs, 0.0);
    const int deg = static_cast<int>(c.size()) - 1;
    if (deg < 1) return {};
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) companion(i, i - 1) = cplx(1.0, 0.0);
    for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -c[static_cast<size_t>(i)] / c.back();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    std::vector<cplx> roots(static_cast<size_t>(deg));
    for (int i = 0; i < deg; ++i) roots[static_cast<size_t>(i)] = solver.eigenvalues()(i);
    // Newton polish tightens each eigenvalue a little.
    const auto d = poly_derivative(c);
    for (auto& r : roots) {
        for (int it = 0; it < 3; ++it) {
            const cplx pv = poly_eval(c, r);
            const cplx dv = poly_eval(d, r);
            if (std::abs(dv) < 1e-300) break;
            const cplx step = pv / dv;
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
            r -= step;
        }
    }
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

std::vector<cplx> deflate_root(const std::vector<cplx>& coeffs, cplx root) {
    // synthetic division by (z - root)
    const int deg = static_cast<int>(coeffs.size()) - 1;
    if (deg < 1) throw PreconditionError("deflate_root: constant polynomial");
    std::vector<cplx> out(static_cast<size_t>(deg));
    cplx carry = coeffs.back();
    for (int k = deg - 1; k >= 0; --k) {
        out[static_cast<size_t>(k)] = carry;
        carry = coeffs[static_cast<size_t>(k)] + root * carry;
    }
    return out;
}

}  // namespace pdisc
