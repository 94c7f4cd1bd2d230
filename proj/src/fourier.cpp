#include "pdisc/fourier.hpp"

#include <algorithm>

#include "pdisc/fft.hpp"

namespace pdisc {

BoundaryGrid::BoundaryGrid(int n, std::vector<cplx> v) : nTheta(n), values(std::move(v)) {
    if (!is_power_of_two(nTheta) || nTheta < 8)
        throw PreconditionError("BoundaryGrid: nTheta must be a power of two >= 8");
    if (static_cast<int>(values.size()) != nTheta)
        throw PreconditionError("BoundaryGrid: values length must equal nTheta");
    for (const auto& v0 : values)
        if (!std::isfinite(v0.real()) || !std::isfinite(v0.imag()))
            throw PreconditionError("BoundaryGrid: values must be finite");
}

BoundaryGrid sample_on_circle(const std::function<cplx(cplx)>& f, int nTheta) {
    std::vector<cplx> v(static_cast<size_t>(nTheta));
    for (int k = 0; k < nTheta; ++k) v[static_cast<size_t>(k)] = f(unit_node(k, nTheta));
    return BoundaryGrid(nTheta, std::move(v));
}

LaurentCoeffs::LaurentCoeffs(int M, std::vector<cplx> c) : lowFreq(M), coeffs(std::move(c)) {
    if (lowFreq < 0) throw PreconditionError("LaurentCoeffs: pole order must be >= 0");
    if (coeffs.empty()) throw PreconditionError("LaurentCoeffs: empty band");
    for (const auto& v : coeffs)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw PreconditionError("LaurentCoeffs: coefficients must be finite");
}

cplx LaurentCoeffs::coeff(int freq) const {
    const int idx = freq + lowFreq;
    if (idx < 0 || idx >= static_cast<int>(coeffs.size())) return {0.0, 0.0};
    return coeffs[static_cast<size_t>(idx)];
}

cplx LaurentCoeffs::eval(cplx z) const {
    // Horner in z for the polynomial part sum c_{f} z^{f+M}, then divide.
    cplx acc = coeffs.back();
    for (size_t i = coeffs.size() - 1; i-- > 0;) acc = acc * z + coeffs[i];
    if (lowFreq == 0) return acc;
    cplx zp(1.0, 0.0);
    for (int i = 0; i < lowFreq; ++i) zp *= z;
    return acc / zp;
}

namespace {

LaurentCoeffs band_from_dft(const std::vector<cplx>& dft, int M, int N) {
    const size_t n = dft.size();
    std::vector<cplx> band(static_cast<size_t>(M + N + 1));
    for (int f = -M; f <= N; ++f) {
        const size_t idx = f >= 0 ? static_cast<size_t>(f) : n - static_cast<size_t>(-f);
        band[static_cast<size_t>(f + M)] = dft[idx];
    }
    return LaurentCoeffs(M, std::move(band));
}

}  // namespace

TrigApproxResult trig_approx(const std::function<cplx(cplx)>& f, int nTheta, int M, int N, double tol) {
    if (M < 0 || N < -M) throw PreconditionError("trig_approx: need M >= 0 and N >= -M");
    if (!is_power_of_two(nTheta) || nTheta <= 2 * (M + N))
        throw PreconditionError("trig_approx: need power-of-two nTheta > 2(M+N)");
    BoundaryGrid g = sample_on_circle(f, nTheta);
    auto dft = dft_coefficients(g.values);
    TrigApproxResult out;
    out.laurent = band_from_dft(dft, M, N);
    out.verifyGrid = 2 * nTheta;
    double sup = 0.0;
    for (int k = 0; k < out.verifyGrid; ++k) {
        const cplx z = unit_node(k, out.verifyGrid);
        sup = std::max(sup, std::abs(f(z) - out.laurent.eval(z)));
    }
    out.supError = sup;
    out.withinTol = sup <= tol;
    return out;
}

TrigApproxResult trig_approx(const BoundaryGrid& samples, int M, int N, double tol) {
    if (M < 0 || N < -M) throw PreconditionError("trig_approx: need M >= 0 and N >= -M");
    if (samples.nTheta <= 2 * (M + N)) throw PreconditionError("trig_approx: need nTheta > 2(M+N)");
    auto dft = dft_coefficients(samples.values);
    TrigApproxResult out;
    out.laurent = band_from_dft(dft, M, N);
    out.verifyGrid = samples.nTheta;
    double sup = 0.0;
    for (int k = 0; k < samples.nTheta; ++k) {
        const cplx z = samples.node(k);
        sup = std::max(sup, std::abs(samples.values[static_cast<size_t>(k)] - out.laurent.eval(z)));
    }
    out.supError = sup;
    out.withinTol = sup <= tol;
    return out;
}

TaylorFamilyResult taylor_truncate(const std::vector<cplx>& nodes, const std::function<C2(cplx, cplx)>& family,
                                   int order, double rescale, int wSamples, double tol) {
    if (order < 1) throw PreconditionError("taylor_truncate: order must be >= 1");
    if (!(rescale > 0.0 && rescale <= 1.0)) throw PreconditionError("taylor_truncate: rescale must be in (0,1]");
    if (!is_power_of_two(wSamples) || wSamples <= 2 * order)
        throw PreconditionError("taylor_truncate: wSamples must be a power of two > 2*order");

    TaylorFamilyResult out;
    out.coeffs.assign(nodes.size(), {});
    double worstA0 = 0.0;
    std::vector<cplx> buf1(static_cast<size_t>(wSamples)), buf2(static_cast<size_t>(wSamples));
    for (size_t i = 0; i < nodes.size(); ++i) {
        for (int l = 0; l < wSamples; ++l) {
            const C2 v = family(nodes[i], rescale * unit_node(l, wSamples));
            buf1[static_cast<size_t>(l)] = v.z1;
            buf2[static_cast<size_t>(l)] = v.z2;
        }
        auto c1 = dft_coefficients(buf1);
        auto c2 = dft_coefficients(buf2);
        worstA0 = std::max(worstA0, C2(c1[0], c2[0]).norm());
        std::vector<C2> cs(static_cast<size_t>(order));
        double sj = rescale;
        for (int j = 1; j <= order; ++j) {
            cs[static_cast<size_t>(j - 1)] = C2(c1[static_cast<size_t>(j)] / sj, c2[static_cast<size_t>(j)] / sj);
            sj *= rescale;
        }
        out.coeffs[i] = std::move(cs);
    }
    out.maxCenterResidual = worstA0;
    if (worstA0 > tol)
        throw PreconditionError("taylor_truncate: family does not vanish at the disc centre (|a_0| = " +
                                std::to_string(worstA0) + ")");
    return out;
}

}  // namespace pdisc
