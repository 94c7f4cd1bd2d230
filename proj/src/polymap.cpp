#include "pdisc/polymap.hpp"

#include <algorithm>

#include "pdisc/fft.hpp"

namespace pdisc {

namespace {

cplx cpow_int(cplx z, long long n) {
    // binary exponentiation; deterministic across runs
    cplx result(1.0, 0.0);
    cplx base = z;
    while (n > 0) {
        if (n & 1) result *= base;
        base *= base;
        n >>= 1;
    }
    return result;
}

}  // namespace

PolyMap::PolyMap(std::vector<C2> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.emplace_back();
    for (const auto& c : coeffs_)
        if (!c.finite()) throw PreconditionError("PolyMap: coefficients must be finite");
    reindex();
}

void PolyMap::reindex() {
    nz_.clear();
    for (int k = 0; k < static_cast<int>(coeffs_.size()); ++k) {
        const C2& c = coeffs_[static_cast<size_t>(k)];
        if (c.z1 != cplx(0.0, 0.0) || c.z2 != cplx(0.0, 0.0)) nz_.push_back(k);
    }
    if (nz_.empty()) nz_.push_back(0);
}

PolyMap PolyMap::from_components(const std::vector<cplx>& c1, const std::vector<cplx>& c2) {
    std::vector<C2> c(std::max(c1.size(), c2.size()));
    if (c.empty()) c.emplace_back();
    for (size_t k = 0; k < c.size(); ++k) {
        cplx a = k < c1.size() ? c1[k] : cplx(0.0, 0.0);
        cplx b = k < c2.size() ? c2[k] : cplx(0.0, 0.0);
        c[k] = C2(a, b);
    }
    return PolyMap(std::move(c));
}

C2 PolyMap::eval(cplx z) const {
    // Horner over the nonzero coefficients, jumping zero runs with powers.
    const int m = static_cast<int>(nz_.size());
    C2 acc = coeffs_[static_cast<size_t>(nz_[static_cast<size_t>(m - 1)])];
    for (int i = m - 2; i >= 0; --i) {
        const int gap = nz_[static_cast<size_t>(i + 1)] - nz_[static_cast<size_t>(i)];
        const cplx zp = (gap == 1) ? z : cpow_int(z, gap);
        acc = zp * acc + coeffs_[static_cast<size_t>(nz_[static_cast<size_t>(i)])];
    }
    if (nz_[0] > 0) acc = cpow_int(z, nz_[0]) * acc;
    return acc;
}

PolyMap PolyMap::derivative() const {
    if (coeffs_.size() <= 1) return PolyMap(std::vector<C2>{C2()});
    std::vector<C2> d(coeffs_.size() - 1);
    for (size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
    return PolyMap(std::move(d));
}

PolyMap PolyMap::plus(const PolyMap& o) const {
    std::vector<C2> c(std::max(coeffs_.size(), o.coeffs_.size()));
    for (size_t k = 0; k < c.size(); ++k) {
        C2 v;
        if (k < coeffs_.size()) v += coeffs_[k];
        if (k < o.coeffs_.size()) v += o.coeffs_[k];
        c[k] = v;
    }
    return PolyMap(std::move(c));
}

PolyMap PolyMap::shifted(const C2& v) const {
    std::vector<C2> c = coeffs_;
    c[0] += v;
    return PolyMap(std::move(c));
}

PolyMap PolyMap::scaled(double s) const {
    std::vector<C2> c = coeffs_;
    for (auto& x : c) x = s * x;
    return PolyMap(std::move(c));
}

std::vector<cplx> PolyMap::component(int which) const {
    std::vector<cplx> out(coeffs_.size());
    for (size_t k = 0; k < coeffs_.size(); ++k) out[k] = (which == 0) ? coeffs_[k].z1 : coeffs_[k].z2;
    return out;
}

std::vector<C2> PolyMap::values_on_circle(double r, int n) const {
    if (!is_power_of_two(n)) throw PreconditionError("values_on_circle: grid must be a power of two");
    std::vector<cplx> f1(static_cast<size_t>(n), cplx(0.0, 0.0));
    std::vector<cplx> f2(static_cast<size_t>(n), cplx(0.0, 0.0));
    double rk = 1.0;
    for (size_t k = 0; k < coeffs_.size(); ++k) {
        const size_t slot = k & static_cast<size_t>(n - 1);
        f1[slot] += rk * coeffs_[k].z1;
        f2[slot] += rk * coeffs_[k].z2;
        rk *= r;
        if (rk == 0.0 && k > 0) break;  // remaining terms underflow to zero
    }
    fft_inplace(f1, +1);
    fft_inplace(f2, +1);
    std::vector<C2> out(static_cast<size_t>(n));
    for (int m = 0; m < n; ++m) out[static_cast<size_t>(m)] = C2(f1[static_cast<size_t>(m)], f2[static_cast<size_t>(m)]);
    return out;
}

double PolyMap::sup_on_circle(double r, int n) const {
    double best = 0.0;
    if (degree() > 2048 && is_power_of_two(n)) {
        auto vals = values_on_circle(r, n);
        for (const auto& v : vals) best = std::max(best, v.norm());
        return best;
    }
    for (int k = 0; k < n; ++k) best = std::max(best, eval(r * unit_node(k, n)).norm());
    return best;
}

std::vector<CircleSamples> eval_and_sample(const PolyMap& map, const std::vector<double>& radii, int nTheta) {
    if (radii.empty()) throw PreconditionError("eval_and_sample: radius list must be nonempty");
    for (double r : radii)
        if (!(r > 0.0 && r <= 1.0)) throw PreconditionError("eval_and_sample: radii must lie in (0,1]");
    if (!is_power_of_two(nTheta)) throw PreconditionError("eval_and_sample: nTheta must be a power of two");
    std::vector<CircleSamples> out;
    out.reserve(radii.size());
    for (double r : radii) {
        CircleSamples cs;
        cs.radius = r;
        cs.nTheta = nTheta;
        cs.values.resize(static_cast<size_t>(nTheta));
        for (int k = 0; k < nTheta; ++k) cs.values[static_cast<size_t>(k)] = map.eval(r * unit_node(k, nTheta));
        out.push_back(std::move(cs));
    }
    return out;
}

cplx poly_eval(const std::vector<cplx>& coeffs, cplx z) {
    if (coeffs.empty()) return {0.0, 0.0};
    cplx acc = coeffs.back();
    for (size_t i = coeffs.size() - 1; i-- > 0;) acc = acc * z + coeffs[i];
    return acc;
}

std::vector<cplx> poly_derivative(const std::vector<cplx>& coeffs) {
    if (coeffs.size() <= 1) return {cplx(0.0, 0.0)};
    std::vector<cplx> d(coeffs.size() - 1);
    for (size_t k = 1; k < coeffs.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs[k];
    return d;
}

std::vector<cplx> poly_trimmed(const std::vector<cplx>& coeffs, double tol) {
    std::vector<cplx> c = coeffs;
    while (c.size() > 1 && std::abs(c.back()) <= tol) c.pop_back();
    return c;
}

}  // namespace pdisc
