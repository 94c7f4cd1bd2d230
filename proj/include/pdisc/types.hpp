#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdisc {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Thrown when an operation's stated preconditions are violated.
struct PreconditionError : std::invalid_argument {
    explicit PreconditionError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Thrown when a construction cannot be completed (budget exhausted, solver
// failure). Verification shortfalls are reported through certificates, not
// through this type.
struct ConstructionError : std::runtime_error {
    explicit ConstructionError(const std::string& msg) : std::runtime_error(msg) {}
};

// A point of C^2.
struct C2 {
    cplx z1{0.0, 0.0};
    cplx z2{0.0, 0.0};

    C2() = default;
    C2(cplx a, cplx b) : z1(a), z2(b) {}

    C2 operator+(const C2& o) const { return {z1 + o.z1, z2 + o.z2}; }
    C2 operator-(const C2& o) const { return {z1 - o.z1, z2 - o.z2}; }
    C2 operator-() const { return {-z1, -z2}; }
    C2& operator+=(const C2& o) {
        z1 += o.z1;
        z2 += o.z2;
        return *this;
    }
    C2& operator-=(const C2& o) {
        z1 -= o.z1;
        z2 -= o.z2;
        return *this;
    }
    friend C2 operator*(cplx s, const C2& v) { return {s * v.z1, s * v.z2}; }
    friend C2 operator*(const C2& v, cplx s) { return {s * v.z1, s * v.z2}; }
    friend C2 operator*(double s, const C2& v) { return {s * v.z1, s * v.z2}; }

    double norm2() const { return std::norm(z1) + std::norm(z2); }
    double norm() const { return std::sqrt(norm2()); }
    bool finite() const {
        return std::isfinite(z1.real()) && std::isfinite(z1.imag()) && std::isfinite(z2.real()) &&
               std::isfinite(z2.imag());
    }
};

inline double dist(const C2& a, const C2& b) { return (a - b).norm(); }

// Hermitian pairing <a,b> = a1 conj(b1) + a2 conj(b2).
inline cplx hdot(const C2& a, const C2& b) { return a.z1 * std::conj(b.z1) + a.z2 * std::conj(b.z2); }

// Bilinear pairing a1 b1 + a2 b2 (no conjugation).
inline cplx bdot(const C2& a, const C2& b) { return a.z1 * b.z1 + a.z2 * b.z2; }

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline int pow2_ceil(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Node angle 2*pi*k/n, written so that grids of size n and 2n produce
// bit-identical angles at shared nodes.
inline double node_angle(long long k, long long n) { return (kTwoPi * static_cast<double>(k)) / static_cast<double>(n); }

inline cplx unit_node(long long k, long long n) {
    const double t = node_angle(k, n);
    return {std::cos(t), std::sin(t)};
}

inline std::vector<cplx> unit_nodes(int n) {
    std::vector<cplx> out(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) out[static_cast<size_t>(k)] = unit_node(k, n);
    return out;
}

// Equispaced radii in [lo, hi], endpoints included.
inline std::vector<double> radius_ladder(double lo, double hi, int count) {
    if (count < 2) return {hi};
    std::vector<double> out(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i)
        out[static_cast<size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    return out;
}

}  // namespace pdisc
