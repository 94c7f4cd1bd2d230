#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pdisc/planar.hpp"
#include "pdisc/types.hpp"

namespace pdisc {

// rho_c(x1+iy1, x2+iy2) = x1^2 + x2^2 - c (y1^2 + y2^2). Strongly
// plurisubharmonic for c < 1; pluriharmonic at c = 1.
double rho_cone(double c, const C2& z);

// Multiplier h(x+iy) = x + i c y appearing in the complex gradient of rho_c.
cplx cone_multiplier(double c, cplx z);

// Second-order holomorphic data of rho_c at a base point: the quadratic
// polynomial Q_z, the (scalar) Levi form, and a rational parametrization of
// the quadric {Q_z = 0} that is regular at w = 0.
struct LeviChart {
    double c = 0.0;
    C2 base;
    double rhoAtBase = 0.0;
    C2 linCoeffs;            // (2 h(z1), 2 h(z2))
    double quadCoeff = 0.0;  // kappa = (1+c)/2
    double leviScalar = 0.0; // (1-c)/2
    bool swapped = false;    // chart orientation chosen for a well-conditioned u0
    bool linearChart = false;  // kappa == 0: the quadric degenerates to a line
    cplx u0{0.0, 0.0};       // parameter with w(u0) = 0

    // Point of the quadric at chart parameter u.
    C2 chart_point(cplx u) const;
    // Value of the quadratic polynomial Q at an arbitrary displacement.
    cplx Q(const C2& w) const;
    // Unit tangent direction of the quadric at w = 0 (continuous in z).
    C2 tangent_dir() const;
};

LeviChart levi_chart(double c, const C2& z);

struct OracleOptions {
    int gridSize = 32;        // multi-start grid per chart axis
    int newtonIters = 48;
    double residualGate = 1e-10;
    double searchRadiusFactor = 4.0;  // ball |w| <= factor * |z|
    double ratioCap = 2.0;            // fallback when no critical point is found
};

// Solutions of the colinearity/quadric system that marks the critical points
// of rho restricted to the quadric. w = 0 always solves; only nonzero
// solutions are kept.
struct CriticalSolutionSet {
    double c = 0.0;
    C2 base;
    struct Sol {
        C2 w;
        double res1 = 0.0;  // colinearity equation residual
        double res2 = 0.0;  // quadric equation residual
    };
    std::vector<Sol> solutions;
    double minNorm = 0.0;  // 0 when empty
    bool empty() const { return solutions.empty(); }
    // rho-gain at the nearest critical point; +inf when none was found.
    double gain_threshold() const;
};

CriticalSolutionSet critical_system_solve(double c, const C2& z, const OracleOptions& opt = {});

struct SublevelResult {
    PlanarDomain domain;   // in the chart parameter plane, center = u0
    double radius = 0.0;   // |w| radius of the sublevel set on the quadric
    double threshold = 0.0;  // critical gain threshold used in the guard
};

// Connected component through u0 of {u : rho(z + w(u)) - rho(z) < C} in the
// chart plane, traced as a star-shaped polyline. C must stay below the
// critical gain threshold reported by the oracle.
SublevelResult sublevel_component(const LeviChart& chart, double C, int rays = 512,
                                  std::optional<double> knownThreshold = std::nullopt,
                                  const OracleOptions& opt = {});

struct LiftingRadius {
    double a = 0.0;
    double safety = 0.5;
    double minRatio = 0.0;  // smallest observed gain ratio over the batch
    int batch = 0;
    uint64_t seed = 0;
    bool capped = false;  // no critical points found anywhere; cap applied
};

// Numerically calibrated lifting radius a(c): a conservative fraction of the
// smallest relative rho-gain at nonzero critical points over a random batch.
// Deterministic for a fixed seed.
LiftingRadius lifting_radius(double c, int batch, uint64_t seed, double safety = 0.5,
                             const OracleOptions& opt = {});

}  // namespace pdisc
