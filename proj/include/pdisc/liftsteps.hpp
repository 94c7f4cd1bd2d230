#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pdisc/certificate.hpp"
#include "pdisc/levi.hpp"
#include "pdisc/polymap.hpp"
#include "pdisc/types.hpp"

namespace pdisc {

// Family of centered holomorphic discs attached along the unit circle: at
// node zeta_i the disc is the polynomial w -> sum_j coeff[i][j-1] w^j. An
// optional resampler rebuilds the disc at fresh boundary points, which the
// verification grids use.
struct DiscFamily {
    std::vector<cplx> nodes;
    int wOrder = 0;
    std::vector<C2> coeffs;  // [i * wOrder + (j-1)]
    std::function<std::vector<C2>(cplx)> resample;

    int nodeCount() const { return static_cast<int>(nodes.size()); }
    const C2* node_coeffs(int i) const { return coeffs.data() + static_cast<size_t>(i) * static_cast<size_t>(wOrder); }
    C2 eval_node(int i, cplx w) const;
    static C2 eval_coeffs(const C2* c, int order, cplx w);
};

struct LiftOptions {
    int familyNodes = 128;
    int maxFamilyNodes = 1 << 15;
    double nodeFactor = 3.0;  // nodes >= nodeFactor * (deg g0 + 1)
    int wOrder = 12;
    int maxWOrder = 96;
    double taylorRescale = 0.95;
    int verifyTheta = 512;
    int verifyRadii = 8;
    long long maxDegree = 1 << 16;
    double trigTolFactor = 0.2;
    double levelShrink = 0.95;
    bool equalizeLevels = true;
    int oracleGrid = 16;
    double riemannRelTol = 3e-4;
    int riemannQuad = 512;
    int riemannBasis = 40;
    int riemannFFT = 2048;
    int riemannPolish = 10;
    int riemannMaxPhi = 500;
    int doubledNodeChecks = 64;  // fresh-node spot checks of the family fit
    double timeBudgetSec = 0.0;  // 0 = unlimited (builders check between stages)
    uint64_t seed = 7;
};

using RhoFn = std::function<double(const C2&)>;
// Boundary target level at zeta in T; receives the base map's value there so
// long coefficient vectors are evaluated once per grid point.
using LevelFn = std::function<double(cplx, const C2&)>;
// Strict lower bound at a point of the closed disc, same convention.
using FloorFn = std::function<double(cplx, const C2&)>;
// Per-node gain target for the Levi step.
using GainFn = std::function<double(cplx, const C2&)>;

// Thrown when a lifting hypothesis fails on the input grids; names the
// hypothesis and the offending node.
struct HypothesisError : ConstructionError {
    HypothesisError(const std::string& which, int node, double value)
        : ConstructionError("hypothesis " + which + " violated at node " + std::to_string(node) +
                            " (value " + std::to_string(value) + ")"),
          hypothesis(which),
          nodeIndex(node) {}
    std::string hypothesis;
    int nodeIndex;
};

struct ApproxResult {
    PolyMap h;
    Certificate cert;
    int K = 0;
    int maxLowBand = 0;
    long long degree = 0;
};

// One polynomial map shadowing a whole family of centered discs: h agrees
// with disc boundaries along T, stays near disc interiors on the outer
// annulus, and is small on |zeta| <= r. Escalates the winding exponent by
// doubling; a failed budget returns a failing certificate, never a fake pass.
ApproxResult approx_disc_family(const DiscFamily& family, double eps, double r, const LiftOptions& opt);

// Grid re-verification of the push conclusions; the test suite calls this
// with doubled grids.
Certificate verify_push(const PolyMap& g0, const PolyMap& g, const RhoFn& rho, const LevelFn& level,
                        const FloorFn& floor, bool floorAnnulusOnly, double eps, double r, int nTheta, int nRadii);

struct PushResult {
    PolyMap g;
    PolyMap h;
    Certificate cert;
};

// Boundary push g = g0 + h against a constant target level C1 with floor C0
// on the annulus. Hypotheses are checked on the input grids first.
PushResult push_boundary(const PolyMap& g0, const DiscFamily& family, const RhoFn& rho, double C0, double C1,
                         double eps, double r, double hypBand, const LiftOptions& opt);

// Variable-level variant used by the Levi and cone steps.
PushResult push_boundary_level(const PolyMap& g0, const DiscFamily& family, const RhoFn& rho, const LevelFn& level,
                               const FloorFn& floor, bool floorAnnulusOnly, double eps, double r, double hypBand,
                               const LiftOptions& opt);

struct LeviStep {
    PolyMap g;
    Certificate cert;
    double hypBand = 0.0;
    double minGain = 0.0;
};

// Boundary lift along Levi-quadric discs of rho_c: per node, the sublevel
// disc of the quadric at gain C(zeta), conformally parametrized and rotated
// to a continuous tangent normalization.
LeviStep lift_step_levi(const PolyMap& g0, double c, const GainFn& C, double eps, double r, const LiftOptions& opt);

struct ConeStep {
    PolyMap g;
    Certificate cert;
    double mBefore = 0.0;
    double mAfter = 0.0;
    double aUsed = 0.0;
};

// Calibrated cone lift: multiplies the boundary minimum of rho_c by (1+a) up
// to the certified slack.
ConeStep lift_step_cone(const PolyMap& h, double c, double eps, double r, const LiftOptions& opt,
                        const LiftingRadius* aOverride = nullptr);

}  // namespace pdisc
