#pragma once

#include <memory>
#include <vector>

#include "pdisc/certificate.hpp"
#include "pdisc/conedisc.hpp"
#include "pdisc/liftsteps.hpp"
#include "pdisc/planar.hpp"
#include "pdisc/polymap.hpp"
#include "pdisc/types.hpp"

namespace pdisc {

// rho(x1+iy1, x2+iy2) = max(x1, x2).
double rho_max(const C2& z);

// The model tube disc: the graph piece of the quadric z1 + z2 - eps (z1^2 +
// z2^2) = 1 - eps over the planar domain D_eps, whose boundary sits over the
// corner set k = [0,1] x {0} union {0} x [0,1].
struct ModelDisc {
    double eps = 0.0;
    double aEps = 0.0;  // half-height of D_eps
    PlanarDomain domain;
    std::vector<double> curveX1;  // gamma graph: (x1, h(x1)), real trace
    std::vector<double> curveH;
    Certificate cert;

    // Unique root x2 of the reduced quadric equation; monotonicity of the
    // defining function in x2 is asserted at the bracket before solving.
    double xi(double x1, double y1) const;
    double y2_of(double x1, double y1, double x2) const;
    // Graph point (z1, z2) over a (possibly slightly continued) chart point.
    C2 point(cplx z1) const;
    double h_curve(double x1) const;  // gamma graph value
};

ModelDisc model_disc(double eps, int boundarySamples = 512, int interiorGrid = 24, bool certify = true);

enum class ChordRule {
    MaxCoordinate,  // direction (delta, -1) with the larger coordinate first; deterministic tie-break
    Smooth          // symmetric soft-clearance rule, smooth in the base point
};

struct TubeOptions {
    int boundarySamples = 512;
    int interiorGrid = 16;
    double offsetFactor = 0.05;
    ChordRule rule = ChordRule::MaxCoordinate;
    double sigmaScale = 0.2;  // smooth-rule clearance softness (fraction of C1-C0)
    bool certify = true;
    RiemannOptions riemann;
};

struct ChordTriangle {
    C2 base;
    double C0 = 0.0, C1 = 0.0;
    bool swapped = false;  // MaxCoordinate rule only
    double delta = 0.0;    // chord slope parameter of the rule in force
    double offset = 0.0;
    cplx p{0.0, 0.0}, q{0.0, 0.0};  // chord endpoints on the level rays (x-plane)
    double l12 = 0.0, l21 = 0.0;    // affine linear part (anti-diagonal)
    cplx v01{0.0, 0.0}, v02{0.0, 0.0};
    double eps = 0.0;
    double uc = 0.0;  // marked model point on the real axis of D_eps
    double crossingValue = 0.0;
};

// Analytic disc through z with boundary on {rho_max = C1} and body above C0:
// an affine image of the model disc, recentered by the conformal map of
// D_eps at the marked real point.
struct PointDisc {
    ChordTriangle tri;
    std::shared_ptr<const ModelDisc> model;
    ConformalMap phi;
    Certificate cert;

    C2 eval(cplx w) const;     // absolute position in C^2
    C2 centered(cplx w) const; // eval(w) - eval(0)
    C2 center() const { return eval(cplx(0.0, 0.0)); }
};

PointDisc disc_through_point(const C2& z, double C0, double C1, double tol, const TubeOptions& opt = {});

// Boundary push toward the level C1 for rho_max, with per-node tube discs.
LeviStep lift_step_tube(const PolyMap& g0, double C0, double C1, double eps, double r, const LiftOptions& opt,
                        const TubeOptions& tube = {});

struct FactorResult {
    PolyMap reduced;
    std::vector<cplx> removedRoots1, removedRoots2;
    double minModulus = 0.0;
    Certificate cert;
};

// Divides out the component zeros inside |zeta| < r and certifies the result
// nonvanishing on the closed disc grid. Roots in the annulus are an error.
FactorResult factor_zeros(const PolyMap& h, double r);

struct ExpDisc {
    PolyMap g;
    Certificate cert;
    double maxIdentityErr = 0.0;  // | |f_j| - e^{u_j} | on grids
    bool overflowGuarded = false;
};

// f = (e^{g1}, e^{g2}); the modulus identities are certified on grids and
// magnitudes are handled in log form to dodge overflow.
ExpDisc exponentiate(const PolyMap& g, int nTheta = 512, int nRadii = 8);

struct TubeSequence {
    std::vector<Stage> stages;   // stages[0] holds the logarithm of the seed
    std::vector<double> levels;  // M_0, M_1, ..., M_K
    std::vector<double> epsSchedule;
    PolyMap seed;                // the zero-free seed map
    ExpDisc expDisc;
    bool complete = false;
    Certificate finalBounds;
    std::string abortReason;

    bool all_pass() const {
        if (!complete) return false;
        for (const auto& s : stages)
            if (!s.cert.pass()) return false;
        return finalBounds.pass() && expDisc.cert.pass();
    }
};

// Inductive builder for discs avoiding both coordinate axes: lifts the
// logarithm along rho_max through a ladder of unit-spaced levels with the
// halving radius law, then exponentiates.
TubeSequence build_axis_avoiding_disc(const PolyMap& h, double r1, const std::vector<double>& epsSchedule, int K,
                                      const LiftOptions& opt, const TubeOptions& tube = {});

}  // namespace pdisc
