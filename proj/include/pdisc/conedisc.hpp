#pragma once

#include <vector>

#include "pdisc/certificate.hpp"
#include "pdisc/liftsteps.hpp"
#include "pdisc/polymap.hpp"
#include "pdisc/types.hpp"

namespace pdisc {

// Closed-form gradient flow of rho_c: x(t) = x(0) e^{2t}, y(t) = y(0) e^{-2ct}.
C2 flow(double c, const C2& z, double t);

struct FlowParams {
    double c = 0.0;
    double bumpInnerRadius = 0.0;
    std::vector<double> schedule;  // per boundary node flow time
    double defectNorm = 0.0;       // sup of the discrete dbar residual
};

struct CrossOptions {
    int nTheta = 256;
    int nRadii = 24;
    double clearance = 1e-6;  // min |x-part| on T required off the stable manifold
    double margin = 0.05;     // relative overshoot above the target level
};

struct CrossResult {
    std::vector<double> radii;
    std::vector<std::vector<C2>> rings;  // rings[j][k] = f1 at radius_j * node_k
    FlowParams params;
    Certificate cert;
};

// Pushes the boundary of a disc across the critical level of rho_c at the
// origin with the gradient flow under a radial bump schedule; the result is
// no longer holomorphic, and the dbar defect is measured and reported.
CrossResult cross_critical_level(const PolyMap& f0, double c, double targetLevel, double bumpInnerRadius,
                                 const CrossOptions& opt = {});

struct Stage {
    PolyMap g;
    double r = 0.0;
    double M = 0.0;
    double eps = 0.0;
    Certificate cert;
};

struct StageSequence {
    double c = 0.0;
    double M1 = 0.0;
    double eps = 0.0;
    double r1 = 0.0;
    double a = 0.0;
    std::vector<Stage> stages;  // stages[0] is the initial map
    bool complete = false;
    Certificate telescoping;
    std::string abortReason;

    bool all_pass() const {
        if (!complete) return false;
        for (const auto& s : stages)
            if (!s.cert.pass()) return false;
        return telescoping.pass();
    }
};

// Inductive construction of a finite stage sequence for a disc proper in the
// cone {rho_c > 0}: boundary minima grow geometrically, inner discs freeze,
// and every stage carries a grid certificate. Aborts with the partial
// sequence when a stage cannot be certified.
StageSequence build_proper_cone_disc(const PolyMap& h, double c, double M, double eps, double r1, int K,
                                     const LiftOptions& opt);

struct MeanValueReport {
    double c = 1.0;
    double centerRho1 = 0.0;
    struct Row {
        double r = 0.0;
        double meanRho1 = 0.0;
        double minRho1 = 0.0;
        double minRhoC = 0.0;
    };
    std::vector<Row> rows;
    double worstMeanGap = 0.0;  // max |mean - center| over radii
    Certificate cert;
};

// The obstruction side for c >= 1: Re(f1^2 + f2^2) is harmonic, so its
// circle means equal the centre value and boundary minima cannot exceed it.
MeanValueReport falsify_c_ge_1(const PolyMap& f, double c, const std::vector<double>& radii, int nTheta);

}  // namespace pdisc
