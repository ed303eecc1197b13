#pragma once

#include <string>
#include <vector>

#include "filamentlab/quasi_curve.hpp"

namespace flab::disc {

// Geometry of a reference curve gamma: r_gamma = 1 / sup |gamma''| (infinite
// for straight lines) and sup |gamma'''|.  Grid maxima, guarded by a
// doubled-resolution recomputation that must agree to 1%.
struct CurvatureData {
    double r_gamma = 0;
    double sup_d2 = 0;
    double sup_d3 = 0;
};

CurvatureData curvature_data(const QuasiCurve& gamma);

// Foot of the point x on gamma: Newton iteration on (x - gamma).gamma' = 0
// started at s0.  Requires |x - gamma(s0)| < max_start_dist (default
// r_gamma/8) and keeps the iterate within r_gamma/4 of s0.
double project(const QuasiCurve& gamma, const CurvatureData& cd, double s0, const Vec3& x,
               double tol = 1e-12, double max_start_dist = 0.0);

// sigma(s_j) at the nodes of Gamma, obtained by continuation of the foot map
// along Gamma starting from the affine guess p(s) = p0 + (ell/L) s.  Enforces
// sigma(s + L) = sigma(s) + ell, orthogonality, and tube proximity.
struct Reparametrization {
    double L = 0, ell = 0;
    double sigma0 = 0;
    std::vector<double> sigma;
};

Reparametrization reparametrize(const QuasiCurve& gamma, const CurvatureData& cd,
                                const QuasiCurve& Gamma, double p0, double tol = 1e-12);

// Discrepancy density 1 - f(|Gamma - gamma(sigma)|^2) gamma'(sigma).Gamma',
// integrated over one period of Gamma.  Nonnegative for arc-length curves.
double F_functional(const QuasiCurve& Gamma, const QuasiCurve& gamma, const Reparametrization& rep,
                    double r);

// Upper bound for the infimum of F over reparametrizations: scan the anchor
// over sigma0_scan shifts, keep admissible projections, refine around the
// best.  value = +infinity when no scanned anchor admits a projection (the
// curves are farther apart than the tube geometry allows).
struct FminResult {
    double value = 0;
    Reparametrization rep;
};

FminResult F_min(const QuasiCurve& Gamma, const QuasiCurve& gamma, double r,
                 int sigma0_scan = 64);

// Parametric distance upper bound min_c sup_j |Gamma(s_j) - gamma(ell s_j/L + c)|
// (+infinity when the pitches differ), and a sampled two-sided Hausdorff
// distance with per-node golden-section polish.
double d_parametric_upper(const QuasiCurve& Gamma, const QuasiCurve& gamma, int scan = 256);
double d_hausdorff(const QuasiCurve& Gamma, const QuasiCurve& gamma);

// The comparison inequalities relating sup distance, F, tangent defects, and
// parameter defects, evaluated with their exact constants.  `applicable`
// records whether the hypotheses of the corresponding statement hold.
struct InequalityCheck {
    std::string name;
    bool applicable = false;
    double lhs = 0, rhs = 0;
};

struct InequalityReport {
    std::vector<InequalityCheck> checks;
    double sup_dist = 0; // sup |Gamma - gamma(sigma)|
    double F_value = 0;
    double r = 0;
    int violations(double slack = 1e-8) const;
};

InequalityReport inequality_suite(const QuasiCurve& Gamma, const QuasiCurve& gamma,
                                  const Reparametrization& rep, double r);

} // namespace flab::disc
