#pragma once

#include <cstddef>
#include <vector>

#include "filamentlab/quasi_curve.hpp"
#include "filamentlab/vec3.hpp"

namespace flab::kida {

// A rigid-motion solution of the binormal flow: a profile curve q (squared
// cylindrical radius R(s), angle theta(s), height z(s)) carried by
//   gamma(t,s) = rotate_z(q(s - C t), Omega t) + V t e3.
// The roots alpha >= beta > 0 > -delta of the radial cubic together with the
// closure index m >= 2 determine everything else.  `mirrored` marks the image
// of a solution under z-reflection combined with time reversal, which is again
// a solution with (Omega, C) -> (-Omega, -C) and the same profile radius.
struct KidaParams {
    double alpha = 0, beta = 0, delta = 0;
    int m = 0;
    double k = 0;      // elliptic modulus, k^2 = (alpha-beta)/(alpha+delta)
    double A = 0;      // radial offset: z' = (Omega/2)(A - R)
    double Omega = 0;  // rotation rate about e3
    double V = 0;      // vertical translation speed
    double C = 0;      // parameter slip speed
    double T_R = 0;    // period of R along the profile
    double ell = 0;    // arc-length period, ell = m T_R
    double theta0 = 0, z0 = 0;
    bool mirrored = false;
};

// Closes the profile after m radial periods (total angle 2 pi).  Throws if
// the roots are disordered, g <= 0, or the closure residual exceeds 1e-8.
KidaParams derive_params(double alpha, double beta, double delta, int m);

// The quantity g with 4/g = Omega^2, as assembled in derive_params.
double g_function(double alpha, double beta, double delta, int m);
// Same quantity on the slice alpha = 1, beta = 1 - eps, delta = 1/(m^2-1),
// via an algebraically rearranged form (used to validate the general one).
double g_one_parameter(double eps, int m);

// Position, arc-length tangent, and velocity of the moving filament.
Vec3 eval_solution(const KidaParams& p, double s, double t);
Vec3 eval_tangent(const KidaParams& p, double s, double t);
// d/dt gamma = -C d/ds gamma + Omega e3 x gamma + V e3 (used as an oracle).
Vec3 eval_velocity(const KidaParams& p, double s, double t);

// Samples gamma(t, .) on N nodes of [0, ell); pitch (0, 0, m dz) per period.
// Throws if the sampled tangent deviates from unit length by more than 1e-6.
QuasiCurve to_quasicurve(const KidaParams& p, double t, std::size_t N);

// Homothety gamma -> lambda gamma(t/lambda^2, s/lambda): same shape with
// period lambda * ell.  Roots scale by lambda^2, speeds by 1/lambda^2 and
// 1/lambda.  Used to compare members of a family at a common period.
KidaParams rescale_to_period(const KidaParams& p, double new_ell);

// Near-degenerate family beta = 1 - sigma0 m^{-3/2}, alpha = 1,
// delta = 1/(m^2 - 1).  Negative sigma0 selects the mirrored solution of
// |sigma0| so that the drift below is exactly odd in sigma0.
KidaParams illposed_family(double sigma0, int m);

// Angular-minus-slip speed gap Omega - C of a family member.
double drift(const KidaParams& p);

// Arc-length helix gamma(s) = (p sb, eps cos sb, eps sin sb), sb = s/sqrt(eps^2+p^2),
// sampled over one turn (period 2 pi sqrt(eps^2+p^2), pitch 2 pi p e1).
QuasiCurve simple_helix(double eps, double pitch_p, std::size_t N);
// Under the binormal flow the helix translates along itself and e1:
//   d/dt gamma = -slip d/ds gamma + base_speed-normalized e1 term; exposed
//   here are the x-translation speed, the tangential slip, and the speed of
//   the base point's circular projection.
struct HelixMotion {
    double translation_speed; // 1/sqrt(eps^2+p^2) along e1
    double slip;              // p/(eps^2+p^2)
    double base_speed;        // eps^2/(eps^2+p^2)^{3/2}
};
HelixMotion helix_motion(double eps, double pitch_p);
// Root p(m) of sigma0 p^3 + p^2 = 1/m^2 (Newton from 1/m).
double helix_p_for_m(double sigma0, int m);

} // namespace flab::kida
