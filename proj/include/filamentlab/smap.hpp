#pragma once

#include <cstddef>
#include <vector>

#include "filamentlab/quasi_curve.hpp"
#include "filamentlab/sphere_field.hpp"

namespace flab::smap {

// d/dt u = d/ds (u x d/ds u) on the sphere-valued loop u, discretized
// pseudospectrally in s and advanced with classical RK4.  States are
// renormalized to the sphere after each full step; the renormalization
// displacement is required to stay below 1e-6 per step.
std::vector<Vec3> rhs(const SphereField& u);

struct StepControl {
    double c_cfl = 0.25; // dt <= c_cfl (ell/N)^2
    double max_renorm = 1e-6;
};

SphereField step(const SphereField& u, double dt, const StepControl& ctrl = {});

struct Trajectory {
    std::vector<double> times;       // saved instants, times[0] = 0
    std::vector<SphereField> states; // u at the saved instants
    std::vector<Vec3> c_w;           // base-point correction at saved instants
    double dt = 0;
    int save_every = 0;
};

// Integrates to t_end (a near-multiple of dt), saving every save_every steps
// plus the final state, and fills in the base-point correction.
Trajectory evolve(const SphereField& u0, double t_end, double dt, int save_every = 10,
                  const StepControl& ctrl = {});

struct InvariantReport {
    std::vector<double> energy;   // int |u_s|^2
    std::vector<double> second;   // int |u_t|^2 + |u_ss|^2 - (3/2)|u_s|^4
    double h2_bound = 0;          // 4 ||u0_ss||^2 + 2 ||u0_s||^6 dominates ||u_ss(t)||^2
    std::vector<double> h2_value; // ||u_ss(t)||^2 against the bound
};

InvariantReport invariants(const Trajectory& traj);

// c_w(t) = (1/ell) int_0^ell (s - ell)(u(t) - u(0)) ds
//        + (1/ell) int_0^t int_0^ell u x u_s ds dtau,
// with the time integral a composite trapezoid over the saved states.  The
// s-integral with the linear weight is evaluated exactly in Fourier space.
std::vector<Vec3> base_point_correction(const Trajectory& traj);

// gamma_w(t) = antiderivative of u(t) anchored at c_w(t); for an exact
// solution this reproduces the moving filament up to the scheme error.
std::vector<QuasiCurve> reconstruct_binormal(const Trajectory& traj);

} // namespace flab::smap
