#pragma once

#include <cstdint>
#include <vector>

#include "filamentlab/kida.hpp"
#include "filamentlab/smap.hpp"
#include "filamentlab/sphere_field.hpp"
#include "filamentlab/tubular.hpp"

namespace flab::est {

// ---- pointwise tube estimate ----------------------------------------------
// |d/dt X . V - D(curl X):(V (x) V)| <= K (1 - X.V) at admissible points
// x0 = gamma(t0,s0) + rho n (n normal to the tangent, rho |gamma''(s0)| < 1/2),
// with the local constant K = 8/r^2 + 32/r0^2 + (2 + 32 r/r0) Sigma0,
// r0 = 1/|gamma''(t0,s0)|, Sigma0 = |gamma'''(t0,s0)|.
struct PointwiseReport {
    int requested = 0;
    int admissible = 0;
    int violations = 0;
    double max_excess = -1e300; // max of lhs - rhs over admissible samples
    double tolerance = 0;    // additive slack used: 1e-6 * K per sample
    double r = 0;
};

PointwiseReport pointwise_estimate_check(const kida::KidaParams& gamma, double t0, double r,
                                         int samples, std::uint64_t seed, std::size_t N = 512);

// ---- weak formulation residual ---------------------------------------------
// d/dt int (X o Gamma).Gamma_s ds  vs  int (dX/dt o Gamma).Gamma_s
//                                       - (D curl X o Gamma):(Gamma_s (x) Gamma_s) ds.
// LHS by central differences across saved frames (interior times only).
struct WeakformReport {
    std::vector<double> times;    // interior saved instants
    std::vector<double> lhs, rhs, residual;
    double max_residual = 0;
    double save_interval = 0;
    bool tube_exit = false;       // some Gamma node left the d < r region
};

WeakformReport weak_formulation_residual(const std::vector<QuasiCurve>& frames,
                                         const std::vector<double>& times,
                                         const tube::TubularField& X);

// ---- Gronwall stability -----------------------------------------------------
struct GronwallReport {
    double r = 0, r_gamma = 0, sup_d3 = 0, L = 0;
    double K = 0, F_r = 0, T_r = 0, F0 = 0;
    std::vector<double> times, F_values, bound_values, d_P;
    std::vector<bool> verdict;            // F(t) <= e^{Kt} F(0) (1 + 1e-3)
    bool all_ok = false;
    double truncated_at = -1;             // tube-exit time, -1 if none
};

GronwallReport gronwall_experiment(const SphereField& u0, const SphereField& v0, double r,
                                   double t_end, double dt, int save_every = 10);

// ---- weak-strong ratio ------------------------------------------------------
struct WeakStrongReport {
    std::vector<double> times, ratio, sigma_t; // sigma(t) := sigma(t, 0)
    double empirical_C = 0;
    double diff0 = 0;           // ||v0 - u0||_2 (report 0 ratios when 0)
    double mean_shift = 0;      // <sigma(s) - s> at the final frame
};

WeakStrongReport weak_strong_experiment(const SphereField& u0, const SphereField& v0, double t_end,
                                        double dt, int save_every = 10);

// ---- drift of the near-degenerate family ------------------------------------
struct DriftReport {
    double sigma_tilde = 0;
    std::vector<int> m_values;
    std::vector<double> drift_values;          // Omega_m - C_m
    std::vector<double> drift_rescaled;        // after homothety to period 2 pi
    double limit = 0;                          // reference value sigma_tilde^2/4
    // Optional PDE cross-check at one moderate m: the evolved tangent field's
    // Fourier phases at wavenumbers 1 and 1+m recover Omega and C.
    bool pde_check_ran = false;
    int pde_check_m = 0;
    double pde_drift_measured = 0;
    double pde_drift_exact = 0;
};

DriftReport illposed_experiment(double sigma_tilde, const std::vector<int>& m_values,
                                bool with_pde_check = false);

// ---- flow-map Lipschitz ratios ----------------------------------------------
struct LipschitzReport {
    std::vector<double> sizes;
    std::vector<double> ratio_h1;    // max over time of H1-ratio, per size
    std::vector<double> ratio_h2;
    double empirical_C_h1 = 0, empirical_C_h2 = 0;
};

LipschitzReport flow_lipschitz_experiment(const SphereField& u0,
                                          const std::vector<double>& sizes, double t_end,
                                          double dt, std::uint64_t seed = 7);

// ---- shared helper -----------------------------------------------------------
// Smooth random sphere-valued perturbation of u with zero pitch and L2
// distance approximately `amplitude` (low Fourier modes, seeded).
SphereField perturbed_field(const SphereField& u, double amplitude, std::uint64_t seed);

} // namespace flab::est
