#include "filamentlab/kida.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "filamentlab/elliptic.hpp"

namespace flab::kida {
namespace {

constexpr double kClosureTol = 1e-8;
constexpr double kArcTol = 1e-6;

void validate_roots(double alpha, double beta, double delta, int m) {
    if (!(beta > 0.0) || !(beta <= alpha))
        throw std::domain_error("kida: need 0 < beta <= alpha");
    if (!(delta > 0.0)) throw std::domain_error("kida: need delta > 0");
    if (m < 2) throw std::domain_error("kida: closure index m must be >= 2");
}

// theta'(s) = V/2 + (C - A V Omega / 2)/(Omega R); the closed form of its
// integral carries this prefactor on the third-kind integral.
double theta_coefficient(const KidaParams& p) {
    return (2.0 * p.C - p.A * p.V * p.Omega) /
           (p.alpha * std::sqrt(p.alpha + p.delta) * p.Omega * p.Omega);
}

double radial_wavenumber(const KidaParams& p) {
    return 0.5 * std::sqrt(p.alpha + p.delta) * std::abs(p.Omega);
}

KidaParams unmirrored(KidaParams p) {
    p.Omega = -p.Omega;
    p.C = -p.C;
    p.mirrored = false;
    return p;
}

struct Profile {
    Vec3 point;
    Vec3 tangent;
};

// Profile curve in cylindrical form: R = alpha + (beta - alpha) sn^2,
// z' = (Omega/2)(A - R), theta' = V/2 + (C - A V Omega/2)/(Omega R).
Profile eval_profile(const KidaParams& p, double sigma) {
    double cu = radial_wavenumber(p);
    double u = cu * sigma;
    auto [sn, cn, dn] = ell::jacobi_sn_cn_dn(u, p.k);
    double R = p.alpha + (p.beta - p.alpha) * sn * sn;
    double z = p.z0 + 0.5 * p.Omega * (p.A + p.delta) * sigma -
               std::sqrt(p.alpha + p.delta) * ell::incomplete_E(u, p.k);
    double n_char = (p.alpha - p.beta) / p.alpha;
    double theta = p.theta0 + 0.5 * p.V * sigma +
                   theta_coefficient(p) * ell::incomplete_Pi(u, n_char, p.k);

    double rt = std::sqrt(R);
    double ct = std::cos(theta), st = std::sin(theta);
    double Rp = 2.0 * (p.beta - p.alpha) * sn * cn * dn * cu;
    double zp = 0.5 * p.Omega * (p.A - R);
    double thp = 0.5 * p.V + (p.C - 0.5 * p.A * p.V * p.Omega) / (p.Omega * R);
    Vec3 point{rt * ct, rt * st, z};
    Vec3 tangent{0.5 * Rp / rt * ct - rt * st * thp, 0.5 * Rp / rt * st + rt * ct * thp, zp};
    return {point, tangent};
}

} // namespace

double g_function(double alpha, double beta, double delta, int m) {
    validate_roots(alpha, beta, delta, m);
    double k = std::sqrt((alpha - beta) / (alpha + delta));
    double n_char = (alpha - beta) / alpha;
    double K = ell::complete_K(k);
    double Pic = ell::complete_Pi(n_char, k);
    double W = 2.0 * M_PI / m - 2.0 * std::sqrt(beta * delta / (alpha * (alpha + delta))) * Pic;
    double P = W * std::sqrt(alpha + delta) / (2.0 * K);
    double A = 0.5 * (alpha + beta - delta + P * P);
    return A * A + 2.0 * std::sqrt(alpha * beta * delta) * P +
           (alpha * delta + beta * delta - alpha * beta);
}

double g_one_parameter(double eps, int m) {
    if (!(eps >= 0.0) || eps >= 1.0)
        throw std::domain_error("kida: one-parameter slice needs 0 <= eps < 1");
    if (m < 2) throw std::domain_error("kida: closure index m must be >= 2");
    double D = double(m) * m - 1.0;
    double k = std::sqrt(eps * D) / m;
    double K = ell::complete_K(k);
    double Pic = ell::complete_Pi(eps, k);
    double Q = (M_PI - std::sqrt(1.0 - eps) * Pic) / K;
    double Q21 = Q * Q - 1.0;
    return 0.25 * eps * eps + (2.0 - eps) * Q21 / (2.0 * D) + Q21 * Q21 / (4.0 * D * D) +
           (2.0 * std::sqrt(1.0 - eps) * Q + 2.0 - eps) / D;
}

KidaParams derive_params(double alpha, double beta, double delta, int m) {
    validate_roots(alpha, beta, delta, m);
    KidaParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.delta = delta;
    p.m = m;
    p.k = std::sqrt((alpha - beta) / (alpha + delta));

    double n_char = (alpha - beta) / alpha;
    double K = ell::complete_K(p.k);
    double Pic = ell::complete_Pi(n_char, p.k);
    double W = 2.0 * M_PI / m - 2.0 * std::sqrt(beta * delta / (alpha * (alpha + delta))) * Pic;
    double P = W * std::sqrt(alpha + delta) / (2.0 * K); // V / Omega
    p.A = 0.5 * (alpha + beta - delta + P * P);
    double g = p.A * p.A + 2.0 * std::sqrt(alpha * beta * delta) * P +
               (alpha * delta + beta * delta - alpha * beta);
    if (!(g > 0.0))
        throw std::domain_error("kida: non-positive g = " + std::to_string(g) +
                                ", no rotation rate for these roots");
    p.Omega = 2.0 / std::sqrt(g);
    p.V = P * p.Omega;
    p.C = 0.5 * p.A * p.V * p.Omega + 0.5 * p.Omega * p.Omega * std::sqrt(alpha * beta * delta);
    p.T_R = 4.0 * K / (std::sqrt(alpha + delta) * p.Omega);
    p.ell = m * p.T_R;

    double dtheta = 0.5 * p.V * p.T_R + theta_coefficient(p) * 2.0 * Pic;
    double closure = dtheta - 2.0 * M_PI / m;
    if (std::abs(closure) > kClosureTol)
        throw std::domain_error("kida: closure residual " + std::to_string(closure) +
                                " exceeds tolerance, profile does not close after " +
                                std::to_string(m) + " radial periods");
    return p;
}

Vec3 eval_solution(const KidaParams& p, double s, double t) {
    if (p.mirrored) {
        Vec3 q = eval_solution(unmirrored(p), s, -t);
        return {q.x, q.y, -q.z};
    }
    Profile pr = eval_profile(p, s - p.C * t);
    return rotate_z(pr.point, p.Omega * t) + Vec3{0, 0, p.V * t};
}

Vec3 eval_tangent(const KidaParams& p, double s, double t) {
    if (p.mirrored) {
        Vec3 q = eval_tangent(unmirrored(p), s, -t);
        return {q.x, q.y, -q.z};
    }
    Profile pr = eval_profile(p, s - p.C * t);
    return rotate_z(pr.tangent, p.Omega * t);
}

Vec3 eval_velocity(const KidaParams& p, double s, double t) {
    Vec3 gamma = eval_solution(p, s, t);
    Vec3 tangent = eval_tangent(p, s, t);
    return tangent * (-p.C) + cross(Vec3{0, 0, p.Omega}, gamma) + Vec3{0, 0, p.V};
}

QuasiCurve to_quasicurve(const KidaParams& p, double t, std::size_t N) {
    double dz = 0.5 * std::abs(p.Omega) * (p.A + p.delta) * p.T_R -
                2.0 * std::sqrt(p.alpha + p.delta) * ell::complete_E(p.k);
    if (p.mirrored) dz = -dz;
    Vec3 pitch{0, 0, p.m * dz};

    std::vector<Vec3> periodic(N);
    for (std::size_t j = 0; j < N; ++j) {
        double s = p.ell * double(j) / double(N);
        periodic[j] = eval_solution(p, s, t) - pitch * (s / p.ell);
    }
    QuasiCurve curve(pitch, p.ell, std::move(periodic));
    double dev = curve.arc_length_deviation();
    if (dev > kArcTol)
        throw std::runtime_error("kida: sampled tangent deviates from unit length by " +
                                 std::to_string(dev) + "; increase N");
    return curve;
}

KidaParams rescale_to_period(const KidaParams& p, double new_ell) {
    if (!(new_ell > 0.0)) throw std::domain_error("kida: rescale target period must be > 0");
    double lam = new_ell / p.ell;
    double q = lam * lam;
    KidaParams r = p;
    r.alpha *= q;
    r.beta *= q;
    r.delta *= q;
    r.A *= q;
    r.Omega /= q;
    r.V /= lam;
    r.C /= lam;
    r.T_R *= lam;
    r.ell = new_ell;
    r.z0 *= lam;
    return r;
}

KidaParams illposed_family(double sigma0, int m) {
    double eps = std::abs(sigma0) * std::pow(double(m), -1.5);
    if (!(eps < 1.0))
        throw std::domain_error("kida: |sigma0| m^{-3/2} must stay below 1");
    double D = double(m) * m - 1.0;
    KidaParams p = derive_params(1.0, 1.0 - eps, 1.0 / D, m);
    if (sigma0 < 0.0) {
        // z-reflection + time reversal maps the solution to one with the
        // same radius profile and (Omega, C) -> (-Omega, -C).
        p.Omega = -p.Omega;
        p.C = -p.C;
        p.mirrored = true;
    }
    return p;
}

double drift(const KidaParams& p) { return p.Omega - p.C; }

QuasiCurve simple_helix(double eps, double pitch_p, std::size_t N) {
    if (!(eps > 0.0)) throw std::domain_error("kida: helix radius eps must be > 0");
    double f = 1.0 / std::sqrt(eps * eps + pitch_p * pitch_p);
    double ell = 2.0 * M_PI / f;
    Vec3 pitch{2.0 * M_PI * pitch_p, 0, 0};
    std::vector<Vec3> periodic(N);
    for (std::size_t j = 0; j < N; ++j) {
        double sb = 2.0 * M_PI * double(j) / double(N); // = f * s_j
        periodic[j] = Vec3{0, eps * std::cos(sb), eps * std::sin(sb)};
    }
    return QuasiCurve(pitch, ell, std::move(periodic));
}

HelixMotion helix_motion(double eps, double pitch_p) {
    double w2 = eps * eps + pitch_p * pitch_p;
    return {1.0 / std::sqrt(w2), pitch_p / w2, eps * eps / (w2 * std::sqrt(w2))};
}

double helix_p_for_m(double sigma0, int m) {
    if (m < 1) throw std::domain_error("kida: helix family needs m >= 1");
    double target = 1.0 / (double(m) * m);
    double p = 1.0 / m;
    for (int it = 0; it < 50; ++it) {
        double f = sigma0 * p * p * p + p * p - target;
        double fp = 3.0 * sigma0 * p * p + 2.0 * p;
        double step = f / fp;
        p -= step;
        if (std::abs(f) < 1e-14 && std::abs(step) < 1e-14) return p;
    }
    throw std::runtime_error("kida: helix pitch solve did not converge");
}

} // namespace flab::kida
