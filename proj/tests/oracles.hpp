#pragma once

// Slow, independent reference implementations used only by the tests:
// adaptive quadrature, Legendre-form elliptic integrals, amplitude inversion,
// and brute-force geometric searches. Nothing here touches the library's own
// AGM/Carlson/Landen code paths.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "filamentlab/quasi_curve.hpp"
#include "filamentlab/vec3.hpp"

namespace oracle {

// Adaptive Simpson with the classic 15x error estimate. Slow and simple on
// purpose; tolerances below 1e-13 are met for the smooth integrands used here.
inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                          double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-14) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Legendre forms. k is the modulus (not m = k^2).
inline double K(double k) {
    return integrate([k](double t) { return 1.0 / std::sqrt(1.0 - k * k * std::sin(t) * std::sin(t)); },
                     0.0, M_PI / 2.0);
}

inline double E(double k) {
    return integrate([k](double t) { return std::sqrt(1.0 - k * k * std::sin(t) * std::sin(t)); }, 0.0,
                     M_PI / 2.0);
}

inline double Pi(double n, double k) {
    return integrate(
        [n, k](double t) {
            double s2 = std::sin(t) * std::sin(t);
            return 1.0 / ((1.0 - n * s2) * std::sqrt(1.0 - k * k * s2));
        },
        0.0, M_PI / 2.0);
}

// Incomplete first kind in amplitude form, F(phi | k).
inline double F_amp(double phi, double k) {
    return integrate([k](double t) { return 1.0 / std::sqrt(1.0 - k * k * std::sin(t) * std::sin(t)); },
                     0.0, phi);
}

// Amplitude am(u, k) for u in [0, K(k)]: bisection on the increasing F_amp.
inline double amplitude(double u, double k) {
    if (u < 0.0) throw std::invalid_argument("oracle: amplitude wants u >= 0");
    double lo = 0.0, hi = M_PI / 2.0;
    for (int i = 0; i < 90; ++i) {
        double mid = 0.5 * (lo + hi);
        (F_amp(mid, k) < u ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// E(u | k) and Pi(u | n, k) for u in [0, K(k)], via the amplitude substitution.
inline double E_inc(double u, double k) {
    double phi = amplitude(u, k);
    return integrate([k](double t) { return std::sqrt(1.0 - k * k * std::sin(t) * std::sin(t)); }, 0.0,
                     phi);
}

inline double Pi_inc(double u, double n, double k) {
    double phi = amplitude(u, k);
    return integrate(
        [n, k](double t) {
            double s2 = std::sin(t) * std::sin(t);
            return 1.0 / ((1.0 - n * s2) * std::sqrt(1.0 - k * k * s2));
        },
        0.0, phi);
}

struct Jacobi {
    double sn, cn, dn;
};

// sn/cn/dn for u in [0, K(k)] by inverting the amplitude.
inline Jacobi jacobi(double u, double k) {
    double phi = amplitude(u, k);
    double s = std::sin(phi);
    return {s, std::cos(phi), std::sqrt(1.0 - k * k * s * s)};
}

// Brute-force closest-parameter search on a curve: dense scan of [lo, hi].
inline double grid_project(const flab::QuasiCurve& g, const flab::Vec3& x, double lo, double hi,
                           int n) {
    double best_s = lo, best_d = 1e300;
    for (int i = 0; i <= n; ++i) {
        double s = lo + (hi - lo) * double(i) / double(n);
        double d = flab::norm2(g.eval(s) - x);
        if (d < best_d) {
            best_d = d;
            best_s = s;
        }
    }
    return best_s;
}

} // namespace oracle
