#include "filamentlab/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace flab::ell {
namespace {

constexpr double kModulusCap = 1.0 - 1e-10;
constexpr int kAgmMax = 64;

double checked_modulus(double k) {
    if (!(k >= 0.0) || k >= 1.0)
        throw std::domain_error("elliptic: modulus k must lie in [0,1), got " + std::to_string(k));
    return std::min(k, kModulusCap);
}

// Iterates stall a few ulps apart once the quadratic contraction hits
// roundoff, so the stop test must sit above machine epsilon.
constexpr double kAgmTol = 4e-16;

// One AGM descent; returns the scale a_I and fills the cosine sequence c_i
// needed by the Jacobi backward recurrence.  c_0 = k.
int agm_descent(double k, double a[kAgmMax], double c[kAgmMax]) {
    double av = 1.0, bv = std::sqrt(1.0 - k * k), cv = k;
    int i = 0;
    for (;;) {
        a[i] = av;
        c[i] = cv;
        if (std::abs(cv) <= kAgmTol * av || i + 1 == kAgmMax) return i;
        double an = 0.5 * (av + bv);
        cv = 0.5 * (av - bv);
        bv = std::sqrt(av * bv);
        av = an;
        ++i;
    }
}

} // namespace

double complete_K(double k) {
    k = checked_modulus(k);
    double a = 1.0, b = std::sqrt(1.0 - k * k);
    while (std::abs(a - b) > kAgmTol * a) {
        double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    // One implicit half-step: the midpoint is quadratically closer to the limit.
    return M_PI / (a + b);
}

double complete_E(double k) {
    k = checked_modulus(k);
    // E = K (1 - sum 2^{n-1} c_n^2), c_0 = k.
    double a = 1.0, b = std::sqrt(1.0 - k * k);
    double sum = 0.5 * k * k, pw = 0.5;
    while (std::abs(a - b) > kAgmTol * a) {
        double cn = 0.5 * (a - b);
        double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
        pw *= 2.0;
        sum += pw * cn * cn;
    }
    return M_PI / (a + b) * (1.0 - sum);
}

double complete_Pi(double n_char, double k) {
    k = checked_modulus(k);
    if (n_char >= 1.0)
        throw std::domain_error("elliptic: Pi characteristic must be < 1 (pole), got " +
                                std::to_string(n_char));
    double kc2 = 1.0 - k * k;
    double value = carlson_RF(0.0, kc2, 1.0);
    if (n_char != 0.0) value += (n_char / 3.0) * carlson_RJ(0.0, kc2, 1.0, 1.0 - n_char);
    return value;
}

SnCnDn jacobi_sn_cn_dn(double u, double k) {
    k = checked_modulus(k);
    if (k == 0.0) return {std::sin(u), std::cos(u), 1.0};

    // Reduce modulo the full period: sn, cn have period 4K.
    double K4 = 4.0 * complete_K(k);
    u -= K4 * std::floor(u / K4);

    double a[kAgmMax], c[kAgmMax];
    int top = agm_descent(k, a, c);
    double phi = std::ldexp(a[top] * u, top);
    for (int i = top; i >= 1; --i) {
        double s = std::clamp(c[i] / a[i] * std::sin(phi), -1.0, 1.0);
        phi = 0.5 * (phi + std::asin(s));
    }
    double sn = std::sin(phi), cn = std::cos(phi);
    double dn = std::sqrt(std::max(0.0, 1.0 - k * k * sn * sn));
    return {sn, cn, dn};
}

namespace {

// Legendre second/third kind on the fundamental strip u in [0, K], through
// the Carlson forms with sn, cn, dn evaluated at u.
double incomplete_E_base(double u, double k) {
    auto [sn, cn, dn] = jacobi_sn_cn_dn(u, k);
    sn = std::abs(sn);
    double x = cn * cn, y = dn * dn;
    return sn * (carlson_RF(x, y, 1.0) - (k * k / 3.0) * sn * sn * carlson_RD(x, y, 1.0));
}

double incomplete_Pi_base(double u, double n, double k) {
    auto [sn, cn, dn] = jacobi_sn_cn_dn(u, k);
    sn = std::abs(sn);
    double x = cn * cn, y = dn * dn;
    double value = sn * carlson_RF(x, y, 1.0);
    if (n != 0.0) {
        double p = 1.0 - n * sn * sn;
        if (p <= 0.0)
            throw std::domain_error("elliptic: incomplete Pi hit the 1 - n sn^2 pole");
        value += (n / 3.0) * sn * sn * sn * carlson_RJ(x, y, 1.0, p);
    }
    return value;
}

// Both integrands (dn^2 and (1-n sn^2)^{-1}) have quasi-period 2K: the value
// gains one complete integral per half period and is symmetric about K.
template <class Base>
double reduce_quasi_periodic(double u, double K, double full, Base&& base) {
    if (u < 0.0) return -reduce_quasi_periodic(-u, K, full, base);
    double n2 = std::floor(u / (2.0 * K));
    double v = u - 2.0 * K * n2;
    double val = n2 * full;
    if (v <= K)
        val += base(v);
    else
        val += full - base(2.0 * K - v);
    return val;
}

} // namespace

double incomplete_E(double u, double k) {
    k = checked_modulus(k);
    if (k == 0.0) return u;
    double K = complete_K(k), E2 = 2.0 * complete_E(k);
    return reduce_quasi_periodic(u, K, E2, [&](double v) { return incomplete_E_base(v, k); });
}

double incomplete_Pi(double u, double n_char, double k) {
    k = checked_modulus(k);
    if (n_char >= 1.0)
        throw std::domain_error("elliptic: Pi characteristic must be < 1 (pole), got " +
                                std::to_string(n_char));
    if (n_char == 0.0 && k == 0.0) return u;
    double K = complete_K(k), P2 = 2.0 * complete_Pi(n_char, k);
    return reduce_quasi_periodic(u, K, P2,
                                 [&](double v) { return incomplete_Pi_base(v, n_char, k); });
}

// Carlson forms, duplication theorem with fifth-order tails.  The tolerance
// 1.2e-3 puts the truncation error near 1e-18 relative.
namespace {
constexpr double kCarlsonTol = 1.2e-3;
}

double carlson_RF(double x, double y, double z) {
    if (std::min({x, y, z}) < 0.0 || x + y <= 0.0 || x + z <= 0.0 || y + z <= 0.0)
        throw std::domain_error("carlson_RF: arguments must be nonnegative, at most one zero");
    double dx, dy, dz, ave;
    for (;;) {
        double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        double lam = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        ave = (x + y + z) / 3.0;
        dx = (ave - x) / ave;
        dy = (ave - y) / ave;
        dz = (ave - z) / ave;
        if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < kCarlsonTol) break;
    }
    double e2 = dx * dy - dz * dz, e3 = dx * dy * dz;
    return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / std::sqrt(ave);
}

double carlson_RC(double x, double y) {
    if (x < 0.0 || y <= 0.0)
        throw std::domain_error("carlson_RC: needs x >= 0, y > 0");
    double s, ave;
    for (;;) {
        double lam = 2.0 * std::sqrt(x) * std::sqrt(y) + y;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        ave = (x + y + y) / 3.0;
        s = (y - ave) / ave;
        if (std::abs(s) < kCarlsonTol) break;
    }
    return (1.0 + s * s * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * 9.0 / 22.0)))) / std::sqrt(ave);
}

double carlson_RD(double x, double y, double z) {
    if (std::min(x, y) < 0.0 || x + y <= 0.0 || z <= 0.0)
        throw std::domain_error("carlson_RD: needs x,y >= 0 (not both zero), z > 0");
    constexpr double C1 = 3.0 / 14.0, C2 = 1.0 / 6.0, C3 = 9.0 / 22.0, C4 = 3.0 / 26.0;
    constexpr double C5 = 0.25 * C3, C6 = 1.5 * C4;
    double sum = 0.0, fac = 1.0, dx, dy, dz, ave;
    for (;;) {
        double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        double lam = sx * (sy + sz) + sy * sz;
        sum += fac / (sz * (z + lam));
        fac *= 0.25;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        ave = 0.2 * (x + y + 3.0 * z);
        dx = (ave - x) / ave;
        dy = (ave - y) / ave;
        dz = (ave - z) / ave;
        if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < kCarlsonTol) break;
    }
    double ea = dx * dy, eb = dz * dz, ec = ea - eb, ed = ea - 6.0 * eb, ee = ed + ec + ec;
    return 3.0 * sum +
           fac *
               (1.0 + ed * (-C1 + C5 * ed - C6 * dz * ee) +
                dz * (C2 * ee + dz * (-C3 * ec + dz * C4 * ea))) /
               (ave * std::sqrt(ave));
}

double carlson_RJ(double x, double y, double z, double p) {
    if (std::min({x, y, z}) < 0.0 || x + y <= 0.0 || x + z <= 0.0 || y + z <= 0.0 || p <= 0.0)
        throw std::domain_error("carlson_RJ: needs nonnegative x,y,z (at most one zero), p > 0");
    constexpr double C1 = 3.0 / 14.0, C2 = 1.0 / 3.0, C3 = 3.0 / 22.0, C4 = 3.0 / 26.0;
    constexpr double C5 = 0.75 * C3, C6 = 1.5 * C4, C7 = 0.5 * C2, C8 = C3 + C3;
    double sum = 0.0, fac = 1.0, dx, dy, dz, dp, ave;
    for (;;) {
        double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        double lam = sx * (sy + sz) + sy * sz;
        double alpha = p * (sx + sy + sz) + sx * sy * sz;
        alpha *= alpha;
        double beta = p * (p + lam) * (p + lam);
        sum += fac * carlson_RC(alpha, beta);
        fac *= 0.25;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        p = 0.25 * (p + lam);
        ave = 0.2 * (x + y + z + 2.0 * p);
        dx = (ave - x) / ave;
        dy = (ave - y) / ave;
        dz = (ave - z) / ave;
        dp = (ave - p) / ave;
        if (std::max({std::abs(dx), std::abs(dy), std::abs(dz), std::abs(dp)}) < kCarlsonTol)
            break;
    }
    double ea = dx * (dy + dz) + dy * dz, eb = dx * dy * dz, ec = dp * dp;
    double ed = ea - 3.0 * ec, ee = eb + 2.0 * dp * (ea - ec);
    return 3.0 * sum +
           fac *
               (1.0 + ed * (-C1 + C5 * ed - C6 * ee) + eb * (C7 + dp * (-C8 + dp * C4)) +
                dp * ea * (C2 - dp * C3) - C2 * dp * ec) /
               (ave * std::sqrt(ave));
}

} // namespace flab::ell
