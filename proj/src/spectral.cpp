#include "filamentlab/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace flab {

namespace {

std::vector<double> wavenumbers(std::size_t n, double period) {
    std::vector<double> k(n);
    const double base = 2.0 * M_PI / period;
    for (std::size_t j = 0; j < n; ++j) {
        const double nu = (j <= n / 2) ? static_cast<double>(j)
                                       : static_cast<double>(j) - static_cast<double>(n);
        k[j] = base * nu;
    }
    return k;
}

// (ik)^order with the Nyquist mode dropped for odd orders; conjugate-symmetric,
// so packing two real fields into one complex transform stays exact.
std::vector<cplx> diff_multiplier(std::size_t n, double period, int order) {
    if (order < 1 || order > 4) throw std::invalid_argument("derivative: order must be in 1..4");
    auto k = wavenumbers(n, period);
    std::vector<cplx> mu(n);
    for (std::size_t j = 0; j < n; ++j) {
        cplx m = std::pow(cplx(0.0, k[j]), order);
        if (j == n / 2 && (order % 2) == 1) m = 0.0;
        mu[j] = m;
    }
    return mu;
}

void check_grid(std::size_t n, double period) {
    if (!is_pow2(n)) throw std::invalid_argument("spectral: N must be a power of two");
    if (!(period > 0.0)) throw std::invalid_argument("spectral: period must be positive");
}

} // namespace

SpectralWorkspace::SpectralWorkspace(std::size_t n_, double period_) : n(n_), period(period_) {
    check_grid(n, period);
    k = wavenumbers(n, period);
    (void)fft_plan(n);
}

std::vector<double> derivative(const std::vector<double>& f, int order, double period) {
    const std::size_t n = f.size();
    check_grid(n, period);
    const auto& plan = fft_plan(n);
    const auto mu = diff_multiplier(n, period, order);
    std::vector<cplx> a(f.begin(), f.end());
    plan.forward(a);
    for (std::size_t j = 0; j < n; ++j) a[j] *= mu[j];
    plan.inverse(a);
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = a[j].real();
    return out;
}

std::vector<Vec3> derivative(const std::vector<Vec3>& f, int order, double period) {
    const std::size_t n = f.size();
    check_grid(n, period);
    const auto& plan = fft_plan(n);
    const auto mu = diff_multiplier(n, period, order);
    // x,y packed as one complex signal; valid because mu is conjugate-symmetric.
    std::vector<cplx> xy(n), z(n);
    for (std::size_t j = 0; j < n; ++j) {
        xy[j] = cplx(f[j].x, f[j].y);
        z[j] = cplx(f[j].z, 0.0);
    }
    plan.forward(xy);
    plan.forward(z);
    for (std::size_t j = 0; j < n; ++j) {
        xy[j] *= mu[j];
        z[j] *= mu[j];
    }
    plan.inverse(xy);
    plan.inverse(z);
    std::vector<Vec3> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = {xy[j].real(), xy[j].imag(), z[j].real()};
    return out;
}

namespace {

std::vector<cplx> antider_coeffs(std::vector<cplx> a, std::size_t n, double period) {
    const auto k = wavenumbers(n, period);
    a[0] = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
        if (j == n / 2) {
            a[j] = 0.0; // Nyquist cosine integrates to a sine: zero at every node
        } else {
            a[j] /= cplx(0.0, k[j]);
        }
    }
    return a;
}

} // namespace

std::vector<double> antiderivative_meanfree(const std::vector<double>& f, double period) {
    const std::size_t n = f.size();
    check_grid(n, period);
    const auto& plan = fft_plan(n);
    std::vector<cplx> a(f.begin(), f.end());
    plan.forward(a);
    a = antider_coeffs(std::move(a), n, period);
    plan.inverse(a);
    std::vector<double> out(n);
    const double f0 = a[0].real();
    for (std::size_t j = 0; j < n; ++j) out[j] = a[j].real() - f0;
    return out;
}

std::vector<Vec3> antiderivative_meanfree(const std::vector<Vec3>& f, double period) {
    const std::size_t n = f.size();
    check_grid(n, period);
    const auto& plan = fft_plan(n);
    std::vector<cplx> xy(n), z(n);
    for (std::size_t j = 0; j < n; ++j) {
        xy[j] = cplx(f[j].x, f[j].y);
        z[j] = cplx(f[j].z, 0.0);
    }
    plan.forward(xy);
    plan.forward(z);
    xy = antider_coeffs(std::move(xy), n, period);
    z = antider_coeffs(std::move(z), n, period);
    plan.inverse(xy);
    plan.inverse(z);
    std::vector<Vec3> out(n);
    const Vec3 v0{xy[0].real(), xy[0].imag(), z[0].real()};
    for (std::size_t j = 0; j < n; ++j)
        out[j] = Vec3{xy[j].real(), xy[j].imag(), z[j].real()} - v0;
    return out;
}

double quadrature(const std::vector<double>& f, double period) {
    double s = 0.0;
    for (double v : f) s += v;
    return s * period / static_cast<double>(f.size());
}

Vec3 quadrature(const std::vector<Vec3>& f, double period) {
    Vec3 s{};
    for (const auto& v : f) s += v;
    return s * (period / static_cast<double>(f.size()));
}

double mean(const std::vector<double>& f) { return quadrature(f, 1.0) ; }

Vec3 mean(const std::vector<Vec3>& f) { return quadrature(f, 1.0); }

TrigInterp::TrigInterp(const std::vector<double>& samples, double period)
    : n_(samples.size()), period_(period) {
    check_grid(n_, period_);
    const auto& plan = fft_plan(n_);
    std::vector<cplx> a(samples.begin(), samples.end());
    plan.forward(a);
    c_.resize(n_ / 2 + 1);
    const double inv = 1.0 / static_cast<double>(n_);
    for (std::size_t j = 0; j <= n_ / 2; ++j) c_[j] = a[j] * inv;
}

namespace {

// d^o/ds^o of cos(ks): k^o * {cos,-sin,-cos,sin}[o mod 4](ks)
double nyquist_term(double amp, double k, double s, int order) {
    const double p = amp * std::pow(k, order);
    switch (order & 3) {
    case 0: return p * std::cos(k * s);
    case 1: return -p * std::sin(k * s);
    case 2: return -p * std::cos(k * s);
    default: return p * std::sin(k * s);
    }
}

} // namespace

double TrigInterp::eval(double s, int order) const {
    const double k1 = 2.0 * M_PI / period_;
    const cplx w = std::polar(1.0, k1 * s);
    cplx phasor = w;
    double acc = (order == 0) ? c_[0].real() : 0.0;
    for (std::size_t nu = 1; nu < n_ / 2; ++nu) {
        if ((nu & 63) == 0) phasor = std::polar(1.0, k1 * s * static_cast<double>(nu));
        cplx term = c_[nu] * phasor;
        const cplx ik(0.0, k1 * static_cast<double>(nu));
        for (int o = 0; o < order; ++o) term *= ik;
        acc += 2.0 * term.real();
        phasor *= w;
    }
    acc += nyquist_term(c_[n_ / 2].real(), k1 * static_cast<double>(n_ / 2), s, order);
    return acc;
}

TrigInterp3::TrigInterp3(const std::vector<Vec3>& samples, double period)
    : n_(samples.size()), period_(period) {
    check_grid(n_, period_);
    const auto& plan = fft_plan(n_);
    std::vector<cplx> xy(n_), z(n_);
    for (std::size_t j = 0; j < n_; ++j) {
        xy[j] = cplx(samples[j].x, samples[j].y);
        z[j] = cplx(samples[j].z, 0.0);
    }
    plan.forward(xy);
    plan.forward(z);
    cx_.resize(n_ / 2 + 1);
    cy_.resize(n_ / 2 + 1);
    cz_.resize(n_ / 2 + 1);
    const double inv = 1.0 / static_cast<double>(n_);
    // unpack the two real spectra: X_k = (Z_k + conj(Z_{N-k}))/2, Y_k = (Z_k - conj(Z_{N-k}))/2i
    for (std::size_t j = 0; j <= n_ / 2; ++j) {
        const cplx zk = xy[j];
        const cplx zr = std::conj(xy[(n_ - j) & (n_ - 1)]);
        cx_[j] = 0.5 * (zk + zr) * inv;
        cy_[j] = cplx(0.0, -0.5) * (zk - zr) * inv;
        cz_[j] = z[j] * inv;
    }
}

void TrigInterp3::eval_jet(double s, Vec3* out, int max_order) const {
    const double k1 = 2.0 * M_PI / period_;
    const cplx w = std::polar(1.0, k1 * s);
    cplx phasor = w;
    for (int o = 0; o <= max_order; ++o) out[o] = Vec3{};
    out[0] = Vec3{cx_[0].real(), cy_[0].real(), cz_[0].real()};
    for (std::size_t nu = 1; nu < n_ / 2; ++nu) {
        if ((nu & 63) == 0) phasor = std::polar(1.0, k1 * s * static_cast<double>(nu));
        cplx tx = cx_[nu] * phasor;
        cplx ty = cy_[nu] * phasor;
        cplx tz = cz_[nu] * phasor;
        const cplx ik(0.0, k1 * static_cast<double>(nu));
        for (int o = 0; o <= max_order; ++o) {
            out[o] += Vec3{2.0 * tx.real(), 2.0 * ty.real(), 2.0 * tz.real()};
            if (o < max_order) {
                tx *= ik;
                ty *= ik;
                tz *= ik;
            }
        }
        phasor *= w;
    }
    const double kny = k1 * static_cast<double>(n_ / 2);
    for (int o = 0; o <= max_order; ++o) {
        out[o] += Vec3{nyquist_term(cx_[n_ / 2].real(), kny, s, o),
                       nyquist_term(cy_[n_ / 2].real(), kny, s, o),
                       nyquist_term(cz_[n_ / 2].real(), kny, s, o)};
    }
}

Vec3 TrigInterp3::eval(double s, int order) const {
    Vec3 jet[5];
    eval_jet(s, jet, order);
    return jet[order];
}

} // namespace flab
