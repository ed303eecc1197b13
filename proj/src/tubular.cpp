#include "filamentlab/tubular.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace flab::tube {

TubularField::TubularField(CurveProvider provider, double r)
    : provider_(std::move(provider)), r_(r) {
    if (!(r > 0.0)) throw std::invalid_argument("tubular: radius must be positive");
    const auto& [curve, cd] = entry(0.0);
    if (std::isfinite(cd.r_gamma) && r > cd.r_gamma / 8.0 * (1.0 + 1e-12))
        throw std::invalid_argument("tubular: radius exceeds r_gamma/8, feet are not unique");
    (void)curve;
}

const std::pair<QuasiCurve, disc::CurvatureData>& TubularField::entry(double t) const {
    auto it = cache_.find(t);
    if (it == cache_.end()) {
        QuasiCurve c = provider_(t);
        disc::CurvatureData cd = disc::curvature_data(c);
        it = cache_.emplace(t, std::pair{std::move(c), cd}).first;
    }
    return it->second;
}

const QuasiCurve& TubularField::frame(double t) const { return entry(t).first; }
const disc::CurvatureData& TubularField::frame_curvature(double t) const { return entry(t).second; }

Vec3 TubularField::eval(const Vec3& x, double t) const {
    const auto& [curve, cd] = entry(t);
    const std::size_t n = curve.size();

    double best = std::numeric_limits<double>::infinity();
    std::size_t jbest = 0;
    for (std::size_t j = 0; j < n; ++j) {
        double d = norm2(x - curve.node_point(j));
        if (d < best) {
            best = d;
            jbest = j;
        }
    }
    best = std::sqrt(best);

    // Node spacing is at most r_gamma/8 (resolution guard), so a point whose
    // nearest node is beyond 0.2 r_gamma is certainly outside any admissible
    // tube (r <= r_gamma/8) and the field vanishes there.
    double rg = cd.r_gamma;
    double far = std::isfinite(rg) ? 0.2 * rg : 0.25 * curve.period();
    if (best >= far) return {0, 0, 0};

    double zeta = disc::project(curve, cd, curve.node(jbest), x, 1e-12,
                                std::isfinite(rg) ? 0.25 * rg : 0.0);
    Vec3 jet[2];
    curve.eval_jet(zeta, jet, 1);
    double d2 = norm2(x - jet[0]);
    if (d2 >= r_ * r_) return {0, 0, 0};
    return jet[1] * (1.0 - d2 / (r_ * r_));
}

Vec3 TubularField::time_derivative(const Vec3& x, double t, double h) const {
    auto central = [&](double step) {
        return (eval(x, t + step) - eval(x, t - step)) / (2.0 * step);
    };
    Vec3 full = central(h), half = central(0.5 * h);
    return (half * 4.0 - full) / 3.0;
}

Vec3 TubularField::curl(const Vec3& x, double t, double h) const {
    // One Richardson level over the central-difference curl.
    auto curl_h = [&](double step) {
        Vec3 d[3];
        for (int axis = 0; axis < 3; ++axis) {
            Vec3 e{0, 0, 0};
            e[axis] = step;
            d[axis] = (eval(x + e, t) - eval(x - e, t)) / (2.0 * step);
        }
        // (curl X)_i = eps_{ijk} dX_k/dx_j with d[j][k] = dX_k/dx_j.
        return Vec3{d[1].z - d[2].y, d[2].x - d[0].z, d[0].y - d[1].x};
    };
    Vec3 full = curl_h(h), half = curl_h(0.5 * h);
    return (half * 4.0 - full) / 3.0;
}

double TubularField::dcurl_vv(const Vec3& x, double t, const Vec3& v, double h) const {
    // The inner curl carries O(eps/h) roundoff, so the outer directional
    // difference needs a step well above h or the quotient is pure noise;
    // the field varies on the tube scale r_, which keeps the truncation small.
    double outer = std::max(h, 0.01 * r_);
    auto along = [&](double step) {
        double g1 = dot(curl(x + v * step, t, h), v);
        double g2 = dot(curl(x - v * step, t, h), v);
        return (g1 - g2) / (2.0 * step);
    };
    double full = along(outer), half = along(0.5 * outer);
    return (4.0 * half - full) / 3.0;
}

} // namespace flab::tube
