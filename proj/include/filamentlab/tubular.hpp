#pragma once

#include <functional>
#include <map>
#include <utility>

#include "filamentlab/discrepancy.hpp"
#include "filamentlab/quasi_curve.hpp"
#include "filamentlab/vec3.hpp"

namespace flab::tube {

// Vector field supported on the radius-r tube around a moving filament:
//   X(x, t) = f(|x - gamma(t, zeta)|^2) gamma'(t, zeta),   zeta the foot of x,
// with the bump f(d^2) = 1 - d^2/r^2 for d < r and 0 outside.  The tube
// radius must not exceed r_gamma/8 so feet are unique.  Frames gamma(t, .)
// come from a caller-supplied provider and are cached per time stamp, since
// the finite-difference stencils revisit the same few instants many times.
class TubularField {
  public:
    using CurveProvider = std::function<QuasiCurve(double)>;

    TubularField(CurveProvider provider, double r);

    Vec3 eval(const Vec3& x, double t) const;

    // d/dt X by central differences with one Richardson extrapolation level.
    Vec3 time_derivative(const Vec3& x, double t, double h = 1e-5) const;
    // curl X by central differences in space, same extrapolation.
    Vec3 curl(const Vec3& x, double t, double h = 1e-5) const;
    // D(curl X) : (v (x) v) = directional derivative of (curl X . v) along v.
    double dcurl_vv(const Vec3& x, double t, const Vec3& v, double h = 1e-5) const;

    double radius() const { return r_; }
    const QuasiCurve& frame(double t) const;
    const disc::CurvatureData& frame_curvature(double t) const;

  private:
    const std::pair<QuasiCurve, disc::CurvatureData>& entry(double t) const;

    CurveProvider provider_;
    double r_;
    mutable std::map<double, std::pair<QuasiCurve, disc::CurvatureData>> cache_;
};

} // namespace flab::tube
