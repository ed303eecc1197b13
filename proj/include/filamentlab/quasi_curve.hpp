#pragma once

#include "filamentlab/sphere_field.hpp"
#include "filamentlab/spectral.hpp"
#include "filamentlab/vec3.hpp"

#include <cstddef>
#include <vector>

namespace flab {

// Quasiperiodic curve Gamma(s) = (a/L)s + P(s) with P periodic of period L,
// stored by its node samples P(s_j). Gamma(s+L) = Gamma(s) + a by construction.
class QuasiCurve {
  public:
    QuasiCurve() = default;
    QuasiCurve(Vec3 pitch, double period, std::vector<Vec3> periodic_part);

    std::size_t size() const { return periodic_part_.size(); }
    double period() const { return period_; }
    const Vec3& pitch() const { return pitch_; }
    const std::vector<Vec3>& periodic_part() const { return periodic_part_; }

    double node(std::size_t j) const {
        return period_ * static_cast<double>(j) / static_cast<double>(periodic_part_.size());
    }
    // Gamma(s_j) without interpolation error.
    Vec3 node_point(std::size_t j) const {
        return pitch_ * (node(j) / period_) + periodic_part_[j];
    }

    // order 0..4; order 0 includes the linear part, order 1 adds a/L.
    Vec3 eval(double s, int order = 0) const;
    void eval_jet(double s, Vec3* out, int max_order) const;

    // max_j | |Gamma'(s_j)| - 1 |
    double arc_length_deviation() const;

    // Node samples of Gamma' as a field (unit vectors if arc-length).
    std::vector<Vec3> derivative_samples(int order = 1) const;

    // Same geometric curve, sampled on a 2x finer grid (trigonometric refinement).
    QuasiCurve refined() const;

  private:
    Vec3 pitch_{};
    double period_ = 0.0;
    std::vector<Vec3> periodic_part_;
    TrigInterp3 interp_;
};

// Curve primitive: Gamma(s) = base + int_0^s u, decomposed into pitch part
// (a = int u over the period) and periodic remainder.
QuasiCurve integrate_tangent(const SphereField& u, const Vec3& base);

inline Vec3 eval_curve(const QuasiCurve& c, double s) { return c.eval(s, 0); }

} // namespace flab
