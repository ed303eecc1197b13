#pragma once

#include "filamentlab/spectral.hpp"
#include "filamentlab/vec3.hpp"

#include <cstddef>
#include <vector>

namespace flab {

// Sphere-valued map on the uniform periodic grid s_j = j*period/N.
// Invariants: N power of two; every sample within 1e-12 of unit norm.
class SphereField {
  public:
    SphereField(std::vector<Vec3> samples, double period);

    // Projects nearly-unit samples exactly onto the sphere first.
    static SphereField renormalized(std::vector<Vec3> samples, double period);

    // u*(s) = (cos s, sin s, 0) on [0,2п): the stationary great-circle state.
    static SphereField circle(std::size_t n);

    static SphereField constant(std::size_t n, const Vec3& dir, double period);

    std::size_t size() const { return samples_.size(); }
    double period() const { return period_; }
    const std::vector<Vec3>& samples() const { return samples_; }
    const Vec3& operator[](std::size_t j) const { return samples_[j]; }

    double node(std::size_t j) const {
        return period_ * static_cast<double>(j) / static_cast<double>(samples_.size());
    }

    double max_norm_deviation() const;

  private:
    std::vector<Vec3> samples_;
    double period_;
};

// Trapezoidal (= spectral) quadrature of u over one period; the conserved
// pitch of every curve primitive of u.
Vec3 pitch_of(const SphereField& u);

} // namespace flab
