#include "filamentlab/sphere_field.hpp"

#include <cmath>
#include <stdexcept>

namespace flab {

SphereField::SphereField(std::vector<Vec3> samples, double period)
    : samples_(std::move(samples)), period_(period) {
    if (!is_pow2(samples_.size())) throw std::invalid_argument("SphereField: N must be a power of two");
    if (!(period_ > 0.0)) throw std::invalid_argument("SphereField: period must be positive");
    for (const auto& v : samples_) {
        if (std::abs(norm(v) - 1.0) > 1e-12)
            throw std::invalid_argument("SphereField: sample departs the unit sphere beyond 1e-12");
    }
}

SphereField SphereField::renormalized(std::vector<Vec3> samples, double period) {
    for (auto& v : samples) {
        const double n = norm(v);
        if (!(n > 0.0) || !std::isfinite(n))
            throw std::domain_error("SphereField: cannot renormalize zero/non-finite sample");
        v /= n;
    }
    return SphereField(std::move(samples), period);
}

SphereField SphereField::circle(std::size_t n) {
    std::vector<Vec3> s(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double t = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(n);
        s[j] = {std::cos(t), std::sin(t), 0.0};
    }
    return SphereField(std::move(s), 2.0 * M_PI);
}

SphereField SphereField::constant(std::size_t n, const Vec3& dir, double period) {
    return SphereField(std::vector<Vec3>(n, normalized(dir)), period);
}

double SphereField::max_norm_deviation() const {
    double m = 0.0;
    for (const auto& v : samples_) m = std::max(m, std::abs(norm(v) - 1.0));
    return m;
}

Vec3 pitch_of(const SphereField& u) { return quadrature(u.samples(), u.period()); }

} // namespace flab
