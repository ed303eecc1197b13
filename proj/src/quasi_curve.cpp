#include "filamentlab/quasi_curve.hpp"

#include <cmath>
#include <stdexcept>

namespace flab {

QuasiCurve::QuasiCurve(Vec3 pitch, double period, std::vector<Vec3> periodic_part)
    : pitch_(pitch), period_(period), periodic_part_(std::move(periodic_part)) {
    if (!is_pow2(periodic_part_.size())) throw std::invalid_argument("QuasiCurve: N must be a power of two");
    if (!(period_ > 0.0)) throw std::invalid_argument("QuasiCurve: period must be positive");
    interp_ = TrigInterp3(periodic_part_, period_);
}

Vec3 QuasiCurve::eval(double s, int order) const {
    Vec3 v = interp_.eval(s, order);
    if (order == 0) v += pitch_ * (s / period_);
    if (order == 1) v += pitch_ / period_;
    return v;
}

void QuasiCurve::eval_jet(double s, Vec3* out, int max_order) const {
    interp_.eval_jet(s, out, max_order);
    out[0] += pitch_ * (s / period_);
    if (max_order >= 1) out[1] += pitch_ / period_;
}

double QuasiCurve::arc_length_deviation() const {
    const auto d = derivative_samples(1);
    double m = 0.0;
    for (const auto& v : d) m = std::max(m, std::abs(norm(v) - 1.0));
    return m;
}

std::vector<Vec3> QuasiCurve::derivative_samples(int order) const {
    auto d = derivative(periodic_part_, order, period_);
    if (order == 1) {
        const Vec3 slope = pitch_ / period_;
        for (auto& v : d) v += slope;
    }
    return d;
}

QuasiCurve QuasiCurve::refined() const {
    const std::size_t n = periodic_part_.size();
    std::vector<Vec3> fine(2 * n);
    for (std::size_t j = 0; j < 2 * n; ++j) {
        const double s = period_ * static_cast<double>(j) / static_cast<double>(2 * n);
        fine[j] = interp_.eval(s, 0);
    }
    return QuasiCurve(pitch_, period_, std::move(fine));
}

QuasiCurve integrate_tangent(const SphereField& u, const Vec3& base) {
    const Vec3 a = pitch_of(u);
    auto periodic = antiderivative_meanfree(u.samples(), u.period());
    for (auto& v : periodic) v += base;
    return QuasiCurve(a, u.period(), std::move(periodic));
}

} // namespace flab
