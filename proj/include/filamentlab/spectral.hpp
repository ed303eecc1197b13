#pragma once

#include "filamentlab/fft.hpp"
#include "filamentlab/vec3.hpp"

#include <cstddef>
#include <vector>

namespace flab {

// Transform tables and wavenumbers for one grid size. Immutable; create one
// per worker thread (fft_plan already caches per thread underneath).
struct SpectralWorkspace {
    SpectralWorkspace(std::size_t n, double period);

    std::size_t n;
    double period;
    std::vector<double> k; // k_j = 2п nu_j / L, nu ordering 0..N/2, -N/2+1..-1
};

// Spectral derivative of the trigonometric interpolant at the nodes.
// Nyquist mode: kept for even orders (real multiplier (ik)^order), dropped for
// odd orders — this matches differentiating the cosine interpolant and then
// sampling at the nodes, where the sine vanishes. order in {1,2,3,4}.
std::vector<double> derivative(const std::vector<double>& f, int order, double period);
std::vector<Vec3> derivative(const std::vector<Vec3>& f, int order, double period);

// Antiderivative of the mean-free part, zeroed at s=0: returns node values of
// F(s) = int_0^s (f - mean(f)); periodic because the mean is removed.
std::vector<double> antiderivative_meanfree(const std::vector<double>& f, double period);
std::vector<Vec3> antiderivative_meanfree(const std::vector<Vec3>& f, double period);

// Node-sum trapezoid over one period: (L/N) * sum. Spectrally accurate on
// smooth periodic integrands.
double quadrature(const std::vector<double>& f, double period);
Vec3 quadrature(const std::vector<Vec3>& f, double period);

double mean(const std::vector<double>& f);
Vec3 mean(const std::vector<Vec3>& f);

// C^inf trigonometric interpolant of real periodic samples, evaluable with
// derivatives anywhere. The Nyquist mode is represented as a pure cosine, so
// off-node odd derivatives carry its -k sin(ks) contribution (consistent with
// the node-space convention above, which samples that sine at its zeros).
class TrigInterp {
  public:
    TrigInterp() = default;
    TrigInterp(const std::vector<double>& samples, double period);

    double eval(double s, int order = 0) const;
    double period() const { return period_; }
    std::size_t size() const { return n_; }

  private:
    friend class TrigInterp3;
    std::size_t n_ = 0;
    double period_ = 0.0;
    std::vector<cplx> c_; // c_nu = X_nu / N for nu = 0..N/2 (one-sided)
};

// Three components sharing one phasor sweep; eval_jet returns orders 0..max_order.
class TrigInterp3 {
  public:
    TrigInterp3() = default;
    TrigInterp3(const std::vector<Vec3>& samples, double period);

    Vec3 eval(double s, int order = 0) const;
    void eval_jet(double s, Vec3* out, int max_order) const; // max_order <= 4
    double period() const { return period_; }
    std::size_t size() const { return n_; }

  private:
    std::size_t n_ = 0;
    double period_ = 0.0;
    std::vector<cplx> cx_, cy_, cz_;
};

} // namespace flab
