#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace flab {

using cplx = std::complex<double>;

constexpr bool is_pow2(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

// Radix-2 complex transform with precomputed twiddles, fixed size.
// forward: X_k = sum_j x_j e^{-2пi jk/N};  inverse includes the 1/N factor.
class Fft {
  public:
    explicit Fft(std::size_t n); // requires n power of two, n >= 2

    std::size_t size() const { return n_; }

    void forward(std::vector<cplx>& a) const;
    void inverse(std::vector<cplx>& a) const;

  private:
    void butterflies(std::vector<cplx>& a) const;

    std::size_t n_;
    std::vector<std::size_t> rev_;
    std::vector<cplx> w_; // e^{-2пi j/N}, j < N/2
};

// Per-thread plan cache; plans are immutable once built.
const Fft& fft_plan(std::size_t n);

} // namespace flab
