#include "filamentlab/fft.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>

namespace flab {

Fft::Fft(std::size_t n) : n_(n) {
    if (!is_pow2(n)) throw std::invalid_argument("Fft: size must be a power of two >= 2");
    rev_.resize(n);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (std::size_t b = 0; b < bits; ++b)
            if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
        rev_[i] = r;
    }
    w_.resize(n / 2);
    const double base = -2.0 * M_PI / static_cast<double>(n);
    for (std::size_t j = 0; j < n / 2; ++j) w_[j] = std::polar(1.0, base * static_cast<double>(j));
}

void Fft::butterflies(std::vector<cplx>& a) const {
    for (std::size_t i = 0; i < n_; ++i)
        if (rev_[i] > i) std::swap(a[i], a[rev_[i]]);
    for (std::size_t len = 2; len <= n_; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t step = n_ / len;
        for (std::size_t i = 0; i < n_; i += len) {
            for (std::size_t j = 0; j < half; ++j) {
                const cplx t = a[i + j + half] * w_[j * step];
                a[i + j + half] = a[i + j] - t;
                a[i + j] += t;
            }
        }
    }
}

void Fft::forward(std::vector<cplx>& a) const {
    if (a.size() != n_) throw std::invalid_argument("Fft: input size mismatch");
    butterflies(a);
}

void Fft::inverse(std::vector<cplx>& a) const {
    if (a.size() != n_) throw std::invalid_argument("Fft: input size mismatch");
    for (auto& v : a) v = std::conj(v);
    butterflies(a);
    const double s = 1.0 / static_cast<double>(n_);
    for (auto& v : a) v = std::conj(v) * s;
}

const Fft& fft_plan(std::size_t n) {
    thread_local std::map<std::size_t, std::unique_ptr<Fft>> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, std::make_unique<Fft>(n)).first;
    return *it->second;
}

} // namespace flab
