#pragma once

namespace flab::ell {

// Complete integrals. K and E by arithmetic-geometric mean; Pi by Carlson
// symmetric forms. Domain: 0 <= k < 1 (k >= 1 rejected; k silently capped at
// 1 - 1e-10, far beyond the regime 0 <= k << 1 used by the solution families).
// Characteristic convention: Pi(n, k) = int_0^{K} (1 - n sn^2(w,k))^{-1} dw,
// i.e. the pole sits at n = 1 (n < 1 required; n < 0 allowed).
double complete_K(double k);
double complete_E(double k);
double complete_Pi(double n_char, double k);

struct SnCnDn {
    double sn, cn, dn;
};

// Descending-AGM (Landen) evaluation, reduced modulo the 4K period first.
SnCnDn jacobi_sn_cn_dn(double u, double k);

// E(u|k) = int_0^u dn^2, Pi(u|n,k) = int_0^u (1 - n sn^2)^{-1}, any real u.
// Computed by quasi-period reduction (2K steps) plus Carlson forms on [0,K].
double incomplete_E(double u, double k);
double incomplete_Pi(double u, double n_char, double k);

// Carlson duplication-theorem kernels (exposed for the test oracles).
double carlson_RF(double x, double y, double z);
double carlson_RC(double x, double y);
double carlson_RD(double x, double y, double z);
double carlson_RJ(double x, double y, double z, double p); // p > 0 branch

} // namespace flab::ell
