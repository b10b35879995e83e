#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "cascadelab/cascade.hpp"

namespace cascadelab {

using cplx = std::complex<double>;

// kappa_m(s) = (e^{i 2 pi s 2^{-m}} - 1) / (i 2 pi s).
// The angle is reduced to 2 pi (s mod 2^m) / 2^m before evaluation, so the
// result is exactly 0 whenever 2^m divides s.
cplx kappa(int m, long long s);

// mu_hat_n(s): Fourier coefficient of the level-n approximant at integer
// frequency s >= 0, by the subtree recursion
//   T_u = W0(u) T_{u0} + W1(u) e^{i 2 pi s 2^{-(|u|+1)}} T_{u1},  T_leaf = 1,
//   mu_hat = 2^n kappa_n(s) T_root.
// s = 0 returns exactly 1. Thread counts do not change the result bits.
cplx mu_hat(const CascadeRealization& r, int n, long long s);

// Signed frequency: conjugate symmetry mu_hat(-s) = conj(mu_hat(s)).
cplx mu_hat_signed(const CascadeRealization& r, int n, long long s);

// Batch over a frequency list, sharing one DFS per block of frequencies with
// per-level twiddle tables. Bit-identical to mu_hat frequency by frequency.
std::vector<cplx> mu_hat_batch(const CascadeRealization& r, int n,
                               const std::vector<long long>& freqs);

// Martingale difference D_m(s) = mu_hat_m(s) - mu_hat_{m-1}(s), evaluated
// from the level-(m-1) sum of Delta_u(s) = kappa_m(s) e^{i 2 pi s l_u}
// (prod X) * 2 (1 - e^{i 2 pi s 2^{-m}}) (W0(u) - 1/2).
cplx martingale_difference(const CascadeRealization& r, int m, long long s);

// Same quantity straight from the definition; cross-check path.
cplx martingale_difference_direct(const CascadeRealization& r, int m, long long s);

struct DyadicSample {
    cplx value;     // one sample of 2^{n D_F / 2} mu_hat_{n+k}(2^n)
    double m2_top;  // M2_n of the top tree, for conditional second-moment tests
};

// Self-similar sampler: top tree of depth n giving Y(u) per |u|=n, then 2^n
// independent depth-k subtrees, each contributing sqrt(Y(u)) * (its mu_hat_k(1)).
// n = 0 reduces to a single cascade's mu_hat_k(1) with m2_top = 1.
DyadicSample dyadic_sample(const WeightLaw& law, int n, int k, std::uint64_t seed,
                           std::uint64_t replica);

// ( sum_{s=1}^{s_max} (s^alpha |mu_hat_n(s)|)^q )^{2/q}.
double sobolev_statistic(const CascadeRealization& r, int n, double alpha, double q,
                         long long s_max);

// Smallest depth n with tail sum_{m>n} E|D_m(s)|^2 <= eps^2 (exact series terms).
int depth_for_rms(const WeightLaw& law, long long s, double eps);

// CSV emission for spectra (columns: s, re, im, abs2).
void dump_spectrum(std::ostream& out, const std::vector<long long>& freqs,
                   const std::vector<cplx>& values);

}  // namespace cascadelab
