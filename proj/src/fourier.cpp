#include "cascadelab/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cascadelab/errors.hpp"
#include "cascadelab/spectral.hpp"

namespace cascadelab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// angle fraction (s mod 2^j) / 2^j, exact in integer arithmetic
double reduced_frac(long long s, int j) {
    if (j < 63) {
        const long long mask = (1LL << j) - 1;
        return static_cast<double>(s & mask) * std::ldexp(1.0, -j);
    }
    return static_cast<double>(s) * std::ldexp(1.0, -j);
}

struct Twiddle {
    double re, im;
};

Twiddle twiddle(long long s, int j) {
    const double frac = reduced_frac(s, j);
    if (frac == 0.0) return {1.0, 0.0};
    const double th = kTwoPi * frac;
    return {std::cos(th), std::sin(th)};
}

// Scalar T recursion: T_u = w0 T_{u0} + w1 tw[d+1] T_{u1}, leaves = 1.
// The combine is written with explicit re/im so the batch path can reproduce
// it bit for bit.
struct ScalarEngine {
    const CascadeRealization& r;
    int n;                     // absolute leaf depth
    const Twiddle* tw;         // tw[j] for absolute depths j = 1..n (offset by base)
    int base;                  // subtree root depth; twiddles indexed by depth - base

    void eval(std::uint64_t bits, int depth, double& out_re, double& out_im) const {
        const auto [w0, w1] = r.node_weights(bits, depth);
        const Twiddle t = tw[depth + 1 - base];
        if (depth + 1 == n) {
            out_re = w0 + w1 * t.re;
            out_im = w1 * t.im;
            return;
        }
        double lre, lim, rre, rim;
        eval(bits << 1, depth + 1, lre, lim);
        eval((bits << 1) | 1u, depth + 1, rre, rim);
        out_re = w0 * lre + w1 * (t.re * rre - t.im * rim);
        out_im = w0 * lim + w1 * (t.re * rim + t.im * rre);
    }
};

void check_fourier_depth(const CascadeRealization& r, int n) {
    if (n < 0) throw DomainError("depth must be nonnegative");
    if (n > kMaxTreeDepth || n > r.max_depth())
        throw DepthExceeded("depth " + std::to_string(n) + " exceeds the supported maximum");
}

// epilogue shared by every path computing mu_hat = 2^n kappa_n(s) T
cplx mu_hat_from_T(int n, long long s, double tre, double tim) {
    const cplx k = kappa(n, s);
    const double scale = std::ldexp(1.0, n);
    return {scale * (k.real() * tre - k.imag() * tim), scale * (k.real() * tim + k.imag() * tre)};
}

std::vector<Twiddle> twiddle_levels(long long s, int n) {
    std::vector<Twiddle> tw(static_cast<std::size_t>(n) + 1, Twiddle{1.0, 0.0});
    for (int j = 1; j <= n; ++j) tw[static_cast<std::size_t>(j)] = twiddle(s, j);
    return tw;
}

}  // namespace

cplx kappa(int m, long long s) {
    if (m < 1 || s < 1) throw DomainError("kappa needs m >= 1 and s >= 1");
    const double frac = reduced_frac(s, m);
    if (frac == 0.0) return {0.0, 0.0};
    const double th = kTwoPi * frac;
    const double den = kTwoPi * static_cast<double>(s);
    // (e^{i th} - 1) / (i 2 pi s) = (sin th + i (1 - cos th)) / (2 pi s)
    return {std::sin(th) / den, (1.0 - std::cos(th)) / den};
}

cplx mu_hat(const CascadeRealization& r, int n, long long s) {
    check_fourier_depth(r, n);
    if (s < 0) throw DomainError("mu_hat expects s >= 0 (use mu_hat_signed)");
    if (s == 0) return {1.0, 0.0};
    if (reduced_frac(s, n) == 0.0) return {0.0, 0.0};  // dyadic multiple: kappa_n(s) = 0
    const auto tw = twiddle_levels(s, n);
    const ScalarEngine eng{r, n, tw.data(), 0};
    double tre = 1.0, tim = 0.0;
    if (n > 0) eng.eval(0, 0, tre, tim);
    return mu_hat_from_T(n, s, tre, tim);
}

cplx mu_hat_signed(const CascadeRealization& r, int n, long long s) {
    if (s >= 0) return mu_hat(r, n, s);
    return std::conj(mu_hat(r, n, -s));
}

std::vector<cplx> mu_hat_batch(const CascadeRealization& r, int n,
                               const std::vector<long long>& freqs) {
    check_fourier_depth(r, n);
    const std::size_t F = freqs.size();
    std::vector<cplx> out(F);
    if (F == 0) return out;
    for (long long s : freqs)
        if (s < 0) throw DomainError("mu_hat_batch expects s >= 0");
    if (n == 0) {
        for (std::size_t i = 0; i < F; ++i) out[i] = freqs[i] == 0 ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
        return out;
    }

    // twiddle tables per level, frequency-major
    std::vector<std::vector<double>> twre(static_cast<std::size_t>(n) + 1),
        twim(static_cast<std::size_t>(n) + 1);
    for (int j = 1; j <= n; ++j) {
        auto& re = twre[static_cast<std::size_t>(j)];
        auto& im = twim[static_cast<std::size_t>(j)];
        re.resize(F);
        im.resize(F);
        for (std::size_t i = 0; i < F; ++i) {
            const Twiddle t = twiddle(freqs[i], j);
            re[i] = t.re;
            im[i] = t.im;
        }
    }

    // vector T recursion with per-depth scratch; combine identical to ScalarEngine
    struct VecEngine {
        const CascadeRealization& r;
        int n;
        std::size_t F;
        const std::vector<std::vector<double>>& twre;
        const std::vector<std::vector<double>>& twim;
        std::vector<std::vector<double>> lre, lim, rre, rim;  // per depth

        VecEngine(const CascadeRealization& rr, int nn, std::size_t ff,
                  const std::vector<std::vector<double>>& tre,
                  const std::vector<std::vector<double>>& tim)
            : r(rr), n(nn), F(ff), twre(tre), twim(tim) {
            lre.resize(static_cast<std::size_t>(n) + 1);
            lim.resize(static_cast<std::size_t>(n) + 1);
            rre.resize(static_cast<std::size_t>(n) + 1);
            rim.resize(static_cast<std::size_t>(n) + 1);
            for (int d = 0; d <= n; ++d) {
                lre[static_cast<std::size_t>(d)].resize(F);
                lim[static_cast<std::size_t>(d)].resize(F);
                rre[static_cast<std::size_t>(d)].resize(F);
                rim[static_cast<std::size_t>(d)].resize(F);
            }
        }

        void eval(std::uint64_t bits, int depth, double* out_re, double* out_im) {
            const auto [w0, w1] = r.node_weights(bits, depth);
            const double* tre = twre[static_cast<std::size_t>(depth + 1)].data();
            const double* tim = twim[static_cast<std::size_t>(depth + 1)].data();
            if (depth + 1 == n) {
                for (std::size_t i = 0; i < F; ++i) {
                    out_re[i] = w0 + w1 * tre[i];
                    out_im[i] = w1 * tim[i];
                }
                return;
            }
            const std::size_t d1 = static_cast<std::size_t>(depth + 1);
            double* a = lre[d1].data();
            double* b = lim[d1].data();
            double* c = rre[d1].data();
            double* e = rim[d1].data();
            eval(bits << 1, depth + 1, a, b);
            eval((bits << 1) | 1u, depth + 1, c, e);
            for (std::size_t i = 0; i < F; ++i) {
                out_re[i] = w0 * a[i] + w1 * (tre[i] * c[i] - tim[i] * e[i]);
                out_im[i] = w0 * b[i] + w1 * (tre[i] * e[i] + tim[i] * c[i]);
            }
        }
    };

    // parallel over subtrees at a fixed split level; the expression tree is
    // unchanged, so any thread count gives the same bits
    const int L = std::min(n, 6);
    const std::size_t P = std::size_t{1} << L;
    std::vector<std::vector<double>> sub_re(P), sub_im(P);
    const long PP = static_cast<long>(P);
#pragma omp parallel
    {
        VecEngine eng(r, n, F, twre, twim);
#pragma omp for schedule(dynamic)
        for (long pi = 0; pi < PP; ++pi) {
            const std::size_t p = static_cast<std::size_t>(pi);
            sub_re[p].resize(F);
            sub_im[p].resize(F);
            if (L == n) {
                for (std::size_t i = 0; i < F; ++i) {
                    sub_re[p][i] = 1.0;
                    sub_im[p][i] = 0.0;
                }
            } else {
                eng.eval(static_cast<std::uint64_t>(p), L, sub_re[p].data(), sub_im[p].data());
            }
        }
    }

    // serial top combine, reusing the same node combine step level by level
    for (int depth = L - 1; depth >= 0; --depth) {
        const std::size_t nodes = std::size_t{1} << depth;
        const double* tre = twre[static_cast<std::size_t>(depth + 1)].data();
        const double* tim = twim[static_cast<std::size_t>(depth + 1)].data();
        for (std::size_t u = 0; u < nodes; ++u) {
            const auto [w0, w1] = r.node_weights(static_cast<std::uint64_t>(u), depth);
            const double* a = sub_re[2 * u].data();
            const double* b = sub_im[2 * u].data();
            const double* c = sub_re[2 * u + 1].data();
            const double* e = sub_im[2 * u + 1].data();
            double* ore = sub_re[2 * u].data();  // overwrite left slot in place
            double* oim = sub_im[2 * u].data();
            for (std::size_t i = 0; i < F; ++i) {
                const double nre = w0 * a[i] + w1 * (tre[i] * c[i] - tim[i] * e[i]);
                const double nim = w0 * b[i] + w1 * (tre[i] * e[i] + tim[i] * c[i]);
                ore[i] = nre;
                oim[i] = nim;
            }
        }
        // compact: node u's value now lives in slot 2u; move to slot u
        for (std::size_t u = 0; u < nodes; ++u) {
            if (u != 2 * u) {
                sub_re[u] = std::move(sub_re[2 * u]);
                sub_im[u] = std::move(sub_im[2 * u]);
            }
        }
    }

    for (std::size_t i = 0; i < F; ++i) {
        const long long s = freqs[i];
        if (s == 0) {
            out[i] = {1.0, 0.0};
        } else if (reduced_frac(s, n) == 0.0) {
            out[i] = {0.0, 0.0};
        } else {
            out[i] = mu_hat_from_T(n, s, sub_re[0][i], sub_im[0][i]);
        }
    }
    return out;
}

cplx martingale_difference(const CascadeRealization& r, int m, long long s) {
    if (m < 1) throw DomainError("martingale difference needs m >= 1");
    if (s < 1) throw DomainError("martingale difference needs s >= 1");
    check_fourier_depth(r, m);
    const auto tw = twiddle_levels(s, m);

    // sum over |u| = m-1 of e^{i 2 pi s l_u} (prod X) (W0(u) - 1/2)
    struct DeltaEngine {
        const CascadeRealization& r;
        int m;
        const Twiddle* tw;
        void walk(std::uint64_t bits, int depth, double phre, double phim, double prod,
                  double& sre, double& sim) const {
            const auto [w0, w1] = r.node_weights(bits, depth);
            if (depth == m - 1) {
                const double c = prod * (w0 - 0.5);
                sre += c * phre;
                sim += c * phim;
                return;
            }
            const Twiddle t = tw[depth + 1];
            walk(bits << 1, depth + 1, phre, phim, prod * 2.0 * w0, sre, sim);
            walk((bits << 1) | 1u, depth + 1, phre * t.re - phim * t.im,
                 phre * t.im + phim * t.re, prod * 2.0 * w1, sre, sim);
        }
    } eng{r, m, tw.data()};

    double sre = 0.0, sim = 0.0;
    eng.walk(0, 0, 1.0, 0.0, 1.0, sre, sim);

    // D_m(s) = kappa_m(s) * 2 (1 - e^{i th_m}) * sum
    const Twiddle t = tw[static_cast<std::size_t>(m)];
    const cplx factor = kappa(m, s) * cplx{2.0 * (1.0 - t.re), -2.0 * t.im};
    return factor * cplx{sre, sim};
}

cplx martingale_difference_direct(const CascadeRealization& r, int m, long long s) {
    if (m < 1) throw DomainError("martingale difference needs m >= 1");
    if (s < 1) throw DomainError("martingale difference needs s >= 1");
    const cplx hi = mu_hat(r, m, s);
    const cplx lo = (m == 1) ? cplx{0.0, 0.0} : mu_hat(r, m - 1, s);
    return hi - lo;
}

DyadicSample dyadic_sample(const WeightLaw& law, int n, int k, std::uint64_t seed,
                           std::uint64_t replica) {
    if (n < 0 || k < 1) throw DomainError("dyadic sampler needs n >= 0, k >= 1");
    if (n + k > kMaxTreeDepth) throw DepthExceeded("n + k exceeds the supported maximum");
    const CascadeRealization r(law, seed, replica, n + k + 1);

    // relative twiddles for the inner depth-k recursion at frequency 1
    const auto tw = twiddle_levels(1, k);
    const double sqrt_norm = std::pow(8.0 * law.e2(), -0.5 * n);
    const cplx inner_scale = kappa(k, 1) * std::ldexp(1.0, k);

    // binary-tree reduction over top leaves: value sum and Y sum combine as
    // (left + right) at every top node, a fixed association
    struct TopEngine {
        const CascadeRealization& r;
        int n, k;
        const Twiddle* tw;
        double sqrt_norm;
        void walk(std::uint64_t bits, int depth, double prodX, double& vre, double& vim,
                  double& ysum) const {
            if (depth == n) {
                const ScalarEngine inner{r, n + k, tw, n};
                double tre = 1.0, tim = 0.0;
                inner.eval(bits, n, tre, tim);
                const double sy = sqrt_norm * prodX;
                vre = sy * tre;
                vim = sy * tim;
                ysum = sy * sy;
                return;
            }
            const auto [w0, w1] = r.node_weights(bits, depth);
            double lre, lim, ly, rre, rim, ry;
            walk(bits << 1, depth + 1, prodX * 2.0 * w0, lre, lim, ly);
            walk((bits << 1) | 1u, depth + 1, prodX * 2.0 * w1, rre, rim, ry);
            vre = lre + rre;
            vim = lim + rim;
            ysum = ly + ry;
        }
    } eng{r, n, k, tw.data(), sqrt_norm};

    double vre = 0.0, vim = 0.0, ysum = 1.0;
    if (n == 0) {
        const ScalarEngine inner{r, k, tw.data(), 0};
        double tre = 1.0, tim = 0.0;
        inner.eval(0, 0, tre, tim);
        vre = tre;
        vim = tim;
        ysum = 1.0;
    } else {
        eng.walk(0, 0, 1.0, vre, vim, ysum);
    }
    DyadicSample out;
    // value = inner_scale * sum (the kappa_k(1) 2^k factor is common to all leaves)
    out.value = inner_scale * cplx{vre, vim};
    out.m2_top = ysum;
    return out;
}

double sobolev_statistic(const CascadeRealization& r, int n, double alpha, double q,
                         long long s_max) {
    if (!(alpha >= 0.0 && alpha < 0.5)) throw DomainError("alpha must lie in [0, 1/2)");
    if (!(q > 2.0)) throw ParameterError("q must exceed 2");
    if (!(q * (1.0 - alpha) > 1.0)) throw ParameterError("need q (1 - alpha) > 1");
    if (s_max < 1) throw ParameterError("s_max must be at least 1");
    std::vector<long long> freqs(static_cast<std::size_t>(s_max));
    for (long long s = 1; s <= s_max; ++s) freqs[static_cast<std::size_t>(s - 1)] = s;
    const auto vals = mu_hat_batch(r, n, freqs);
    double sum = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const double term = std::pow(static_cast<double>(freqs[i]), alpha) * std::abs(vals[i]);
        sum += std::pow(term, q);
    }
    return std::pow(sum, 2.0 / q);
}

int depth_for_rms(const WeightLaw& law, long long s, double eps) {
    if (s < 1) throw DomainError("depth_for_rms needs s >= 1");
    if (!(eps > 0.0)) throw ParameterError("target RMS must be positive");
    const double target = eps * eps;
    const RhoResult total = rho_series(law, s, -1, target * 1e-6);
    double remaining = total.value + total.tail_bound;
    const double var = law.variance();
    const double e2 = law.e2();
    const double pref = var / (std::numbers::pi * std::numbers::pi * static_cast<double>(s) *
                               static_cast<double>(s));
    for (int n = 0; n <= 200; ++n) {
        if (remaining <= target) return n;
        const int m = n + 1;
        const double frac = reduced_frac(s, m);
        const double mod2 = 2.0 - 2.0 * std::cos(kTwoPi * frac);  // |e^{i th}-1|^2
        remaining -= pref * mod2 * mod2 * std::pow(8.0 * e2, m - 1);
    }
    throw ConsistencyError("tail of the moment series failed to reach the target");
}

void dump_spectrum(std::ostream& out, const std::vector<long long>& freqs,
                   const std::vector<cplx>& values) {
    out << "s,re,im,abs2\n";
    char buf[160];
    for (std::size_t i = 0; i < freqs.size() && i < values.size(); ++i) {
        const cplx v = values[i];
        std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g,%.17g", freqs[i], v.real(), v.imag(),
                      std::norm(v));
        out << buf << '\n';
    }
}

}  // namespace cascadelab
