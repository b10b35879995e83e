#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

#include "cascadelab/cascade.hpp"
#include "cascadelab/errors.hpp"
#include "cascadelab/fourier.hpp"
#include "cascadelab/spectral.hpp"
#include "cascadelab/weights.hpp"

using namespace cascadelab;

namespace {

constexpr double kPi = std::numbers::pi;
const std::uint64_t kSeed = 0xF0042ull;

// |e^{i 2 pi s / 2^m} - 1|^2 with the same exact reduction as the library.
double mod2(int m, long long s) {
    const long long den = 1ll << m;
    const long long rem = s % den;
    return 2.0 - 2.0 * std::cos(2.0 * kPi * (static_cast<double>(rem) / static_cast<double>(den)));
}

}  // namespace

TEST_SUITE("fourier") {

TEST_CASE("kappa closed forms") {
    // kappa_1(1) = (e^{i pi} - 1) / (2 pi i) = i / pi.
    const cplx k11 = kappa(1, 1);
    CHECK(std::abs(k11.real()) < 1e-16);
    CHECK(k11.imag() == doctest::Approx(1.0 / kPi).epsilon(1e-15));
    // kappa_2(1) = (i - 1) / (2 pi i) = (1 + i) / (2 pi).
    const cplx k21 = kappa(2, 1);
    CHECK(k21.real() == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-15));
    CHECK(k21.imag() == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-15));
    // Exact zero whenever 2^m divides s: the angle is reduced in integers.
    for (int m : {1, 2, 5, 10}) {
        for (long long k : {1ll, 3ll, 7ll}) {
            CHECK(kappa(m, k << m) == cplx(0.0, 0.0));
        }
    }
    // |kappa_m(s)| <= 1 / (pi s).
    for (int m : {1, 3, 8}) {
        for (long long s : {1ll, 2ll, 9ll, 100ll}) {
            CHECK(std::abs(kappa(m, s)) <= 1.0 / (kPi * static_cast<double>(s)) + 1e-15);
        }
    }
}

TEST_CASE("mu_hat exact special values") {
    const auto f3 = CascadeRealization::forced(WeightLaw::uniform(), 0.3);
    // Level-1 coefficient at s = 1: 2 kappa_1(1) (w0 - w1) = -0.8 i / pi.
    const cplx v = mu_hat(f3, 1, 1);
    CHECK(std::abs(v.real()) < 1e-15);
    CHECK(v.imag() == doctest::Approx(-0.8 / kPi).epsilon(1e-14));
    // kappa_1(2) = 0 exactly.
    CHECK(mu_hat(f3, 1, 2) == cplx(0.0, 0.0));

    const CascadeRealization r(WeightLaw::uniform(), kSeed, 1, 16);
    for (int n : {1, 4, 9}) {
        CHECK(mu_hat(r, n, 0) == cplx(1.0, 0.0));
        CHECK(mu_hat(r, n, 1ll << n) == cplx(0.0, 0.0));
        CHECK(mu_hat(r, n, 3ll << n) == cplx(0.0, 0.0));
    }
    // Depth 0 approximant is Lebesgue: every nonzero frequency vanishes.
    CHECK(mu_hat(r, 0, 5) == cplx(0.0, 0.0));
}

TEST_CASE("conjugate symmetry and batch agreement") {
    const CascadeRealization r(parse_law("beta:2"), kSeed, 7, 14);
    const int n = 9;
    std::vector<long long> freqs = {0, 1, 2, 3, 5, 8, 13, 21, 64, 100, 511, 512};
    const auto batch = mu_hat_batch(r, n, freqs);
    REQUIRE(batch.size() == freqs.size());
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        const cplx scalar = mu_hat(r, n, freqs[i]);
        CHECK(batch[i].real() == scalar.real());
        CHECK(batch[i].imag() == scalar.imag());
        const cplx neg = mu_hat_signed(r, n, -freqs[i]);
        CHECK(neg.real() == scalar.real());
        CHECK(neg.imag() == -scalar.imag());
    }
}

TEST_CASE("coefficients are bounded by the total mass") {
    const CascadeRealization r(WeightLaw::uniform(), kSeed, 3, 14);
    for (long long s = 1; s <= 64; ++s) {
        CHECK(std::abs(mu_hat(r, 10, s)) <= 1.0 + 1e-12);
    }
}

TEST_CASE("martingale differences telescope to mu_hat") {
    const CascadeRealization r(WeightLaw::uniform(), kSeed, 5, 14);
    for (long long s : {1ll, 3ll, 7ll}) {
        const int n = 10;
        cplx sum = 0.0;
        for (int m = 1; m <= n; ++m) sum += martingale_difference(r, m, s);
        const cplx direct = mu_hat(r, n, s);
        CHECK(std::abs(sum - direct) <= 1e-12);
    }
}

TEST_CASE("martingale difference agrees with its definition") {
    const CascadeRealization r(parse_law("twopoint:0.25"), kSeed, 2, 14);
    for (int m : {1, 2, 5}) {
        for (long long s : {1ll, 2ll, 3ll, 9ll}) {
            const cplx a = martingale_difference(r, m, s);
            const cplx b = martingale_difference_direct(r, m, s);
            CHECK(std::abs(a - b) <= 1e-12);
        }
    }
    // D_m(s) = 0 exactly when 2^m | s (the level-m twiddle factor is 1).
    CHECK(martingale_difference(r, 1, 2) == cplx(0.0, 0.0));
    CHECK(martingale_difference(r, 1, 6) == cplx(0.0, 0.0));
    CHECK(martingale_difference(r, 3, 8) == cplx(0.0, 0.0));
    CHECK(martingale_difference(r, 3, 16) == cplx(0.0, 0.0));
}

TEST_CASE("martingale difference second moments match the closed form") {
    // E|D_m(s)|^2 = Var[W0] |e^{i 2 pi s / 2^m} - 1|^4 (8 E2)^{m-1} / (pi^2 s^2).
    const WeightLaw law = WeightLaw::uniform();
    const double var = law.variance();
    const double e2 = law.e2();
    const long R = 4000;
    struct Pair { int m; long long s; };
    for (const Pair ms : {Pair{1, 1}, Pair{2, 1}, Pair{2, 3}, Pair{3, 5}}) {
        const double m2f = mod2(ms.m, ms.s);
        const double oracle = var * m2f * m2f * std::pow(8.0 * e2, ms.m - 1) /
                              (kPi * kPi * static_cast<double>(ms.s * ms.s));
        double sum = 0.0, sum2 = 0.0;
        for (long rep = 0; rep < R; ++rep) {
            const CascadeRealization r(law, kSeed + ms.m, static_cast<std::uint64_t>(rep),
                                       ms.m + 2);
            const double a2 = std::norm(martingale_difference(r, ms.m, ms.s));
            sum += a2;
            sum2 += a2 * a2;
        }
        const double mean = sum / R;
        const double sd = std::sqrt(std::max(0.0, sum2 / R - mean * mean));
        const double se = sd / std::sqrt(static_cast<double>(R));
        CAPTURE(ms.m);
        CAPTURE(ms.s);
        CHECK(std::abs(mean - oracle) <= 3.5 * se);
    }
    // Exact-zero case: s even at m = 1.
    const CascadeRealization r(law, kSeed, 0, 4);
    CHECK(std::norm(martingale_difference(r, 1, 2)) == 0.0);
}

TEST_CASE("sobolev statistic") {
    const auto f3 = CascadeRealization::forced(WeightLaw::uniform(), 0.3);
    // Single frequency, alpha = 0: the statistic collapses to |mu_hat_1(1)|^2.
    const double one = sobolev_statistic(f3, 1, 0.0, 4.0, 1);
    CHECK(one == doctest::Approx(0.64 / (kPi * kPi)).epsilon(1e-12));
    // Lebesgue measure: every nonzero coefficient is (numerically) zero.
    const auto f5 = CascadeRealization::forced(WeightLaw::uniform(), 0.5);
    CHECK(sobolev_statistic(f5, 1, 0.2, 4.0, 8) <= 1e-20);
    // Monotone in s_max.
    const CascadeRealization r(WeightLaw::uniform(), kSeed, 9, 12);
    const double a = sobolev_statistic(r, 8, 0.2, 32.0, 64);
    const double b = sobolev_statistic(r, 8, 0.2, 32.0, 256);
    CHECK(b >= a - 1e-15);

    CHECK_THROWS_AS(sobolev_statistic(r, 8, 0.6, 32.0, 16), DomainError);
    CHECK_THROWS_AS(sobolev_statistic(r, 8, -0.1, 32.0, 16), DomainError);
    CHECK_THROWS_AS(sobolev_statistic(r, 8, 0.2, 2.0, 16), ParameterError);
    CHECK_THROWS_AS(sobolev_statistic(r, 8, 0.2, 32.0, 0), ParameterError);
}

TEST_CASE("depth_for_rms brackets the tail") {
    const WeightLaw law = WeightLaw::uniform();
    for (double eps : {0.05, 0.01}) {
        const int n = depth_for_rms(law, 1, eps);
        const double full = rho_series(law, 1, -1, 1e-18).value;
        const double target = eps * eps;
        const double tail_n = full - rho_series(law, 1, n, 1e-18).value;
        CHECK(tail_n <= target * (1.0 + 1e-9) + 1e-15);
        if (n > 0) {
            const double tail_prev = full - rho_series(law, 1, n - 1, 1e-18).value;
            CHECK(tail_prev > target);
        }
    }
    CHECK(depth_for_rms(law, 1, 0.01) >= depth_for_rms(law, 1, 0.05));
    CHECK_THROWS_AS(depth_for_rms(law, 0, 0.1), DomainError);
    CHECK_THROWS_AS(depth_for_rms(law, 1, 0.0), ParameterError);
}

TEST_CASE("dyadic sampler") {
    const WeightLaw law = WeightLaw::uniform();
    // n = 0: plain coefficient of a depth-k cascade, unit top mass.
    const DyadicSample s0 = dyadic_sample(law, 0, 6, kSeed, 3);
    CHECK(s0.m2_top == 1.0);
    CHECK(std::abs(s0.value) < 10.0);
    // Bitwise determinism, replica decoupling.
    const DyadicSample again = dyadic_sample(law, 0, 6, kSeed, 3);
    CHECK(again.value.real() == s0.value.real());
    CHECK(again.value.imag() == s0.value.imag());
    const DyadicSample other = dyadic_sample(law, 0, 6, kSeed, 4);
    CHECK(other.value != s0.value);

    const DyadicSample s2 = dyadic_sample(law, 3, 5, kSeed, 11);
    CHECK(s2.m2_top > 0.0);
    CHECK(std::isfinite(s2.value.real()));
    CHECK(std::isfinite(s2.value.imag()));
}

TEST_CASE("spectrum dump format") {
    std::vector<long long> freqs = {1, 2};
    std::vector<cplx> vals = {cplx(0.5, -0.25), cplx(0.0, 0.0)};
    std::ostringstream out;
    dump_spectrum(out, freqs, vals);
    const std::string text = out.str();
    CHECK(text.find("s,re,im,abs2") == 0);
    CHECK(text.find("\n1,0.5,-0.25,0.3125") != std::string::npos);
    CHECK(text.find("\n2,0,0,0") != std::string::npos);
}

}  // TEST_SUITE
