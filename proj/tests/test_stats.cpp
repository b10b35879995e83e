#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "cascadelab/errors.hpp"
#include "cascadelab/spectral.hpp"
#include "cascadelab/stats.hpp"
#include "cascadelab/weights.hpp"

using namespace cascadelab;

namespace {
const std::uint64_t kSeed = 0x57A75ull;
}

TEST_SUITE("stats") {

TEST_CASE("summaries") {
    const McSummary s = summarize({1.0, 2.0, 3.0, 4.0}, 7, 0.0);
    CHECK(s.estimate == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(s.variance == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
    CHECK(s.std_error == doctest::Approx(std::sqrt(5.0 / 12.0)).epsilon(1e-14));
    CHECK(s.replicas == 4);
    CHECK(s.master_seed == 7);
    CHECK_THROWS_AS(summarize({1.0}, 0, 0.0), ParameterError);
}

TEST_CASE("least squares") {
    std::vector<double> x = {0.0, 1.0, 2.0, 3.0, 4.0};
    std::vector<double> y;
    for (double xi : x) y.push_back(2.0 + 3.0 * xi);
    const LinFit f = ols(x, y);
    CHECK(f.intercept == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.slope == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(f.se_slope <= 1e-10);
    CHECK(f.se_slope_robust <= 1e-10);

    CHECK_THROWS_AS(ols({1.0, 2.0}, {1.0, 2.0, 3.0}), DimensionError);
    CHECK_THROWS_AS(ols({1.0, 2.0}, {1.0, 2.0}), ParameterError);
    CHECK_THROWS_AS(ols({1.0, 1.0, 1.0}, {1.0, 2.0, 3.0}), ParameterError);
}

TEST_CASE("second moment experiment") {
    const WeightLaw u = WeightLaw::uniform();
    const Moment2Report rep = moment2_experiment(u, 3, 1, 2000, kSeed);
    CHECK(rep.summary.replicas == 2000);
    CHECK(rep.raw.size() == 2000);
    CHECK(rep.oracle == doctest::Approx(rho_series(u, 1, 3, 1e-15).value).epsilon(1e-14));
    CHECK(std::abs(rep.z) <= 3.5);
    CHECK(rep.summary.estimate > 0.0);

    // Bitwise determinism in the master seed.
    const Moment2Report again = moment2_experiment(u, 3, 1, 2000, kSeed);
    CHECK(again.summary.estimate == rep.summary.estimate);
    CHECK(again.summary.variance == rep.summary.variance);
    const Moment2Report other = moment2_experiment(u, 3, 1, 2000, kSeed + 1);
    CHECK(other.summary.estimate != rep.summary.estimate);

    // Dyadic multiples of 2^n vanish exactly, replica by replica.
    const Moment2Report dyadic = moment2_experiment(u, 2, 4, 100, kSeed);
    CHECK(dyadic.summary.estimate == 0.0);
    CHECK(dyadic.oracle == 0.0);
    CHECK(dyadic.z == 0.0);
    for (double v : dyadic.raw) CHECK(v == 0.0);

    CHECK_THROWS_AS(moment2_experiment(u, 21, 1, 200, kSeed), DepthExceeded);
    CHECK_THROWS_AS(moment2_experiment(u, 0, 1, 200, kSeed), DomainError);
    CHECK_THROWS_AS(moment2_experiment(u, 3, 0, 200, kSeed), DomainError);
    CHECK_THROWS_AS(moment2_experiment(u, 3, 1, 50, kSeed), ParameterError);
}

TEST_CASE("standard errors shrink like one over sqrt R") {
    const WeightLaw u = WeightLaw::uniform();
    const Moment2Report small = moment2_experiment(u, 5, 1, 2000, kSeed);
    const Moment2Report large = moment2_experiment(u, 5, 1, 8000, kSeed);
    const double ratio = small.summary.std_error / large.summary.std_error;
    CHECK(ratio > 1.7);
    CHECK(ratio < 2.3);
}

TEST_CASE("complex square experiment") {
    const WeightLaw tp = WeightLaw::symmetric_two_point(0.25);
    const VarpiReport rep = varpi_experiment(tp, 5, 20000, kSeed);
    CHECK(rep.oracle ==
          doctest::Approx(-3.0 / (8.0 * std::numbers::pi * std::numbers::pi)).epsilon(1e-13));
    CHECK(std::abs(rep.z_re) <= 3.5);
    CHECK(std::abs(rep.z_im) <= 3.5);
    CHECK(rep.raw.size() == 20000);
    // The imaginary part of the mean square is pure noise around zero.
    CHECK(std::abs(rep.imag_part.estimate) <= 3.5 * rep.imag_part.std_error + 1e-12);

    // The oracle does not move with n past the truncation depth: two depths
    // must agree within joint noise.
    const WeightLaw u = WeightLaw::uniform();
    const VarpiReport lo = varpi_experiment(u, 2, 20000, kSeed + 2);
    const VarpiReport hi = varpi_experiment(u, 8, 20000, kSeed + 3);
    const double joint = std::sqrt(lo.real_part.std_error * lo.real_part.std_error +
                                   hi.real_part.std_error * hi.real_part.std_error);
    CHECK(std::abs(lo.real_part.estimate - hi.real_part.estimate) <= 3.5 * joint);
    CHECK(lo.oracle == hi.oracle);

    CHECK_THROWS_AS(varpi_experiment(u, 1, 200, kSeed), DomainError);
    CHECK_THROWS_AS(varpi_experiment(u, 5, 50, kSeed), ParameterError);
}

TEST_CASE("fluctuation covariance experiment") {
    const WeightLaw u = WeightLaw::uniform();
    const CltReport rep = clt_experiment(u, 3, 9, 1000, kSeed);
    CHECK(rep.replicas == 1000);
    CHECK(rep.raw_z.size() == 1000);
    CHECK(rep.raw_m2.size() == 1000);
    CHECK(rep.rho_k == doctest::Approx(rho_series(u, 1, 9, 1e-15).value).epsilon(1e-13));
    CHECK(rep.oracle_var_re == doctest::Approx(0.5 * (rep.rho_k + varpi(u))).epsilon(1e-13));
    CHECK(rep.oracle_var_im == doctest::Approx(0.5 * (rep.rho_k - varpi(u))).epsilon(1e-13));
    CHECK(std::abs(rep.z_var_re) <= 3.5);
    CHECK(std::abs(rep.z_var_im) <= 3.5);
    CHECK(std::abs(rep.z_cov) <= 3.5);
    CHECK(std::isfinite(rep.slope));
    CHECK(std::isfinite(rep.slope_origin));

    CHECK_THROWS_AS(clt_experiment(u, 3, 22, 600, kSeed), DepthExceeded);
    CHECK_THROWS_AS(clt_experiment(u, -1, 9, 600, kSeed), DomainError);
    CHECK_THROWS_AS(clt_experiment(u, 3, 1, 600, kSeed), DomainError);
    CHECK_THROWS_AS(clt_experiment(u, 3, 9, 400, kSeed), ParameterError);
}

TEST_CASE("mass martingale experiment") {
    const WeightLaw u = WeightLaw::uniform();
    const M2Report rep = m2_experiment(u, 10, 200, kSeed, 1e-4);
    CHECK(rep.summary.replicas == 200);
    CHECK(std::abs(rep.z) <= 3.5);
    CHECK(rep.frac_below == 0.0);  // no mass collapse at these depths
    REQUIRE(rep.quantile_q.size() == rep.quantile_v.size());
    for (std::size_t i = 1; i < rep.quantile_v.size(); ++i) {
        CHECK(rep.quantile_v[i] >= rep.quantile_v[i - 1]);
    }
    // Per replica: sup over leaves is at most the full sum.
    REQUIRE(rep.raw_m2.size() == rep.raw_supy.size());
    for (std::size_t i = 0; i < rep.raw_m2.size(); ++i) {
        CHECK(rep.raw_m2[i] > 0.0);
        CHECK(rep.raw_supy[i] <= std::log(rep.raw_m2[i]) / 10.0 + 1e-12);
    }
    // Decay rate bracket: above the finite-depth reference, below the
    // asymptotic rate.
    CHECK(rep.supy_rate == doctest::Approx(supY_rate(u)).epsilon(1e-14));
    CHECK(rep.supy_corrected_ref < rep.supy_rate);
    CHECK(rep.supy_mean < rep.supy_rate + 1e-12);
    CHECK(rep.supy_mean > rep.supy_corrected_ref - 0.1);

    // No timing data in the serialized report.
    const std::string dump = rep.to_json().dump();
    CHECK(dump.find("wall_time") == std::string::npos);

    CHECK_THROWS_AS(m2_experiment(u, 25, 100, kSeed, 1e-4), DepthExceeded);
    CHECK_THROWS_AS(m2_experiment(u, 10, 4, kSeed, 1e-4), ParameterError);
    CHECK_THROWS_AS(m2_experiment(u, 10, 100, kSeed, 0.0), ParameterError);
}

TEST_CASE("holder exponent experiment") {
    const WeightLaw u = WeightLaw::uniform();
    const std::vector<int> depths = {4, 6, 8, 10};
    const HolderReport rep = holder_experiment(u, depths, 16, kSeed);
    REQUIRE(rep.min_means.size() == depths.size());
    REQUIRE(rep.max_means.size() == depths.size());
    const double gp = gamma_plus(u).value;
    const double gm = gamma_minus(u).value;
    CHECK(rep.oracle_gamma_plus == doctest::Approx(gp).epsilon(1e-12));
    CHECK(rep.oracle_gamma_minus == doctest::Approx(gm).epsilon(1e-12));
    for (std::size_t i = 0; i < depths.size(); ++i) {
        // min_S <= n ln 2 <= max_S pins the normalized means around 1, and
        // the coarse exponents already separate them from the halves.
        CHECK(rep.min_means[i] > 0.5 * fourier_dimension(u));
        CHECK(rep.min_means[i] <= 1.0 + 1e-12);
        CHECK(rep.max_means[i] >= 1.0 - 1e-12);
        CHECK(rep.max_means[i] < 8.0);
    }
    CHECK(std::isfinite(rep.gamma_plus_fit));
    CHECK(std::isfinite(rep.gamma_minus_fit));
    CHECK(rep.frostman_C > 0.0);
    CHECK_FALSE(rep.skipped_sharpness);

    const std::string dump = rep.to_json().dump();
    CHECK(dump.find("wall_time") == std::string::npos);

    CHECK_THROWS_AS(holder_experiment(u, {4, 6}, 16, kSeed), ParameterError);
    CHECK_THROWS_AS(holder_experiment(u, depths, 1, kSeed), ParameterError);
    CHECK_THROWS_AS(holder_experiment(u, {0, 2, 4}, 16, kSeed), DomainError);
}

TEST_CASE("dimension slope fit") {
    const WeightLaw u = WeightLaw::uniform();
    const FdimReport rep = fdim_fit(u, 10, {2, 3, 4}, 400, kSeed);
    REQUIRE(rep.mc_log2.size() == 3);
    REQUIRE(rep.oracle_log2.size() == 3);
    // The exact values scale by (2 E2) per level, so the oracle slope is the
    // negated dimension up to rounding.
    CHECK(rep.oracle_slope == doctest::Approx(-fourier_dimension(u)).epsilon(1e-9));
    CHECK(rep.dimension_oracle == doctest::Approx(fourier_dimension(u)).epsilon(1e-14));
    CHECK(std::abs(rep.mc_slope - rep.oracle_slope) <= 3.5 * rep.mc_se);

    CHECK_THROWS_AS(fdim_fit(u, 10, {2, 3}, 400, kSeed), ParameterError);
    CHECK_THROWS_AS(fdim_fit(u, 10, {2, 3, 15}, 400, kSeed), DepthExceeded);
    CHECK_THROWS_AS(fdim_fit(u, 0, {2, 3, 4}, 400, kSeed), DomainError);
    CHECK_THROWS_AS(fdim_fit(u, 10, {2, 3, 4}, 4, kSeed), ParameterError);
}

}  // TEST_SUITE
