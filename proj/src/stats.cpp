#include "cascadelab/stats.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cascadelab/cascade.hpp"
#include "cascadelab/errors.hpp"
#include "cascadelab/fourier.hpp"
#include "cascadelab/pairwise.hpp"

namespace cascadelab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void check_replicas(long R, long min_R) {
    if (R < min_R)
        throw ParameterError("at least " + std::to_string(min_R) + " replicas are required");
}

double mean_std_error(const std::vector<double>& v) {
    return std::sqrt(sample_variance(v) / static_cast<double>(v.size()));
}

std::vector<double> quantile_grid() { return {0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99}; }

nlohmann::ordered_json summary_json(const McSummary& s) {
    return {{"estimate", s.estimate},
            {"variance", s.variance},
            {"std_error", s.std_error},
            {"replicas", s.replicas},
            {"master_seed", s.master_seed}};
}

// 0/0 -> 0 so the exact-zero experiments (dyadic frequencies) report a clean z
double z_score(double estimate, double oracle, double se) {
    const double d = estimate - oracle;
    return d == 0.0 ? 0.0 : d / se;
}

}  // namespace

McSummary summarize(const std::vector<double>& raw, std::uint64_t seed, double wall) {
    if (raw.size() < 2) throw ParameterError("a summary needs at least 2 values");
    McSummary s;
    s.estimate = pairwise_mean(raw);
    s.variance = sample_variance(raw);
    s.std_error = std::sqrt(s.variance / static_cast<double>(raw.size()));
    s.replicas = static_cast<long>(raw.size());
    s.master_seed = seed;
    s.wall_time = wall;
    return s;
}

LinFit ols(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size()) throw DimensionError("regression inputs differ in length");
    if (n < 3) throw ParameterError("the regression needs at least 3 points");
    const double nn = static_cast<double>(n);
    const double xbar = pairwise_mean(x), ybar = pairwise_mean(y);
    std::vector<double> sxx_terms(n), sxy_terms(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - xbar;
        sxx_terms[i] = dx * dx;
        sxy_terms[i] = dx * (y[i] - ybar);
    }
    const double sxx = pairwise_sum(sxx_terms);
    const double sxy = pairwise_sum(sxy_terms);
    if (!(sxx > 0.0)) throw ParameterError("the regressor is constant");
    LinFit f;
    f.slope = sxy / sxx;
    f.intercept = ybar - f.slope * xbar;
    std::vector<double> e2(n), hc_slope(n), hc_icpt(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - f.intercept - f.slope * x[i];
        const double dx = x[i] - xbar;
        e2[i] = e * e;
        hc_slope[i] = dx * dx * e * e;
        const double m = 1.0 / nn - xbar * dx / sxx;  // row of (X'X)^{-1} X' for the intercept
        hc_icpt[i] = m * m * e * e;
    }
    const double s2 = pairwise_sum(e2) / (nn - 2.0);
    f.se_slope = std::sqrt(s2 / sxx);
    f.se_intercept = std::sqrt(s2 * (1.0 / nn + xbar * xbar / sxx));
    const double hc1 = nn / (nn - 2.0);
    f.se_slope_robust = std::sqrt(hc1 * pairwise_sum(hc_slope) / (sxx * sxx));
    f.se_intercept_robust = std::sqrt(hc1 * pairwise_sum(hc_icpt));
    return f;
}

// ---------------------------------------------------------------------------
// second moment of mu_hat_n(s)

Moment2Report moment2_experiment(const WeightLaw& law, int n, long long s, long R,
                                 std::uint64_t seed) {
    if (n < 1) throw DomainError("the experiment needs depth n >= 1");
    if (n > 20) throw DepthExceeded("moment2_experiment supports n <= 20");
    if (s < 1) throw DomainError("the experiment needs s >= 1");
    check_replicas(R, 100);
    const auto t0 = Clock::now();
    std::vector<double> raw(static_cast<std::size_t>(R));
#pragma omp parallel for schedule(dynamic)
    for (long r = 0; r < R; ++r) {
        const CascadeRealization real(law, seed, static_cast<std::uint64_t>(r), n + 1);
        raw[static_cast<std::size_t>(r)] = std::norm(mu_hat(real, n, s));
    }
    Moment2Report rep;
    rep.summary = summarize(raw, seed, seconds_since(t0));
    rep.oracle = rho_series(law, s, n, 1.0).value;
    rep.z = z_score(rep.summary.estimate, rep.oracle, rep.summary.std_error);
    rep.n = n;
    rep.s = s;
    rep.raw = std::move(raw);
    return rep;
}

nlohmann::ordered_json Moment2Report::to_json() const {
    nlohmann::ordered_json j;
    j["n"] = n;
    j["s"] = s;
    j["summary"] = summary_json(summary);
    j["oracle"] = oracle;
    j["z"] = z;
    return j;
}

// ---------------------------------------------------------------------------
// complex square of mu_hat_n(1)

VarpiReport varpi_experiment(const WeightLaw& law, int n, long R, std::uint64_t seed) {
    if (n < 2) throw DomainError("the complex-square oracle is exact only for n >= 2");
    check_replicas(R, 100);
    const auto t0 = Clock::now();
    std::vector<std::complex<double>> raw(static_cast<std::size_t>(R));
#pragma omp parallel for schedule(dynamic)
    for (long r = 0; r < R; ++r) {
        const CascadeRealization real(law, seed, static_cast<std::uint64_t>(r), n + 1);
        const cplx v = mu_hat(real, n, 1);
        raw[static_cast<std::size_t>(r)] = v * v;
    }
    std::vector<double> re(raw.size()), im(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        re[i] = raw[i].real();
        im[i] = raw[i].imag();
    }
    const double wall = seconds_since(t0);
    VarpiReport rep;
    rep.real_part = summarize(re, seed, wall);
    rep.imag_part = summarize(im, seed, wall);
    rep.oracle = varpi(law);
    rep.z_re = z_score(rep.real_part.estimate, rep.oracle, rep.real_part.std_error);
    rep.z_im = z_score(rep.imag_part.estimate, 0.0, rep.imag_part.std_error);
    rep.n = n;
    rep.raw = std::move(raw);
    return rep;
}

nlohmann::ordered_json VarpiReport::to_json() const {
    nlohmann::ordered_json j;
    j["n"] = n;
    j["real_part"] = summary_json(real_part);
    j["imag_part"] = summary_json(imag_part);
    j["oracle"] = oracle;
    j["z_re"] = z_re;
    j["z_im"] = z_im;
    return j;
}

// ---------------------------------------------------------------------------
// rescaled dyadic coefficient fluctuations

CltReport clt_experiment(const WeightLaw& law, int n, int k, long R, std::uint64_t seed) {
    if (n < 0) throw DomainError("the experiment needs n >= 0");
    if (k < 2) throw DomainError("the complex-square oracle needs inner depth k >= 2");
    if (n + k > 24) throw DepthExceeded("clt_experiment supports n + k <= 24");
    check_replicas(R, 500);
    const auto t0 = Clock::now();
    CltReport rep;
    rep.replicas = R;
    rep.n = n;
    rep.k = k;
    rep.master_seed = seed;
    rep.raw_z.resize(static_cast<std::size_t>(R));
    rep.raw_m2.resize(static_cast<std::size_t>(R));
#pragma omp parallel for schedule(dynamic)
    for (long r = 0; r < R; ++r) {
        const DyadicSample ds = dyadic_sample(law, n, k, seed, static_cast<std::uint64_t>(r));
        rep.raw_z[static_cast<std::size_t>(r)] = ds.value;
        rep.raw_m2[static_cast<std::size_t>(r)] = ds.m2_top;
    }
    const std::size_t RR = rep.raw_z.size();
    std::vector<double> re2(RR), im2(RR), cross(RR), abs2(RR);
    for (std::size_t i = 0; i < RR; ++i) {
        const double a = rep.raw_z[i].real(), b = rep.raw_z[i].imag();
        re2[i] = a * a;
        im2[i] = b * b;
        cross[i] = a * b;
        abs2[i] = a * a + b * b;
    }
    rep.var_re = pairwise_mean(re2);
    rep.var_im = pairwise_mean(im2);
    rep.cov_re_im = pairwise_mean(cross);
    rep.se_var_re = mean_std_error(re2);
    rep.se_var_im = mean_std_error(im2);
    rep.se_cov = mean_std_error(cross);
    rep.rho_k = rho_series(law, 1, k, 1.0).value;
    const double vp = varpi(law);
    rep.oracle_var_re = 0.5 * (rep.rho_k + vp);
    rep.oracle_var_im = 0.5 * (rep.rho_k - vp);
    rep.z_var_re = (rep.var_re - rep.oracle_var_re) / rep.se_var_re;
    rep.z_var_im = (rep.var_im - rep.oracle_var_im) / rep.se_var_im;
    rep.z_cov = rep.cov_re_im / rep.se_cov;

    // E[|Z|^2 | top tree] = M2_top * rho_k: slope rho_k, intercept 0
    const LinFit fit = ols(rep.raw_m2, abs2);
    rep.slope = fit.slope;
    rep.intercept = fit.intercept;
    rep.se_slope = fit.se_slope_robust;
    rep.se_intercept = fit.se_intercept_robust;
    std::vector<double> xy(RR), xx(RR);
    for (std::size_t i = 0; i < RR; ++i) {
        xy[i] = rep.raw_m2[i] * abs2[i];
        xx[i] = rep.raw_m2[i] * rep.raw_m2[i];
    }
    rep.slope_origin = pairwise_sum(xy) / pairwise_sum(xx);
    rep.z_slope = (rep.slope - rep.rho_k) / rep.se_slope;
    rep.z_intercept = rep.intercept / rep.se_intercept;
    rep.wall_time = seconds_since(t0);
    return rep;
}

nlohmann::ordered_json CltReport::to_json() const {
    nlohmann::ordered_json j;
    j["n"] = n;
    j["k"] = k;
    j["replicas"] = replicas;
    j["master_seed"] = master_seed;
    j["var_re"] = var_re;
    j["var_im"] = var_im;
    j["cov_re_im"] = cov_re_im;
    j["se_var_re"] = se_var_re;
    j["se_var_im"] = se_var_im;
    j["se_cov"] = se_cov;
    j["rho_k"] = rho_k;
    j["oracle_var_re"] = oracle_var_re;
    j["oracle_var_im"] = oracle_var_im;
    j["z_var_re"] = z_var_re;
    j["z_var_im"] = z_var_im;
    j["z_cov"] = z_cov;
    j["slope"] = slope;
    j["intercept"] = intercept;
    j["se_slope"] = se_slope;
    j["se_intercept"] = se_intercept;
    j["slope_origin"] = slope_origin;
    j["z_slope"] = z_slope;
    j["z_intercept"] = z_intercept;
    return j;
}

// ---------------------------------------------------------------------------
// mass martingale and sup Y

M2Report m2_experiment(const WeightLaw& law, int n, long R, std::uint64_t seed, double eps) {
    if (n < 1) throw DomainError("the experiment needs depth n >= 1");
    if (n > 24) throw DepthExceeded("m2_experiment supports n <= 24");
    if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0,1)");
    check_replicas(R, 8);
    const auto t0 = Clock::now();
    std::vector<double> m2(static_cast<std::size_t>(R)), supy(static_cast<std::size_t>(R));
#pragma omp parallel for schedule(dynamic)
    for (long r = 0; r < R; ++r) {
        const CascadeRealization real(law, seed, static_cast<std::uint64_t>(r), n + 1);
        m2[static_cast<std::size_t>(r)] = martingale_m2(real, n);
        supy[static_cast<std::size_t>(r)] =
            std::log(sup_Y(real, n)) / static_cast<double>(n);
    }
    M2Report rep;
    rep.summary = summarize(m2, seed, seconds_since(t0));
    rep.z = z_score(rep.summary.estimate, 1.0, rep.summary.std_error);
    rep.n = n;
    rep.eps = eps;
    long below = 0;
    for (double v : m2)
        if (v < eps) ++below;
    rep.frac_below = static_cast<double>(below) / static_cast<double>(R);
    rep.frac_se =
        std::sqrt(rep.frac_below * (1.0 - rep.frac_below) / static_cast<double>(R));
    rep.quantile_q = quantile_grid();
    for (double q : rep.quantile_q) rep.quantile_v.push_back(sample_quantile(m2, q));
    rep.supy_mean = pairwise_mean(supy);
    rep.supy_se = mean_std_error(supy);
    const SupYRate rate = supY_rate_detail(law);
    rep.supy_rate = rate.value;
    rep.supy_corrected_ref =
        rate.value - 1.5 / rate.beta_star * std::log(static_cast<double>(n)) /
                         static_cast<double>(n);
    rep.raw_m2 = std::move(m2);
    rep.raw_supy = std::move(supy);
    return rep;
}

nlohmann::ordered_json M2Report::to_json() const {
    nlohmann::ordered_json j;
    j["n"] = n;
    j["eps"] = eps;
    j["summary"] = summary_json(summary);
    j["z"] = z;
    j["frac_below"] = frac_below;
    j["frac_se"] = frac_se;
    j["quantile_q"] = quantile_q;
    j["quantile_v"] = quantile_v;
    j["supy_mean"] = supy_mean;
    j["supy_se"] = supy_se;
    j["supy_rate"] = supy_rate;
    j["supy_corrected_ref"] = supy_corrected_ref;
    return j;
}

// ---------------------------------------------------------------------------
// extremal log-mass profile and exponent fits

HolderReport holder_experiment(const WeightLaw& law, const std::vector<int>& depths, long R,
                               std::uint64_t seed) {
    if (depths.size() < 3) throw ParameterError("the exponent fit needs at least 3 depths");
    if (R < 2) throw ParameterError("at least 2 replicas are required");
    std::vector<int> ds = depths;
    std::sort(ds.begin(), ds.end());
    ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
    if (ds.front() < 1) throw DomainError("depths must be positive");
    const auto t0 = Clock::now();
    const std::size_t D = ds.size();
    const int max_depth = ds.back();
    std::vector<std::vector<double>> min_s(D, std::vector<double>(static_cast<std::size_t>(R)));
    std::vector<std::vector<double>> max_s(D, std::vector<double>(static_cast<std::size_t>(R)));
#pragma omp parallel for schedule(dynamic)
    for (long r = 0; r < R; ++r) {
        const CascadeRealization real(law, seed, static_cast<std::uint64_t>(r), max_depth + 1);
        const auto prof = extremal_profile(real, ds);
        for (std::size_t i = 0; i < D; ++i) {
            min_s[i][static_cast<std::size_t>(r)] = prof[i].min_S;
            max_s[i][static_cast<std::size_t>(r)] = prof[i].max_S;
        }
    }
    HolderReport rep;
    rep.depths = ds;
    rep.replicas = R;
    rep.master_seed = seed;
    std::vector<double> xs(D);
    for (std::size_t i = 0; i < D; ++i) {
        const double nd = static_cast<double>(ds[i]);
        xs[i] = std::log(nd) / nd;
        const double denom = nd * std::numbers::ln2;
        rep.min_means.push_back(pairwise_mean(min_s[i]) / denom);
        rep.max_means.push_back(pairwise_mean(max_s[i]) / denom);
    }
    const LinFit fplus = ols(xs, rep.min_means);
    const LinFit fminus = ols(xs, rep.max_means);
    rep.gamma_plus_fit = fplus.intercept;
    rep.gamma_plus_slope = fplus.slope;
    rep.gamma_minus_fit = fminus.intercept;
    rep.gamma_minus_slope = fminus.slope;
    const ExponentResult gp = gamma_plus(law);
    const ExponentResult gm = gamma_minus(law);
    rep.oracle_gamma_plus = gp.value;
    rep.oracle_gamma_minus = gm.value;
    rep.skipped_sharpness = !(gp.attained && gm.attained && std::isfinite(gm.value));

    // anchor the Frostman constant at the shallowest depth, then demand
    // max leaf mass <= C 2^{-n gamma+} at every deeper one
    const double gpl2 = gp.value * std::numbers::ln2;
    double C = 0.0;
    for (long r = 0; r < R; ++r)
        C = std::max(C, std::exp(gpl2 * ds.front() - min_s[0][static_cast<std::size_t>(r)]));
    rep.frostman_C = C;
    rep.frostman_ok = true;
    for (std::size_t i = 1; i < D; ++i)
        for (long r = 0; r < R; ++r)
            if (std::exp(gpl2 * ds[i] - min_s[i][static_cast<std::size_t>(r)]) > C * (1.0 + 1e-9))
                rep.frostman_ok = false;
    rep.wall_time = seconds_since(t0);
    return rep;
}

nlohmann::ordered_json HolderReport::to_json() const {
    nlohmann::ordered_json j;
    j["depths"] = depths;
    j["replicas"] = replicas;
    j["master_seed"] = master_seed;
    j["min_means"] = min_means;
    j["max_means"] = max_means;
    j["gamma_plus_fit"] = gamma_plus_fit;
    j["gamma_plus_slope"] = gamma_plus_slope;
    j["gamma_minus_fit"] = gamma_minus_fit;
    j["gamma_minus_slope"] = gamma_minus_slope;
    j["oracle_gamma_plus"] = oracle_gamma_plus;
    j["oracle_gamma_minus"] = oracle_gamma_minus;
    j["frostman_C"] = frostman_C;
    j["frostman_ok"] = frostman_ok;
    j["skipped_sharpness"] = skipped_sharpness;
    return j;
}

// ---------------------------------------------------------------------------
// dyadic-frequency decay fit

FdimReport fdim_fit(const WeightLaw& law, int inner_depth, const std::vector<int>& levels,
                    long R, std::uint64_t seed) {
    if (inner_depth < 1) throw DomainError("the fit needs inner depth >= 1");
    if (levels.size() < 3) throw ParameterError("the slope fit needs at least 3 levels");
    check_replicas(R, 8);
    for (int j : levels)
        if (j < 0 || j + inner_depth > 24)
            throw DepthExceeded("fdim_fit supports level plus inner depth <= 24");
    const auto t0 = Clock::now();
    const std::size_t L = levels.size();
    std::vector<std::vector<double>> raw(L, std::vector<double>(static_cast<std::size_t>(R)));
    const long total = static_cast<long>(L) * R;
#pragma omp parallel for schedule(dynamic)
    for (long t = 0; t < total; ++t) {
        const std::size_t i = static_cast<std::size_t>(t / R);
        const long r = t % R;
        const int j = levels[i];
        const int n = j + inner_depth;
        const std::uint64_t replica = static_cast<std::uint64_t>(t);
        const CascadeRealization real(law, seed, replica, n + 1);
        raw[i][static_cast<std::size_t>(r)] = std::norm(mu_hat(real, n, 1LL << j));
    }
    FdimReport rep;
    rep.levels = levels;
    rep.inner_depth = inner_depth;
    rep.replicas = R;
    rep.master_seed = seed;
    std::vector<double> xs(L), se_log(L);
    for (std::size_t i = 0; i < L; ++i) {
        const int j = levels[i];
        xs[i] = static_cast<double>(j);
        const double mean = pairwise_mean(raw[i]);
        const double se = mean_std_error(raw[i]);
        rep.mc_log2.push_back(std::log2(mean));
        se_log[i] = se / (mean * std::numbers::ln2);
        rep.oracle_log2.push_back(
            std::log2(rho_series(law, 1LL << j, j + inner_depth, 1.0).value));
    }
    const LinFit mc = ols(xs, rep.mc_log2);
    const LinFit orc = ols(xs, rep.oracle_log2);
    rep.mc_slope = mc.slope;
    rep.oracle_slope = orc.slope;
    // slope = sum w_i y_i with w_i = (x_i - xbar)/Sxx; propagate per-level SEs
    const double xbar = pairwise_mean(xs);
    double sxx = 0.0;
    for (std::size_t i = 0; i < L; ++i) sxx += (xs[i] - xbar) * (xs[i] - xbar);
    double var_slope = 0.0;
    for (std::size_t i = 0; i < L; ++i) {
        const double w = (xs[i] - xbar) / sxx;
        var_slope += w * w * se_log[i] * se_log[i];
    }
    rep.mc_se = std::sqrt(var_slope);
    rep.dimension_oracle = fourier_dimension(law);
    rep.wall_time = seconds_since(t0);
    return rep;
}

nlohmann::ordered_json FdimReport::to_json() const {
    nlohmann::ordered_json j;
    j["levels"] = levels;
    j["inner_depth"] = inner_depth;
    j["replicas"] = replicas;
    j["master_seed"] = master_seed;
    j["mc_log2"] = mc_log2;
    j["oracle_log2"] = oracle_log2;
    j["mc_slope"] = mc_slope;
    j["oracle_slope"] = oracle_slope;
    j["mc_se"] = mc_se;
    j["dimension_oracle"] = dimension_oracle;
    return j;
}

}  // namespace cascadelab
