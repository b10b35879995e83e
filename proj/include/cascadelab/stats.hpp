#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cascadelab/spectral.hpp"
#include "cascadelab/weights.hpp"

namespace cascadelab {

struct McSummary {
    double estimate = 0.0;
    double variance = 0.0;   // sample variance of the per-replica values
    double std_error = 0.0;  // sqrt(variance / R)
    long replicas = 0;
    std::uint64_t master_seed = 0;
    double wall_time = 0.0;  // seconds; excluded from determinism comparisons
};

McSummary summarize(const std::vector<double>& raw, std::uint64_t seed, double wall);

struct Moment2Report {
    McSummary summary;
    double oracle = 0.0;  // exact finite-n second moment (partial series sum)
    double z = 0.0;       // (estimate - oracle) / std_error
    int n = 0;
    long long s = 0;
    std::vector<double> raw;  // |mu_hat_n(s)|^2 per replica
    nlohmann::ordered_json to_json() const;
};

// Empirical E|mu_hat_n(s)|^2 over R independent realizations.
Moment2Report moment2_experiment(const WeightLaw& law, int n, long long s, long R,
                                 std::uint64_t seed);

struct VarpiReport {
    McSummary real_part;
    McSummary imag_part;
    double oracle = 0.0;  // varpi(law), exact for n >= 2
    double z_re = 0.0;
    double z_im = 0.0;
    int n = 0;
    std::vector<std::complex<double>> raw;  // mu_hat_n(1)^2 per replica
    nlohmann::ordered_json to_json() const;
};

// Empirical mean of the complex square mu_hat_n(1)^2; the oracle is exactly
// varpi for every n >= 2 (the series truncates at m = 2).
VarpiReport varpi_experiment(const WeightLaw& law, int n, long R, std::uint64_t seed);

struct CltReport {
    long replicas = 0;
    int n = 0, k = 0;
    double var_re = 0.0, var_im = 0.0, cov_re_im = 0.0;
    double se_var_re = 0.0, se_var_im = 0.0, se_cov = 0.0;
    double oracle_var_re = 0.0, oracle_var_im = 0.0;  // (rho_k +- varpi)/2
    double rho_k = 0.0;                               // depth-k truncation of rho
    double z_var_re = 0.0, z_var_im = 0.0, z_cov = 0.0;
    // |Z|^2 against M2_n: with-intercept fit plus the through-origin slope
    double slope = 0.0, intercept = 0.0, se_slope = 0.0, se_intercept = 0.0;
    double slope_origin = 0.0;
    double z_slope = 0.0, z_intercept = 0.0;
    std::uint64_t master_seed = 0;
    double wall_time = 0.0;
    std::vector<std::complex<double>> raw_z;  // rescaled samples
    std::vector<double> raw_m2;               // top-tree M2_n per sample
    nlohmann::ordered_json to_json() const;
};

// R samples of the rescaled dyadic-frequency coefficient via the self-similar
// sampler; covariance vs the finite-k oracle and the conditional-variance
// regression.
CltReport clt_experiment(const WeightLaw& law, int n, int k, long R, std::uint64_t seed);

struct M2Report {
    McSummary summary;         // of M2_n, oracle 1
    double z = 0.0;
    int n = 0;
    double eps = 0.0;
    double frac_below = 0.0;   // fraction of replicas with M2_n < eps
    double frac_se = 0.0;      // binomial SE of that fraction
    std::vector<double> quantile_q;
    std::vector<double> quantile_v;
    // (1/n) ln sup_Y: empirical mean vs the asymptotic rate and a
    // finite-depth reference with the extremal (3/(2 beta*)) ln(n)/n term.
    double supy_mean = 0.0;
    double supy_se = 0.0;
    double supy_rate = 0.0;
    double supy_corrected_ref = 0.0;
    std::vector<double> raw_m2;
    std::vector<double> raw_supy;  // (1/n) ln sup_Y per replica
    nlohmann::ordered_json to_json() const;
};

M2Report m2_experiment(const WeightLaw& law, int n, long R, std::uint64_t seed, double eps);

struct HolderReport {
    std::vector<int> depths;
    std::vector<double> min_means;  // mean over replicas of min_S/(n ln 2)
    std::vector<double> max_means;
    long replicas = 0;
    // intercepts of a + b (ln n)/n fits
    double gamma_plus_fit = 0.0, gamma_plus_slope = 0.0;
    double gamma_minus_fit = 0.0, gamma_minus_slope = 0.0;
    double oracle_gamma_plus = 0.0, oracle_gamma_minus = 0.0;
    // one-sided Frostman check: C fitted at the first depth, then
    // max leaf mass <= C 2^{-n gamma+} verified at all deeper depths
    double frostman_C = 0.0;
    bool frostman_ok = false;
    bool skipped_sharpness = false;  // boundary (non-attained) exponent
    std::uint64_t master_seed = 0;
    double wall_time = 0.0;
    nlohmann::ordered_json to_json() const;
};

HolderReport holder_experiment(const WeightLaw& law, const std::vector<int>& depths, long R,
                               std::uint64_t seed);

struct FdimReport {
    std::vector<int> levels;        // dyadic exponents j
    std::vector<double> mc_log2;    // log2 of the empirical E|mu_hat(2^j)|^2
    std::vector<double> oracle_log2;
    double mc_slope = 0.0, oracle_slope = 0.0;
    double mc_se = 0.0;
    double dimension_oracle = 0.0;  // D_F
    int inner_depth = 0;
    long replicas = 0;
    std::uint64_t master_seed = 0;
    double wall_time = 0.0;
    nlohmann::ordered_json to_json() const;
};

// MC estimate of E|mu_hat_{j+k}(2^j)|^2 per level j, log2-regressed against j;
// slope vs -D_F, alongside the same regression on the exact oracle values.
FdimReport fdim_fit(const WeightLaw& law, int inner_depth, const std::vector<int>& levels,
                    long R, std::uint64_t seed);

// Ordinary least squares y = a + b x with classical and HC1-robust SEs.
struct LinFit {
    double intercept = 0.0, slope = 0.0;
    double se_intercept = 0.0, se_slope = 0.0;
    double se_slope_robust = 0.0, se_intercept_robust = 0.0;
};
LinFit ols(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cascadelab
