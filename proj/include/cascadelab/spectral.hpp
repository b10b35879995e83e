#pragma once

#include <nlohmann/json.hpp>

#include "cascadelab/weights.hpp"

namespace cascadelab {

struct SpectralConstants {
    double D_F = 0.0;       // log2(1/(2 E[W0^2])), in (0,1)
    double rho = 0.0;       // sum of the martingale-difference second moments at s=1
    double varpi = 0.0;     // -16 Var[W0] (1 - 2 E[W0^2]) / pi^2, < 0
    double sigma_re = 0.0;  // (rho + varpi)/2
    double sigma_im = 0.0;  // (rho - varpi)/2
    int truncation_m = 0;
    double truncation_error = 0.0;
};

struct RhoResult {
    double value = 0.0;
    int truncation_m = 0;    // index of the last term included
    double tail_bound = 0.0; // geometric bound on the omitted tail (0 for finite sums)
};

struct ExponentResult {
    double value = 0.0;     // may be +inf (gamma_minus with empty finiteness interval)
    double argmin_p = 0.0;  // +inf when the optimum is a boundary limit
    bool attained = false;  // interior optimum vs boundary/limit
    double p_lo = 0.0;      // final bracket
    double p_hi = 0.0;
    int iterations = 0;
};

double fourier_dimension(const WeightLaw& law);

// Partial sums of rho(s) = sum_{m>=1} Var[W0] |e^{i 2 pi s 2^{-m}} - 1|^4
// (8 E[W0^2])^{m-1} / (pi^2 s^2). upto_m < 0 means sum to convergence: once
// 2^{m+1} >= 4s every later term ratio is below r = 2 E[W0^2] < 1, so stop
// when term * r/(1-r) < tol and report that geometric bound. The finite
// partial sum equals E[|mu_hat_{upto_m}(s)|^2] by martingale orthogonality.
RhoResult rho_series(const WeightLaw& law, long long s, int upto_m, double tol);

double varpi(const WeightLaw& law);

// Assembles the constants; ConsistencyError if |varpi| >= rho.
SpectralConstants clt_covariance(const WeightLaw& law, double tol = 1e-14);

// gamma_o+ = -min_{p in [1, 1e6]} phi(p)/(p ln 2), golden-section on log p.
// Boundary (objective still decreasing at p_max): value = -log2(ess sup max),
// attained = false, argmin_p = +inf.
ExponentResult gamma_plus(const WeightLaw& law);

// gamma_o- = min over the finiteness interval (0, p*) of phi(-p)/(p ln 2);
// +inf when p* = 0. Discrete-law boundary limit: -log2(ess inf min).
ExponentResult gamma_minus(const WeightLaw& law);

// phi(2) - 2 phi'(2) > 0 for every nondegenerate law.
double biggins_margin(const WeightLaw& law);

struct SupYRate {
    double value = 0.0;      // inf_{beta>0} phi(2 beta)/beta - phi(2), < 0
    double beta_star = 0.0;  // minimizing beta (or the right edge when not interior)
};

SupYRate supY_rate_detail(const WeightLaw& law);
double supY_rate(const WeightLaw& law);

// The `dims` report: all of the above as ordered JSON.
nlohmann::ordered_json dims_report(const WeightLaw& law);

}  // namespace cascadelab
