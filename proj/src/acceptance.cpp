#include "cascadelab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>
#include <vector>

#include "cascadelab/cascade.hpp"
#include "cascadelab/entropy.hpp"
#include "cascadelab/errors.hpp"
#include "cascadelab/fourier.hpp"
#include "cascadelab/pairwise.hpp"
#include "cascadelab/rng.hpp"
#include "cascadelab/spectral.hpp"
#include "cascadelab/stats.hpp"
#include "cascadelab/weights.hpp"

namespace cascadelab {

namespace {

// reference values for the Uniform and SymmetricTwoPoint(1/4) laws,
// computed independently at high precision and frozen here
constexpr double kUniformDF = 0.584962500721156;       // log2(3/2)
constexpr double kUniformVarpi = -0.0450316371743723;  // -4/(9 pi^2)
constexpr double kUniformRho = 0.2502296816987079;
constexpr double kUniformRho13 = 0.2502296816231407;   // depth-13 truncation
constexpr double kUniformSigmaRe13 = 0.102599022224;   // (rho_13 + varpi)/2
constexpr double kUniformSigmaIm13 = 0.147630659399;   // (rho_13 - varpi)/2
constexpr double kUniformGammaPlus = 0.334648916553551;
constexpr double kUniformGammaMinus = 3.86403792027692;

struct Ctx {
    std::uint64_t seed = 0;
    double zt = 3.0;
};

std::uint64_t crit_seed(const Ctx& ctx, int id) {
    return mix64(ctx.seed ^ (0xACCE97ULL * static_cast<std::uint64_t>(id)));
}

class Digest {
public:
    void add(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g|", v);
        s_ += buf;
    }
    void add(long long v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%lld|", v);
        s_ += buf;
    }
    void add(bool v) { s_ += v ? "T|" : "F|"; }
    const std::string& str() const { return s_; }

private:
    std::string s_;
};

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, ap);
    va_end(ap);
    return buf;
}

struct Gate {
    bool pass = true;
    std::string why;
    void require(bool ok, const std::string& msg) {
        if (!ok) {
            pass = false;
            if (!why.empty()) why += "; ";
            why += msg;
        }
    }
};

// ---------------------------------------------------------------------------

CriterionResult c1_exact_constants(const Ctx&) {
    CriterionResult res{1, "exact constants (uniform law)"};
    const WeightLaw u = WeightLaw::uniform();
    const double df = fourier_dimension(u);
    const double vp = varpi(u);
    const RhoResult rr = rho_series(u, 1, -1, 1e-12);
    Gate g;
    g.require(std::abs(df - std::log2(1.5)) <= 1e-12, fmt("dimension %.17g != log2(3/2)", df));
    g.require(std::abs(vp + 4.0 / (9.0 * std::numbers::pi * std::numbers::pi)) <= 1e-12,
              fmt("varpi %.17g != -4/(9 pi^2)", vp));
    g.require(rr.tail_bound <= 1e-12, fmt("tail bound %.3g > 1e-12", rr.tail_bound));
    g.require(std::abs(rr.value - kUniformRho) <= 1e-10,
              fmt("rho %.17g off the frozen value", rr.value));
    g.require(std::abs(vp) < rr.value, "|varpi| >= rho");
    res.pass = g.pass;
    res.detail = g.pass ? fmt("D_F=%.15g varpi=%.15g rho=%.15g tail=%.3g (m=%d)", df, vp,
                              rr.value, rr.tail_bound, rr.truncation_m)
                        : g.why;
    Digest d;
    d.add(df);
    d.add(vp);
    d.add(rr.value);
    d.add(static_cast<long long>(rr.truncation_m));
    res.summary = d.str();
    return res;
}

CriterionResult c2_scaling_identity(const Ctx&) {
    CriterionResult res{2, "series scaling across dyadic frequencies"};
    const std::vector<WeightLaw> laws = {WeightLaw::uniform(), WeightLaw::symmetric_beta(2.0),
                                         WeightLaw::symmetric_two_point(0.25)};
    Gate g;
    Digest d;
    double worst = 0.0;
    for (const WeightLaw& law : laws) {
        const double rho1 = rho_series(law, 1, -1, 1e-15).value;
        const double q = 2.0 * law.e2();
        for (int n = 1; n <= 10; ++n) {
            const double v = rho_series(law, 1LL << n, -1, 1e-18).value;
            const double expect = rho1 * std::pow(q, n);
            const double rel = std::abs(v - expect) / expect;
            worst = std::max(worst, rel);
            g.require(rel <= 1e-9,
                      fmt("%s n=%d rel err %.3g", law.describe().c_str(), n, rel));
        }
        d.add(rho1);
    }
    d.add(worst);
    res.pass = g.pass;
    res.detail = g.pass ? fmt("max relative error %.3g over 3 laws, n=1..10", worst) : g.why;
    res.summary = d.str();
    return res;
}

CriterionResult c3_exponent_solver(const Ctx&) {
    CriterionResult res{3, "exponent solver vs grid oracle"};
    const WeightLaw u = WeightLaw::uniform();
    const ExponentResult gp = gamma_plus(u);
    const ExponentResult gm = gamma_minus(u);

    // independent 1e5-point log-grid scans of the two objectives
    const auto grid_min = [](const std::function<double(double)>& f, double lo, double hi) {
        const double xlo = std::log(lo), xhi = std::log(hi);
        double best = f(lo);
        for (int i = 1; i < 100000; ++i) {
            const double p = std::exp(xlo + (xhi - xlo) * i / 99999.0);
            best = std::min(best, f(p));
        }
        return best;
    };
    const double grid_gp =
        -grid_min([&](double p) { return u.phi(p) / (p * std::numbers::ln2); }, 1.0, 1e6);
    const double grid_gm = grid_min(
        [&](double p) { return u.phi(-p) / (p * std::numbers::ln2); }, 1e-6, 1.0 - 1e-6);

    const WeightLaw tp = WeightLaw::symmetric_two_point(0.25);
    const ExponentResult tgp = gamma_plus(tp);
    const ExponentResult tgm = gamma_minus(tp);

    Gate g;
    g.require(std::abs(gp.value - kUniformGammaPlus) <= 1e-4,
              fmt("gamma+ %.12g off frozen", gp.value));
    g.require(std::abs(gm.value - kUniformGammaMinus) <= 1e-4,
              fmt("gamma- %.12g off frozen", gm.value));
    g.require(std::abs(gp.value - grid_gp) <= 1e-4, fmt("gamma+ vs grid %.12g", grid_gp));
    g.require(std::abs(gm.value - grid_gm) <= 1e-4, fmt("gamma- vs grid %.12g", grid_gm));
    g.require(gp.attained && gm.attained, "uniform exponents must be attained");
    g.require(std::abs(tgp.value - std::log2(4.0 / 3.0)) <= 1e-12 && !tgp.attained,
              fmt("two-point gamma+ %.12g attained=%d", tgp.value, tgp.attained ? 1 : 0));
    g.require(std::abs(tgm.value - 2.0) <= 1e-12 && !tgm.attained,
              fmt("two-point gamma- %.12g attained=%d", tgm.value, tgm.attained ? 1 : 0));
    res.pass = g.pass;
    res.detail = g.pass ? fmt("gamma+=%.9g@p=%.6g gamma-=%.9g@p=%.6g; boundary case exact",
                              gp.value, gp.argmin_p, gm.value, gm.argmin_p)
                        : g.why;
    Digest d;
    d.add(gp.value);
    d.add(gm.value);
    d.add(grid_gp);
    d.add(grid_gm);
    d.add(tgp.value);
    d.add(tgm.value);
    res.summary = d.str();
    return res;
}

std::vector<WeightLaw> battery_laws(std::uint64_t seed) {
    std::vector<WeightLaw> laws;
    laws.push_back(WeightLaw::uniform());
    for (double a : {0.25, 0.4, 0.6, 0.8, 1.25, 1.75, 2.5, 3.0, 4.0, 5.0,
                     6.0, 8.0, 10.0, 14.0, 18.0, 24.0, 32.0, 48.0, 64.0, 96.0})
        laws.push_back(WeightLaw::symmetric_beta(a));
    for (double a : {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.48})
        laws.push_back(WeightLaw::symmetric_two_point(a));
    for (int i = 0; i < 10; ++i) {
        RngStream g = salted_stream(seed, 7000 + static_cast<std::uint64_t>(i));
        const int pairs = 1 + i % 3;
        std::vector<Atom> atoms;
        double total = 0.0;
        for (int j = 0; j < pairs; ++j) {
            const double v = 0.04 + 0.42 * g.next_unit();
            const double q = 0.1 + g.next_unit();
            atoms.push_back({v, q});
            atoms.push_back({1.0 - v, q});
            total += 2.0 * q;
        }
        for (auto& a : atoms) a.prob /= total;
        laws.push_back(WeightLaw::discrete_symmetric(std::move(atoms)));
    }
    const int npts = 256;
    const std::vector<std::function<double(double)>> shapes = {
        [](double) { return 1.0; },
        [](double x) { return x * (1.0 - x); },
        [](double x) { return std::pow(x, -0.3); },
        [](double x) { return std::pow(1.0 - x, -0.4); },
        [](double x) { return 1.0 + 0.8 * std::sin(2.0 * std::numbers::pi * x); },
        [](double x) { return x < 0.3 ? x / 0.3 : (1.0 - x) / 0.7; },
        [](double x) { return x * x; },
        [](double x) { return std::exp(-4.0 * (x - 0.5) * (x - 0.5)); },
        [](double x) { return 0.2 + x * x * x; }};
    for (const auto& f : shapes) {
        std::vector<double> xs(npts), fs(npts);
        for (int i = 0; i < npts; ++i) {
            xs[static_cast<std::size_t>(i)] = (i + 0.5) / npts;
            fs[static_cast<std::size_t>(i)] = f(xs[static_cast<std::size_t>(i)]);
        }
        laws.push_back(WeightLaw::numeric_density(xs, fs));
    }
    return laws;
}

CriterionResult c4_battery_inequalities(const Ctx& ctx) {
    CriterionResult res{4, "structural inequalities over a 50-law battery"};
    const std::vector<WeightLaw> laws = battery_laws(crit_seed(ctx, 4));
    Gate g;
    g.require(laws.size() == 50, fmt("battery holds %zu laws", laws.size()));
    Digest d;
    for (const WeightLaw& law : laws) {
        const double df = fourier_dimension(law);
        const ExponentResult gp = gamma_plus(law);
        const ExponentResult gm = gamma_minus(law);
        const double bm = biggins_margin(law);
        const double sr = supY_rate(law);
        const std::string id = law.describe();
        g.require(gp.value > 0.0 && gp.value < 1.0, fmt("%s: gamma+ %.9g", id.c_str(), gp.value));
        g.require(gm.value > 1.0, fmt("%s: gamma- %.9g", id.c_str(), gm.value));
        g.require(gp.value > 0.5 * df, fmt("%s: gamma+ %.9g <= D_F/2", id.c_str(), gp.value));
        g.require(bm > 0.0, fmt("%s: biggins margin %.9g", id.c_str(), bm));
        g.require(sr < 0.0, fmt("%s: supY rate %.9g", id.c_str(), sr));
        d.add(gp.value);
        d.add(std::isfinite(gm.value) ? gm.value : -1.0);
        d.add(bm);
        d.add(sr);
    }
    res.pass = g.pass;
    res.detail = g.pass ? "all 50 laws satisfy the exponent and margin inequalities" : g.why;
    res.summary = d.str();
    return res;
}

CriterionResult c5_moment2(const Ctx& ctx) {
    CriterionResult res{5, "Monte Carlo second moment vs exact finite-depth oracle"};
    const WeightLaw u = WeightLaw::uniform();
    Gate g;
    Digest d;
    std::string info;
    for (long long s : {1LL, 3LL, 5LL}) {
        const Moment2Report rep = moment2_experiment(
            u, 10, s, 5000, mix64(crit_seed(ctx, 5) ^ static_cast<std::uint64_t>(s)));
        g.require(std::abs(rep.z) <= ctx.zt, fmt("s=%lld z=%.3g", s, rep.z));
        info += fmt("s=%lld z=%+.2f  ", s, rep.z);
        d.add(rep.summary.estimate);
        d.add(rep.oracle);
        d.add(rep.z);
    }
    res.pass = g.pass;
    res.detail = g.pass ? info : g.why;
    res.summary = d.str();
    return res;
}

CriterionResult c6_varpi(const Ctx& ctx) {
    CriterionResult res{6, "complex-square mean exactness at finite depth"};
    const VarpiReport rep =
        varpi_experiment(WeightLaw::uniform(), 10, 20000, crit_seed(ctx, 6));
    Gate g;
    g.require(std::abs(rep.oracle - kUniformVarpi) <= 1e-12, "oracle drifted from frozen value");
    g.require(std::abs(rep.z_re) <= ctx.zt, fmt("z_re=%.3g", rep.z_re));
    g.require(std::abs(rep.z_im) <= ctx.zt, fmt("z_im=%.3g", rep.z_im));
    res.pass = g.pass;
    res.detail = g.pass ? fmt("re=%.6g (z=%+.2f) im=%.6g (z=%+.2f) vs %.6g", rep.real_part.estimate,
                              rep.z_re, rep.imag_part.estimate, rep.z_im, rep.oracle)
                        : g.why;
    Digest d;
    d.add(rep.real_part.estimate);
    d.add(rep.imag_part.estimate);
    d.add(rep.z_re);
    d.add(rep.z_im);
    res.summary = d.str();
    return res;
}

CriterionResult c7_clt(const Ctx& ctx) {
    CriterionResult res{7, "fluctuation covariance and conditional-variance identity"};
    const CltReport rep = clt_experiment(WeightLaw::uniform(), 5, 13, 2000, crit_seed(ctx, 7));
    Gate g;
    g.require(std::abs(rep.rho_k - kUniformRho13) <= 1e-9, "rho_13 drifted from frozen value");
    g.require(std::abs(rep.oracle_var_re - kUniformSigmaRe13) <= 1e-6, "sigma_re drifted");
    g.require(std::abs(rep.oracle_var_im - kUniformSigmaIm13) <= 1e-6, "sigma_im drifted");
    g.require(std::abs(rep.z_var_re) <= ctx.zt, fmt("z_var_re=%.3g", rep.z_var_re));
    g.require(std::abs(rep.z_var_im) <= ctx.zt, fmt("z_var_im=%.3g", rep.z_var_im));
    g.require(std::abs(rep.z_cov) <= ctx.zt, fmt("z_cov=%.3g", rep.z_cov));
    g.require(std::abs(rep.z_slope) <= ctx.zt, fmt("z_slope=%.3g", rep.z_slope));
    g.require(std::abs(rep.z_intercept) <= ctx.zt, fmt("z_intercept=%.3g", rep.z_intercept));
    res.pass = g.pass;
    res.detail =
        g.pass ? fmt("var_re z=%+.2f var_im z=%+.2f cov z=%+.2f slope z=%+.2f icpt z=%+.2f",
                     rep.z_var_re, rep.z_var_im, rep.z_cov, rep.z_slope, rep.z_intercept)
               : g.why;
    Digest d;
    d.add(rep.var_re);
    d.add(rep.var_im);
    d.add(rep.cov_re_im);
    d.add(rep.slope);
    d.add(rep.intercept);
    d.add(rep.slope_origin);
    res.summary = d.str();
    return res;
}

CriterionResult c8_m2(const Ctx& ctx) {
    CriterionResult res{8, "mass martingale mean and no escape of mass"};
    const WeightLaw u = WeightLaw::uniform();
    const M2Report r16 = m2_experiment(u, 16, 2000, crit_seed(ctx, 8), 1e-4);
    const M2Report r8 = m2_experiment(u, 8, 2000, mix64(crit_seed(ctx, 8) ^ 0x88ULL), 1e-4);
    Gate g;
    g.require(std::abs(r16.z) <= ctx.zt, fmt("n=16 mean z=%.3g", r16.z));
    const double se_diff = std::sqrt(r8.frac_se * r8.frac_se + r16.frac_se * r16.frac_se);
    g.require(r16.frac_below <= r8.frac_below + ctx.zt * se_diff,
              fmt("frac(16)=%.4g > frac(8)=%.4g + band", r16.frac_below, r8.frac_below));
    res.pass = g.pass;
    res.detail = g.pass ? fmt("mean=%.6g (z=%+.2f) frac8=%.4g frac16=%.4g",
                              r16.summary.estimate, r16.z, r8.frac_below, r16.frac_below)
                        : g.why;
    Digest d;
    d.add(r16.summary.estimate);
    d.add(r16.z);
    d.add(r8.frac_below);
    d.add(r16.frac_below);
    res.summary = d.str();
    return res;
}

CriterionResult c9_holder(const Ctx& ctx) {
    CriterionResult res{9, "extremal log-mass extrapolation to the Frostman exponents"};
    const HolderReport rep = holder_experiment(
        WeightLaw::uniform(), {12, 14, 16, 18, 20, 22, 24}, 20, crit_seed(ctx, 9));
    Gate g;
    const double err_plus = std::abs(rep.gamma_plus_fit - kUniformGammaPlus);
    const double err_minus = std::abs(rep.gamma_minus_fit - kUniformGammaMinus);
    g.require(err_plus <= 0.05, fmt("min-side intercept %.6g err %.4g > 0.05",
                                    rep.gamma_plus_fit, err_plus));
    g.require(err_minus <= 0.4, fmt("max-side intercept %.6g err %.4g > 0.4",
                                    rep.gamma_minus_fit, err_minus));
    res.pass = g.pass;
    res.detail = g.pass ? fmt("gamma+ fit %.5g (err %.3g), gamma- fit %.5g (err %.3g), "
                              "frostman C=%.3g ok=%d",
                              rep.gamma_plus_fit, err_plus, rep.gamma_minus_fit, err_minus,
                              rep.frostman_C, rep.frostman_ok ? 1 : 0)
                        : g.why;
    Digest d;
    d.add(rep.gamma_plus_fit);
    d.add(rep.gamma_minus_fit);
    d.add(rep.frostman_C);
    d.add(rep.frostman_ok);
    res.summary = d.str();
    return res;
}

CriterionResult c10_entropy(const Ctx& ctx) {
    CriterionResult res{10, "simplex moment monotonicity, gap and cubic identity"};
    const std::uint64_t cs = crit_seed(ctx, 10);
    Gate g;
    double worst_mono = -1.0, worst_gap = -1.0, worst_l3l2 = 0.0;
    for (int i = 0; i < 200; ++i) {
        RngStream st = salted_stream(cs, static_cast<std::uint64_t>(i));
        SimplexLaw V = [&]() -> SimplexLaw {
            switch (i % 5) {
                case 0: {  // random atoms on the open 2-simplex
                    const int na = 2 + static_cast<int>(st.next_u64() % 3);
                    std::vector<SimplexAtom> atoms;
                    double tot = 0.0;
                    for (int a = 0; a < na; ++a) {
                        const double v = 0.02 + 0.96 * st.next_unit();
                        const double q = 0.1 + st.next_unit();
                        atoms.push_back({{v, 1.0 - v}, q});
                        tot += q;
                    }
                    for (auto& a : atoms) a.prob /= tot;
                    return SimplexLaw::discrete_atoms(2, std::move(atoms));
                }
                case 1:
                    return SimplexLaw::dirichlet_symmetric(2, 0.2 + 8.0 * st.next_unit());
                case 2:
                    return SimplexLaw::two_d(
                        WeightLaw::symmetric_beta(0.3 + 6.0 * st.next_unit()));
                case 3:
                    return SimplexLaw::two_d(
                        WeightLaw::symmetric_two_point(0.03 + 0.44 * st.next_unit()));
                default: {
                    const double v = 0.05 + 0.4 * st.next_unit();
                    const double q = st.next_unit();
                    return SimplexLaw::two_d(WeightLaw::discrete_symmetric(
                        {{v, q / 2.0}, {1.0 - v, q / 2.0}, {0.5, 1.0 - q}}));
                }
            }
        }();
        const MonotonicityReport mono = monotonicity_report(V, 0.005);
        worst_mono = std::max(worst_mono, mono.max_forward_diff);
        g.require(mono.max_forward_diff <= 1e-10,
                  fmt("law %d forward diff %.3g", i, mono.max_forward_diff));
        for (double p : {1.0, 1.25, 1.5, 1.75, 2.0}) {
            const double gap = inequality_gap(V, p);
            worst_gap = std::max(worst_gap, gap);
            g.require(gap <= 1e-10, fmt("law %d gap(%.2f)=%.3g", i, p, gap));
        }
        const L3L2Check chk = l3l2_identity_check(V);
        worst_l3l2 = std::max(worst_l3l2, std::abs(chk.gap));
        g.require(std::abs(chk.gap) <= 1e-10, fmt("law %d identity gap %.3g", i, chk.gap));
    }

    // equality case: both atoms sit on a vertex, so every quantity is exactly 0
    const SimplexLaw edge =
        SimplexLaw::discrete_atoms(2, {{{1.0, 0.0}, 0.4}, {{0.0, 1.0}, 0.6}});
    const MonotonicityReport em = monotonicity_report(edge, 0.005);
    const L3L2Check echk = l3l2_identity_check(edge);
    g.require(em.max_forward_diff == 0.0 && inequality_gap(edge, 1.5) == 0.0 &&
                  echk.lhs == 0.0 && echk.rhs == 0.0,
              "vertex-atom law is not identically zero");

    // high-dimensional search is reported but never gates
    const SearchResult sr = counterexample_search(17, 4000, cs);
    res.pass = g.pass;
    res.detail =
        g.pass ? fmt("worst diff %.3g, worst gap %.3g, worst identity %.3g; "
                     "d=17 search violation %+.6g at p=%.3f (report only)",
                     worst_mono, worst_gap, worst_l3l2, sr.violation, sr.p_at)
               : g.why;
    Digest d;
    d.add(worst_mono);
    d.add(worst_gap);
    d.add(worst_l3l2);
    d.add(sr.violation);
    res.summary = d.str();
    return res;
}

CriterionResult c11_homeomorphism(const Ctx& ctx) {
    CriterionResult res{11, "distribution function: endpoints, monotonicity, inversion"};
    const CascadeRealization r(WeightLaw::uniform(), crit_seed(ctx, 11), 0, 22);
    Gate g;
    for (int n : {1, 5, 10, 20}) {
        g.require(F_eval(r, n, 0.0) == 0.0 && F_eval(r, n, 1.0) == 1.0,
                  fmt("endpoints at n=%d", n));
    }
    double prev = 0.0, min_step = 1.0;
    for (int i = 1; i <= 1000; ++i) {
        const double v = F_eval(r, 20, i / 1000.0);
        min_step = std::min(min_step, v - prev);
        g.require(v >= prev, fmt("not monotone at t=%g", i / 1000.0));
        prev = v;
    }
    RngStream ys = salted_stream(crit_seed(ctx, 11), 0x11);
    double max_rt = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double y = ys.next_unit();
        const double x = F_inverse(r, 20, y, 1e-12);
        max_rt = std::max(max_rt, std::abs(F_eval(r, 20, x) - y));
    }
    g.require(max_rt <= 1e-9, fmt("round trip error %.3g", max_rt));
    double max_ref = 0.0;
    for (long j = 0; j <= (1L << 20); ++j) {
        const double t = std::ldexp(static_cast<double>(j), -20);
        max_ref = std::max(max_ref, std::abs(F_eval(r, 21, t) - F_eval(r, 20, t)));
    }
    g.require(max_ref <= 1e-12, fmt("refinement drift %.3g", max_ref));
    res.pass = g.pass;
    res.detail = g.pass ? fmt("min grid step %.3g, round trip %.3g, refinement %.3g", min_step,
                              max_rt, max_ref)
                        : g.why;
    Digest d;
    d.add(min_step);
    d.add(max_rt);
    d.add(max_ref);
    res.summary = d.str();
    return res;
}

CriterionResult c12_fdim(const Ctx& ctx) {
    CriterionResult res{12, "Fourier-dimension decay fit"};
    Gate g;
    Digest d;
    std::string info;
    for (const WeightLaw& law : {WeightLaw::uniform(), WeightLaw::symmetric_beta(2.0),
                                 WeightLaw::symmetric_two_point(0.25)}) {
        std::vector<double> xs, ys;
        for (int j = 1; j <= 10; ++j) {
            xs.push_back(j);
            ys.push_back(std::log2(rho_series(law, 1LL << j, j + 14, 1.0).value));
        }
        const double slope = ols(xs, ys).slope;
        const double err = std::abs(slope + fourier_dimension(law));
        g.require(err <= 1e-9,
                  fmt("%s oracle slope err %.3g", law.describe().c_str(), err));
        d.add(slope);
    }
    const FdimReport rep =
        fdim_fit(WeightLaw::uniform(), 14, {2, 4, 6}, 3000, crit_seed(ctx, 12));
    const double mc_err = std::abs(rep.mc_slope + kUniformDF);
    g.require(mc_err <= 0.05, fmt("MC slope %.6g err %.4g > 0.05", rep.mc_slope, mc_err));
    info = fmt("oracle slopes exact to 1e-9; MC slope %.5g (err %.3g, se %.3g)", rep.mc_slope,
               mc_err, rep.mc_se);
    d.add(rep.mc_slope);
    res.pass = g.pass;
    res.detail = g.pass ? info : g.why;
    res.summary = d.str();
    return res;
}

CriterionResult c13_sobolev(const Ctx& ctx) {
    CriterionResult res{13, "Sobolev statistic stays bounded in depth"};
    const WeightLaw u = WeightLaw::uniform();
    Gate g;
    Digest d;
    std::vector<double> means;
    for (int n : {8, 12, 16}) {
        const std::uint64_t sn = mix64(crit_seed(ctx, 13) ^ static_cast<std::uint64_t>(n));
        std::vector<double> vals(200);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (long rep = 0; rep < 200; ++rep) {
            const CascadeRealization r(u, sn, static_cast<std::uint64_t>(rep), n + 1);
            vals[static_cast<std::size_t>(rep)] = sobolev_statistic(r, n, 0.2, 32.0, 4096);
        }
        means.push_back(pairwise_mean(vals));
        d.add(means.back());
    }
    const double lo = *std::min_element(means.begin(), means.end());
    const double hi = *std::max_element(means.begin(), means.end());
    g.require(hi <= 1.5 * lo, fmt("means %.6g/%.6g/%.6g spread beyond 1.5x", means[0],
                                  means[1], means[2]));
    res.pass = g.pass;
    res.detail = g.pass ? fmt("means at n=8,12,16: %.6g %.6g %.6g (ratio %.3f)", means[0],
                              means[1], means[2], hi / lo)
                        : g.why;
    res.summary = d.str();
    return res;
}

using CritFn = CriterionResult (*)(const Ctx&);

struct Entry {
    int id;
    CritFn fn;
    bool quick;
};

constexpr Entry kEntries[] = {
    {1, c1_exact_constants, true},    {2, c2_scaling_identity, true},
    {3, c3_exponent_solver, true},    {4, c4_battery_inequalities, true},
    {5, c5_moment2, false},           {6, c6_varpi, false},
    {7, c7_clt, false},               {8, c8_m2, false},
    {9, c9_holder, false},            {10, c10_entropy, true},
    {11, c11_homeomorphism, true},    {12, c12_fdim, false},
    {13, c13_sobolev, false},
};

}  // namespace

std::vector<CriterionResult> run_acceptance(AcceptanceProfile profile, std::uint64_t seed,
                                            double z_threshold) {
    const Ctx ctx{seed, z_threshold};
    std::vector<CriterionResult> results;
    for (const Entry& e : kEntries) {
        if (profile == AcceptanceProfile::Quick && !e.quick) continue;
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult r = e.fn(ctx);
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        results.push_back(std::move(r));
    }

    // criterion 14: every selected criterion re-run with the same seed must
    // reproduce its digest bit for bit
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult det{14, "determinism of every summary under a fixed seed"};
    det.pass = true;
    std::size_t idx = 0;
    for (const Entry& e : kEntries) {
        if (profile == AcceptanceProfile::Quick && !e.quick) continue;
        const CriterionResult again = e.fn(ctx);
        if (again.summary != results[idx].summary) {
            det.pass = false;
            if (!det.detail.empty()) det.detail += "; ";
            det.detail += fmt("criterion %d digest changed on re-run", e.id);
        }
        ++idx;
    }
    if (det.pass) det.detail = fmt("%zu criteria re-run, all digests identical", idx);
    Digest dd;
    dd.add(det.pass);
    dd.add(static_cast<long long>(idx));
    det.summary = dd.str();
    det.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    results.push_back(std::move(det));
    return results;
}

bool print_acceptance(std::ostream& out, const std::vector<CriterionResult>& results) {
    bool all = true;
    for (const CriterionResult& r : results) {
        all = all && r.pass;
        std::ostringstream line;
        line << "criterion " << (r.id < 10 ? " " : "") << r.id << " ["
             << (r.pass ? "PASS" : "FAIL") << "] " << r.name;
        std::string s = line.str();
        if (s.size() < 78) s.append(78 - s.size(), ' ');
        out << s << fmt("(%7.2f s)  ", r.seconds) << r.detail << "\n";
    }
    out << (all ? "acceptance: all criteria passed\n" : "acceptance: FAILURES present\n");
    return all;
}

}  // namespace cascadelab
