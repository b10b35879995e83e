#include "cascadelab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "cascadelab/errors.hpp"
#include "cascadelab/quadrature.hpp"
#include "cascadelab/special.hpp"

namespace cascadelab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Margin subtracted from the fitted endpoint exponent before declaring a
// negative moment finite: the fit sees only two knots, and densities with
// logarithmic corrections (e.g. 1/(x ln^2 x)) fit slightly above -1 while
// every negative moment diverges.
constexpr double kEndpointFitMargin = 0.15;
// Extension exponents are capped away from -1 so the extension itself stays
// integrable; the uncapped fit still drives divergence detection.
constexpr double kMinExtBeta = -0.95;
// Open-interval clamp for sampled weights.
constexpr double kW0Lo = 0x1p-100;
constexpr double kW0Hi = 1.0 - 0x1p-53;

double clamp_open(double w) { return std::min(std::max(w, kW0Lo), kW0Hi); }

// Marsaglia-Tsang squeeze sampler, shape >= 1.
double gamma_draw_ge1(RngStream& st, double shape) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = st.next_normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = st.next_unit();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double gamma_draw(RngStream& st, double shape) {
    if (shape >= 1.0) return gamma_draw_ge1(st, shape);
    const double g = gamma_draw_ge1(st, shape + 1.0);
    return g * std::pow(st.next_unit(), 1.0 / shape);
}

std::vector<std::pair<double, double>> read_two_column_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidLaw("cannot open table file: " + path);
    std::vector<std::pair<double, double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string cleaned = line;
        std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
        std::istringstream ls(cleaned);
        double a, b;
        if (ls >> a >> b) {
            rows.emplace_back(a, b);
        } else if (!first || cleaned.find_first_not_of(" \t\r") == std::string::npos) {
            // blank lines are fine anywhere; anything else is only tolerated
            // as a single header row
            std::istringstream probe(cleaned);
            std::string tok;
            if (probe >> tok && !rows.empty())
                throw InvalidLaw("malformed row in " + path + ": " + line);
        }
        first = false;
    }
    if (rows.empty()) throw InvalidLaw("no data rows in " + path);
    return rows;
}

// Integral over [xa, xb] of (f linear between (xa,fa),(xb,fb)) * x^p * (ln x)^{use_log}.
double knot_panel_integral(double xa, double fa, double xb, double fb, double p, bool use_log,
                           const QuadratureOptions& opt) {
    const double slope = (fb - fa) / (xb - xa);
    auto f = [&](double x) {
        const double lin = fa + slope * (x - xa);
        const double v = lin * std::pow(x, p);
        return use_log ? v * std::log(x) : v;
    };
    return integrate(f, xa, xb, opt);
}

}  // namespace

// ---------------------------------------------------------------- builders

WeightLaw WeightLaw::uniform() {
    WeightLaw law;
    law.kind_ = LawKind::Uniform;
    return law;
}

WeightLaw WeightLaw::symmetric_beta(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw InvalidLaw("beta law needs shape alpha > 0");
    WeightLaw law;
    law.kind_ = LawKind::SymmetricBeta;
    law.alpha_ = alpha;
    return law;
}

WeightLaw WeightLaw::symmetric_two_point(double a) {
    if (a == 0.5) throw DegenerateLaw("two-point atom at 1/2 is the point mass at (1/2,1/2)");
    if (!(a > 0.0 && a < 0.5))
        throw InvalidLaw("two-point atom must lie in (0, 1/2)");
    WeightLaw law;
    law.kind_ = LawKind::SymmetricTwoPoint;
    law.a_ = a;
    return law;
}

WeightLaw WeightLaw::discrete_symmetric(std::vector<Atom> atoms) {
    if (atoms.empty()) throw InvalidLaw("discrete law needs at least one atom");
    for (const auto& at : atoms) {
        if (!(at.value > 0.0 && at.value < 1.0) || !std::isfinite(at.value))
            throw InvalidLaw("discrete atom value outside (0,1)");
        if (!(at.prob > 0.0) || !std::isfinite(at.prob))
            throw InvalidLaw("discrete atom probability must be positive");
    }
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& l, const Atom& r) { return l.value < r.value; });
    // merge exact duplicates
    std::vector<Atom> merged;
    for (const auto& at : atoms) {
        if (!merged.empty() && merged.back().value == at.value)
            merged.back().prob += at.prob;
        else
            merged.push_back(at);
    }
    double total = 0.0;
    for (const auto& at : merged) total += at.prob;
    if (std::abs(total - 1.0) > 1e-9)
        throw InvalidLaw("discrete atom probabilities must sum to 1 (within 1e-9)");
    for (auto& at : merged) at.prob /= total;
    // mirror closure: the law of W0 must equal the law of 1 - W0
    const std::size_t m = merged.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Atom& lo = merged[i];
        const Atom& hi = merged[m - 1 - i];
        if (std::abs(lo.value - (1.0 - hi.value)) > 1e-9 || std::abs(lo.prob - hi.prob) > 1e-9)
            throw InvalidLaw("discrete law is not mirror-symmetric under v -> 1-v");
    }
    WeightLaw law;
    law.kind_ = LawKind::DiscreteSymmetric;
    law.atoms_ = std::move(merged);
    law.validate();
    return law;
}

WeightLaw WeightLaw::numeric_density(const std::vector<double>& x, const std::vector<double>& f,
                                     double quad_tol) {
    if (x.size() != f.size()) throw InvalidLaw("density table: column length mismatch");
    if (x.size() < 2) throw InvalidLaw("density table needs at least two rows");
    if (!(quad_tol > 0.0)) throw InvalidLaw("quadrature tolerance must be positive");
    double fmax = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0 && x[i] < 1.0) || !std::isfinite(x[i]))
            throw InvalidLaw("density table: x values must lie strictly inside (0,1)");
        if (i > 0 && !(x[i] > x[i - 1]))
            throw InvalidLaw("density table: x values must be strictly increasing");
        if (!(f[i] >= 0.0) || !std::isfinite(f[i]))
            throw InvalidLaw("density table: density values must be finite and nonnegative");
        fmax = std::max(fmax, f[i]);
    }
    if (fmax <= 0.0) throw InvalidLaw("density table: all density values are zero");

    WeightLaw law;
    law.kind_ = LawKind::NumericDensity;
    law.quad_tol_ = quad_tol;
    law.raw_x_ = x;
    law.raw_f_ = f;

    // raw edge fits, used to evaluate the unsymmetrized table outside its grid
    const std::size_t K = x.size();
    double betaL = 0.0, betaR = 0.0;
    if (f[0] > 0.0 && f[1] > 0.0) betaL = std::log(f[1] / f[0]) / std::log(x[1] / x[0]);
    if (f[K - 1] > 0.0 && f[K - 2] > 0.0)
        betaR = std::log(f[K - 2] / f[K - 1]) / std::log((1.0 - x[K - 2]) / (1.0 - x[K - 1]));
    const double cL = f[0] > 0.0 ? f[0] / std::pow(x[0], betaL) : 0.0;
    const double cR = f[K - 1] > 0.0 ? f[K - 1] / std::pow(1.0 - x[K - 1], betaR) : 0.0;
    auto raw_eval = [&](double t) -> double {
        if (t <= x.front()) return t == x.front() ? f.front() : cL * std::pow(t, betaL);
        if (t >= x.back()) return t == x.back() ? f.back() : cR * std::pow(1.0 - t, betaR);
        const auto it = std::upper_bound(x.begin(), x.end(), t);
        const std::size_t j = static_cast<std::size_t>(it - x.begin());
        const double w = (t - x[j - 1]) / (x[j] - x[j - 1]);
        return f[j - 1] + w * (f[j] - f[j - 1]);
    };

    // symmetrized union grid
    DensityTable tb;
    tb.xs = x;
    for (double xi : x) tb.xs.push_back(1.0 - xi);
    std::sort(tb.xs.begin(), tb.xs.end());
    tb.xs.erase(std::unique(tb.xs.begin(), tb.xs.end()), tb.xs.end());
    tb.fs.resize(tb.xs.size());
    for (std::size_t i = 0; i < tb.xs.size(); ++i)
        tb.fs[i] = 0.5 * (raw_eval(tb.xs[i]) + raw_eval(1.0 - tb.xs[i]));

    // endpoint exponent of the symmetrized density (left edge; right mirrors)
    double beta_fit = 0.0;
    if (tb.fs[0] > 0.0 && tb.fs[1] > 0.0)
        beta_fit = std::log(tb.fs[1] / tb.fs[0]) / std::log(tb.xs[1] / tb.xs[0]);
    tb.p_star = std::max(0.0, 1.0 + beta_fit - kEndpointFitMargin);
    tb.beta = std::max(beta_fit, kMinExtBeta);
    tb.c = tb.fs[0] > 0.0 ? tb.fs[0] / std::pow(tb.xs[0], tb.beta) : 0.0;
    tb.ext_mass = tb.c * std::pow(tb.xs[0], tb.beta + 1.0) / (tb.beta + 1.0);

    double mass = 2.0 * tb.ext_mass;
    for (std::size_t i = 0; i + 1 < tb.xs.size(); ++i)
        mass += 0.5 * (tb.fs[i] + tb.fs[i + 1]) * (tb.xs[i + 1] - tb.xs[i]);
    if (!(mass > 0.0) || !std::isfinite(mass))
        throw InvalidLaw("density table: total mass is not positive and finite");
    for (auto& v : tb.fs) v /= mass;
    tb.c /= mass;
    tb.ext_mass /= mass;

    tb.cdf.resize(tb.xs.size());
    tb.cdf[0] = tb.ext_mass;
    for (std::size_t i = 1; i < tb.xs.size(); ++i)
        tb.cdf[i] = tb.cdf[i - 1] + 0.5 * (tb.fs[i - 1] + tb.fs[i]) * (tb.xs[i] - tb.xs[i - 1]);

    law.table_ = std::move(tb);
    law.validate();
    return law;
}

WeightLaw WeightLaw::discrete_symmetric_csv(const std::string& path) {
    std::vector<Atom> atoms;
    for (const auto& [v, q] : read_two_column_csv(path)) atoms.push_back({v, q});
    return discrete_symmetric(std::move(atoms));
}

WeightLaw WeightLaw::numeric_density_csv(const std::string& path, double quad_tol) {
    std::vector<double> xs, fs;
    for (const auto& [xv, fv] : read_two_column_csv(path)) {
        xs.push_back(xv);
        fs.push_back(fv);
    }
    return numeric_density(xs, fs, quad_tol);
}

void WeightLaw::validate() const {
    if (kind_ == LawKind::DiscreteSymmetric || kind_ == LawKind::NumericDensity) {
        const double var = e2() - 0.25;
        if (!(var > 1e-12))
            throw DegenerateLaw("law is concentrated at 1/2 (variance not positive)");
    }
    if (kind_ == LawKind::NumericDensity) {
        // symmetry makes the mean 1/2 structurally; a drift here means the
        // integrator and the table disagree
        const double mean = moment_w0(1.0);
        if (std::abs(mean - 0.5) > 100.0 * quad_tol_)
            throw ConsistencyError("numeric density mean drifted from 1/2");
    }
}

// ---------------------------------------------------------------- sampling

std::pair<double, double> WeightLaw::sample(RngStream& stream) const {
    double w0 = 0.0;
    switch (kind_) {
        case LawKind::Uniform:
            w0 = stream.next_unit();
            break;
        case LawKind::SymmetricBeta: {
            const double g1 = gamma_draw(stream, alpha_);
            const double g2 = gamma_draw(stream, alpha_);
            w0 = clamp_open(g1 / (g1 + g2));
            break;
        }
        case LawKind::SymmetricTwoPoint:
            w0 = stream.next_unit() < 0.5 ? a_ : 1.0 - a_;
            break;
        case LawKind::DiscreteSymmetric: {
            const double u = stream.next_unit();
            double acc = 0.0;
            w0 = atoms_.back().value;
            for (const auto& at : atoms_) {
                acc += at.prob;
                if (u <= acc) {
                    w0 = at.value;
                    break;
                }
            }
            break;
        }
        case LawKind::NumericDensity:
            w0 = clamp_open(density_quantile(stream.next_unit()));
            break;
    }
    return {w0, 1.0 - w0};
}

double WeightLaw::density_quantile(double u) const {
    const DensityTable& tb = table_;
    const double b1 = tb.beta + 1.0;
    if (u <= tb.cdf.front()) {
        // invert the left extension mass c x^{b1}/b1 = u
        if (tb.c <= 0.0) return tb.xs.front();
        return std::pow(u * b1 / tb.c, 1.0 / b1);
    }
    const double right_start = tb.cdf.back();
    if (u >= right_start) {
        const double tail = 1.0 - u;  // mass to the right, mirrored extension
        if (tb.c <= 0.0 || tail <= 0.0) return tb.xs.back();
        return 1.0 - std::pow(tail * b1 / tb.c, 1.0 / b1);
    }
    const auto it = std::upper_bound(tb.cdf.begin(), tb.cdf.end(), u);
    const std::size_t j = static_cast<std::size_t>(it - tb.cdf.begin());
    // linear density on [xs[j-1], xs[j]]: solve fa t + slope t^2/2 = du
    const double xa = tb.xs[j - 1], xb = tb.xs[j];
    const double fa = tb.fs[j - 1], fb = tb.fs[j];
    const double du = u - tb.cdf[j - 1];
    const double slope = (fb - fa) / (xb - xa);
    double t;
    if (std::abs(slope) < 1e-300) {
        t = fa > 0.0 ? du / fa : 0.0;
    } else {
        const double disc = fa * fa + 2.0 * slope * du;
        t = (-fa + std::sqrt(std::max(disc, 0.0))) / slope;
    }
    return std::min(std::max(xa + t, xa), xb);
}

// ---------------------------------------------------------------- moments

double WeightLaw::density_power_moment(double p, bool use_log) const {
    // integral of f(x) x^p (ln x)^{use_log} over (0,1) for the symmetrized table
    const DensityTable& tb = table_;
    if (p < 0.0 && -p >= tb.p_star) return use_log ? -kInf : kInf;
    const QuadratureOptions opt{quad_tol_, 2000000};
    const double b = tb.beta;
    const double x1 = tb.xs.front(), xK = tb.xs.back();
    double total = 0.0;

    // left extension: c x^{b+p}, closed forms
    const double q = b + p;
    if (tb.c > 0.0) {
        if (!use_log) {
            total += tb.c * std::pow(x1, q + 1.0) / (q + 1.0);
        } else {
            total += tb.c * std::pow(x1, q + 1.0) *
                     (std::log(x1) / (q + 1.0) - 1.0 / ((q + 1.0) * (q + 1.0)));
        }
    }

    // interior knot panels
    const double span = xK - x1;
    for (std::size_t i = 0; i + 1 < tb.xs.size(); ++i) {
        QuadratureOptions local = opt;
        local.abs_tol = opt.abs_tol * std::max((tb.xs[i + 1] - tb.xs[i]) / span, 1e-6);
        total += knot_panel_integral(tb.xs[i], tb.fs[i], tb.xs[i + 1], tb.fs[i + 1], p, use_log,
                                     local);
    }

    // right extension: c (1-x)^b x^p (ln x)^{use_log} over [xK, 1)
    if (tb.c > 0.0) {
        const double U = 1.0 - xK;
        if (!use_log) {
            if (std::abs(p) * U <= 0.5) {
                // binomial series around x=1: sum_j C(p,j) (-u)^j, u = 1-x
                double coef = 1.0, term_sum = 0.0;
                for (int j = 0; j < 60; ++j) {
                    const double piece = coef * ((j % 2 == 0) ? 1.0 : -1.0) *
                                         std::pow(U, b + 1.0 + j) / (b + 1.0 + j);
                    term_sum += piece;
                    if (std::abs(piece) < 1e-18 * std::max(std::abs(term_sum), 1.0)) break;
                    coef *= (p - j) / (j + 1.0);
                }
                total += tb.c * term_sum;
            } else {
                // steep or large p: integrate u^b (1-u)^p with the sqrt map at 0
                total += integrate_sqrt_left(
                    [&](double u) { return tb.c * std::pow(u, b) * std::exp(p * std::log1p(-u)); },
                    0.0, U, opt);
            }
        } else {
            // the ln x factor vanishes at x=1 like -(1-x): integrand regular
            total += integrate_sqrt_right(
                [&](double x) { return tb.c * std::pow(1.0 - x, b) * std::pow(x, p) * std::log(x); },
                xK, 1.0, opt);
        }
    }
    return total;
}

double WeightLaw::moment_w0(double p) const {
    switch (kind_) {
        case LawKind::Uniform:
            return p > -1.0 ? 1.0 / (p + 1.0) : kInf;
        case LawKind::SymmetricBeta:
            return p > -alpha_ ? std::exp(lbeta(alpha_ + p, alpha_) - lbeta(alpha_, alpha_)) : kInf;
        case LawKind::SymmetricTwoPoint:
            return 0.5 * (std::pow(a_, p) + std::pow(1.0 - a_, p));
        case LawKind::DiscreteSymmetric: {
            double s = 0.0;
            for (const auto& at : atoms_) s += at.prob * std::pow(at.value, p);
            return s;
        }
        case LawKind::NumericDensity:
            return density_power_moment(p, false);
    }
    return 0.0;
}

double WeightLaw::moment_w1(double p) const {
    switch (kind_) {
        case LawKind::Uniform:
        case LawKind::SymmetricBeta:
        case LawKind::SymmetricTwoPoint:
            return moment_w0(p);  // symmetric by construction
        case LawKind::DiscreteSymmetric: {
            double s = 0.0;
            for (const auto& at : atoms_) s += at.prob * std::pow(1.0 - at.value, p);
            return s;
        }
        case LawKind::NumericDensity: {
            // symmetrized table: integral against (1-x)^p equals the x^p one,
            // but compute it directly so tests can assert the symmetry
            const DensityTable& tb = table_;
            if (p < 0.0 && -p >= tb.p_star) return kInf;
            std::vector<double> rx(tb.xs.size()), rf(tb.fs.size());
            for (std::size_t i = 0; i < tb.xs.size(); ++i) {
                rx[i] = 1.0 - tb.xs[tb.xs.size() - 1 - i];
                rf[i] = tb.fs[tb.fs.size() - 1 - i];
            }
            // mirrored table is identical up to fp; reuse the x^p path
            WeightLaw tmp = *this;
            for (std::size_t i = 0; i < rx.size(); ++i) {
                tmp.table_.xs[i] = rx[i];
                tmp.table_.fs[i] = rf[i];
            }
            return tmp.density_power_moment(p, false);
        }
    }
    return 0.0;
}

double WeightLaw::moment_sum(double p) const {
    if (p == 1.0) return 1.0;
    switch (kind_) {
        case LawKind::Uniform:
            return p > -1.0 ? 2.0 / (p + 1.0) : kInf;
        case LawKind::SymmetricBeta:
        case LawKind::SymmetricTwoPoint:
            return 2.0 * moment_w0(p);
        case LawKind::DiscreteSymmetric: {
            double s = 0.0;
            for (const auto& at : atoms_)
                s += at.prob * (std::pow(at.value, p) + std::pow(1.0 - at.value, p));
            return s;
        }
        case LawKind::NumericDensity:
            return 2.0 * density_power_moment(p, false);
    }
    return 0.0;
}

double WeightLaw::moment_log_sum(double p) const {
    switch (kind_) {
        case LawKind::Uniform:
            return p > -1.0 ? -2.0 / ((p + 1.0) * (p + 1.0)) : -kInf;
        case LawKind::SymmetricBeta:
            return p > -alpha_
                       ? 2.0 * moment_w0(p) * (digamma(alpha_ + p) - digamma(2.0 * alpha_ + p))
                       : -kInf;
        case LawKind::SymmetricTwoPoint: {
            const double b = 1.0 - a_;
            return std::pow(a_, p) * std::log(a_) + std::pow(b, p) * std::log(b);
        }
        case LawKind::DiscreteSymmetric: {
            double s = 0.0;
            for (const auto& at : atoms_) {
                const double v = at.value, w = 1.0 - at.value;
                s += at.prob * (std::pow(v, p) * std::log(v) + std::pow(w, p) * std::log(w));
            }
            return s;
        }
        case LawKind::NumericDensity:
            return 2.0 * density_power_moment(p, true);
    }
    return 0.0;
}

double WeightLaw::phi(double p) const {
    if (p == 1.0) return 0.0;
    switch (kind_) {
        case LawKind::Uniform:
            return p > -1.0 ? std::log(2.0) - std::log1p(p) : kInf;
        case LawKind::SymmetricBeta:
            return p > -alpha_ ? std::log(2.0) + lbeta(alpha_ + p, alpha_) - lbeta(alpha_, alpha_)
                               : kInf;
        case LawKind::SymmetricTwoPoint: {
            // stable for large |p|: factor out the dominant atom
            const double la = std::log(a_), lb = std::log1p(-a_);
            const double hi = std::max(p * la, p * lb), lo = std::min(p * la, p * lb);
            return hi + std::log1p(std::exp(lo - hi));
        }
        case LawKind::DiscreteSymmetric: {
            double hi = -kInf;
            for (const auto& at : atoms_) {
                hi = std::max(hi, p * std::log(at.value));
                hi = std::max(hi, p * std::log(1.0 - at.value));
            }
            double s = 0.0;
            for (const auto& at : atoms_) {
                s += at.prob * std::exp(p * std::log(at.value) - hi);
                s += at.prob * std::exp(p * std::log(1.0 - at.value) - hi);
            }
            return hi + std::log(s);
        }
        case LawKind::NumericDensity: {
            const double ms = moment_sum(p);
            if (ms == kInf) return kInf;
            if (!(ms > 0.0)) throw ConsistencyError("numeric density moment underflowed");
            return std::log(ms);
        }
    }
    return 0.0;
}

double WeightLaw::phi_prime(double p) const {
    switch (kind_) {
        case LawKind::Uniform:
            return -1.0 / (p + 1.0);
        case LawKind::SymmetricBeta:
            return digamma(alpha_ + p) - digamma(2.0 * alpha_ + p);
        case LawKind::SymmetricTwoPoint:
        case LawKind::DiscreteSymmetric: {
            // ratio of the same exponential sums; stable via the phi shift
            const double shift = phi(p);
            double num = 0.0;
            if (kind_ == LawKind::SymmetricTwoPoint) {
                const double la = std::log(a_), lb = std::log1p(-a_);
                num = la * std::exp(p * la - shift) + lb * std::exp(p * lb - shift);
            } else {
                for (const auto& at : atoms_) {
                    const double lv = std::log(at.value), lw = std::log(1.0 - at.value);
                    num += at.prob * (lv * std::exp(p * lv - shift) + lw * std::exp(p * lw - shift));
                }
            }
            return num;
        }
        case LawKind::NumericDensity:
            return moment_log_sum(p) / moment_sum(p);
    }
    return 0.0;
}

double WeightLaw::e2() const { return 0.5 * moment_sum(2.0); }

double WeightLaw::variance() const {
    const double v = e2() - 0.25;
    if (!(v > 0.0)) throw DegenerateLaw("law has zero variance (W0 = 1/2 a.s.)");
    return v;
}

double WeightLaw::neg_divergence_threshold() const {
    switch (kind_) {
        case LawKind::Uniform:
            return 1.0;
        case LawKind::SymmetricBeta:
            return alpha_;
        case LawKind::SymmetricTwoPoint:
        case LawKind::DiscreteSymmetric:
            return kInf;
        case LawKind::NumericDensity:
            return table_.p_star;
    }
    return kInf;
}

double WeightLaw::ess_sup_max() const {
    switch (kind_) {
        case LawKind::SymmetricTwoPoint:
            return 1.0 - a_;
        case LawKind::DiscreteSymmetric: {
            double m = 0.0;
            for (const auto& at : atoms_) m = std::max(m, std::max(at.value, 1.0 - at.value));
            return m;
        }
        default:
            return 1.0;
    }
}

double WeightLaw::ess_inf_min() const {
    switch (kind_) {
        case LawKind::SymmetricTwoPoint:
            return a_;
        case LawKind::DiscreteSymmetric: {
            double m = 1.0;
            for (const auto& at : atoms_) m = std::min(m, std::min(at.value, 1.0 - at.value));
            return m;
        }
        default:
            return 0.0;
    }
}

// ---------------------------------------------------------------- metadata

namespace {
std::string fmt_g(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}
}  // namespace

std::string WeightLaw::describe() const {
    switch (kind_) {
        case LawKind::Uniform:
            return "uniform";
        case LawKind::SymmetricBeta:
            return "beta:" + fmt_g(alpha_);
        case LawKind::SymmetricTwoPoint:
            return "twopoint:" + fmt_g(a_);
        case LawKind::DiscreteSymmetric:
            return "discrete:" + std::to_string(atoms_.size()) + "-atoms";
        case LawKind::NumericDensity:
            return "density:" + std::to_string(raw_x_.size()) + "-knots";
    }
    return "?";
}

nlohmann::ordered_json WeightLaw::to_json() const {
    nlohmann::ordered_json j;
    switch (kind_) {
        case LawKind::Uniform:
            j["variant"] = "uniform";
            break;
        case LawKind::SymmetricBeta:
            j["variant"] = "beta";
            j["alpha"] = alpha_;
            break;
        case LawKind::SymmetricTwoPoint:
            j["variant"] = "twopoint";
            j["a"] = a_;
            break;
        case LawKind::DiscreteSymmetric: {
            j["variant"] = "discrete";
            nlohmann::ordered_json arr = nlohmann::ordered_json::array();
            for (const auto& at : atoms_) arr.push_back({at.value, at.prob});
            j["atoms"] = std::move(arr);
            break;
        }
        case LawKind::NumericDensity: {
            j["variant"] = "density";
            j["x"] = raw_x_;
            j["f"] = raw_f_;
            j["quadrature_tolerance"] = quad_tol_;
            break;
        }
    }
    return j;
}

WeightLaw parse_law(const std::string& text) {
    if (text == "uniform") return WeightLaw::uniform();
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw InvalidLaw("unknown law: '" + text +
                         "' (expected uniform | beta:<alpha> | twopoint:<a> | discrete:@file | "
                         "density:@file)");
    const std::string head = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    auto parse_num = [&](const std::string& s) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            throw InvalidLaw("law parameter is not a number: '" + s + "'");
        }
        if (pos != s.size()) throw InvalidLaw("law parameter is not a number: '" + s + "'");
        return v;
    };
    if (head == "beta") return WeightLaw::symmetric_beta(parse_num(rest));
    if (head == "twopoint") return WeightLaw::symmetric_two_point(parse_num(rest));
    if (head == "discrete" || head == "density") {
        if (rest.empty() || rest[0] != '@')
            throw InvalidLaw(head + " law expects @file.csv");
        const std::string path = rest.substr(1);
        return head == "discrete" ? WeightLaw::discrete_symmetric_csv(path)
                                  : WeightLaw::numeric_density_csv(path);
    }
    throw InvalidLaw("unknown law variant: '" + head + "'");
}

}  // namespace cascadelab
