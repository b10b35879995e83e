#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cascadelab/rng.hpp"

#include <nlohmann/json.hpp>

namespace cascadelab {

enum class LawKind { Uniform, SymmetricBeta, SymmetricTwoPoint, DiscreteSymmetric, NumericDensity };

struct Atom {
    double value;  // atom of W0, in (0,1)
    double prob;   // > 0
};

// Piecewise-linear density of W0 on (0,1) built from a sampled table:
// symmetrized (f(x) <- (f(x)+f(1-x))/2 on the union grid), extended toward
// both endpoints by the power law fitted to the two outermost knots, and
// renormalized to total mass one. By construction the density is symmetric
// about 1/2, so E[W0] = 1/2 holds structurally.
struct DensityTable {
    std::vector<double> xs;   // symmetrized knots, strictly increasing, xs.front() = 1 - xs.back()
    std::vector<double> fs;   // density at knots, >= 0, symmetric
    double beta = 0.0;        // endpoint exponent: f(x) ~ c * x^beta as x -> 0 (> -1)
    double c = 0.0;           // extension coefficient
    double ext_mass = 0.0;    // mass of one extension piece (0, xs.front()]
    std::vector<double> cdf;  // P(W0 <= xs[i]); cdf.front() = ext_mass
    double p_star = 0.0;      // E[W0^{-p}] treated as +inf for p >= p_star (0 = always)
};

// The distribution of the weight pair W = (W0, W1), W0 + W1 = 1, E[W0] = 1/2,
// 0 < W0 < 1, together with exact (or quadrature) moment oracles. Immutable
// after construction; safe to share across threads.
class WeightLaw {
public:
    static WeightLaw uniform();
    static WeightLaw symmetric_beta(double alpha);
    static WeightLaw symmetric_two_point(double a);
    static WeightLaw discrete_symmetric(std::vector<Atom> atoms);
    static WeightLaw numeric_density(const std::vector<double>& x, const std::vector<double>& f,
                                     double quad_tol = 1e-10);
    static WeightLaw discrete_symmetric_csv(const std::string& path);
    static WeightLaw numeric_density_csv(const std::string& path, double quad_tol = 1e-10);

    LawKind kind() const { return kind_; }
    double quadrature_tolerance() const { return quad_tol_; }

    // One draw of (w0, w1); w1 = 1 - w0 exactly. Consumes a variable number of
    // uniforms from the stream (Beta uses a rejection recipe), deterministically.
    std::pair<double, double> sample(RngStream& stream) const;

    // E[W0^p + W1^p]; +inf when the negative-moment integral diverges.
    double moment_sum(double p) const;
    // E[W0^p] and E[W1^p] separately (equal for every built-in variant).
    double moment_w0(double p) const;
    double moment_w1(double p) const;
    // E[W0^p ln W0 + W1^p ln W1]; the p-derivative of moment_sum.
    double moment_log_sum(double p) const;

    // phi(p) = ln moment_sum(p); phi(1) = 0 exactly; +inf propagates.
    // Evaluated in log space, so it stays finite where moment_sum would
    // underflow or overflow a double.
    double phi(double p) const;
    // phi'(p) = moment_log_sum(p) / moment_sum(p), via the same closed forms.
    double phi_prime(double p) const;

    double e2() const;        // E[W0^2]
    double variance() const;  // Var[W0] = E[W0^2] - 1/4 > 0

    // Smallest p > 0 with moment_sum(-p) = +inf; +inf when all negative
    // moments are finite (atomic laws).
    double neg_divergence_threshold() const;

    // Support metadata for boundary (non-attained) exponent limits.
    double ess_sup_max() const;  // ess sup of max(W0, W1)
    double ess_inf_min() const;  // ess inf of min(W0, W1)

    // Short grammar-style name, e.g. "beta:2".
    std::string describe() const;
    // Full config echo: every datum needed to rebuild the law exactly.
    nlohmann::ordered_json to_json() const;

    const std::vector<Atom>& atoms() const { return atoms_; }
    const DensityTable& density() const { return table_; }
    double beta_alpha() const { return alpha_; }
    double two_point_a() const { return a_; }

private:
    WeightLaw() = default;
    void validate() const;
    double density_quantile(double u) const;
    double density_power_moment(double p, bool use_log) const;

    LawKind kind_ = LawKind::Uniform;
    double quad_tol_ = 1e-10;
    double alpha_ = 0.0;        // SymmetricBeta
    double a_ = 0.0;            // SymmetricTwoPoint
    std::vector<Atom> atoms_;   // DiscreteSymmetric (sorted by value)
    DensityTable table_;        // NumericDensity
    // raw table rows as loaded, for the config echo
    std::vector<double> raw_x_, raw_f_;
};

// Parse the CLI law grammar: "uniform" | "beta:<alpha>" | "twopoint:<a>" |
// "discrete:@file.csv" | "density:@file.csv".
WeightLaw parse_law(const std::string& text);

}  // namespace cascadelab
