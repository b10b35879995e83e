#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "cascadelab/weights.hpp"

namespace cascadelab {

enum class SimplexKind { DiscreteAtoms, DirichletSymmetric, TwoDFromWeightLaw };

struct SimplexAtom {
    std::vector<double> v;  // point on the closed d-simplex (coords >= 0, sum 1)
    double prob;
};

// A random vector V on the d-simplex, with exact moment functionals
// A(p) = E[sum_i V_i^p] and its p-derivative. Terms with V_i = 0 contribute 0
// to both (the x^p ln x -> 0 limit).
class SimplexLaw {
public:
    static SimplexLaw discrete_atoms(int d, std::vector<SimplexAtom> atoms);
    static SimplexLaw dirichlet_symmetric(int d, double alpha);
    static SimplexLaw two_d(WeightLaw law);

    int dimension() const { return d_; }
    SimplexKind kind() const { return kind_; }

    double A(double p) const;      // E[sum_i V_i^p], p > 0
    double A_log(double p) const;  // E[sum_i V_i^p ln V_i]
    double K(double p) const;      // (1/p) ln A(p); exactly 0 at p=1 for atom laws
    double c_cross() const;        // d=2 only: c = E[V0 V1]

    const std::vector<SimplexAtom>& atoms() const { return atoms_; }
    nlohmann::ordered_json to_json() const;

private:
    SimplexLaw() = default;
    SimplexKind kind_ = SimplexKind::DiscreteAtoms;
    int d_ = 2;
    double alpha_ = 0.0;
    std::vector<SimplexAtom> atoms_;
    // TwoDFromWeightLaw keeps the weight law for its moment oracles
    std::vector<WeightLaw> wlaw_;
};

struct MonotonicityReport {
    double grid_step = 0.0;
    double max_forward_diff = 0.0;  // max over the grid of K(p+step) - K(p)
    double p_at_max = 0.0;
    bool pass = false;              // max forward diff <= 1e-10
};

MonotonicityReport monotonicity_report(const SimplexLaw& V, double grid_step);

struct L3L2Check {
    double c = 0.0;    // E[V0 V1]
    double lhs = 0.0;  // (1-2c)^3 - (1-3c)^2
    double rhs = 0.0;  // direct sixth-power norm difference
    double gap = 0.0;  // lhs - rhs
};

// d=2 identity: ||V||^6_{L2(l2)} - ||V||^6_{L3(l3)} = c^2 (3 - 8c).
L3L2Check l3l2_identity_check(const SimplexLaw& V);

// E[sum V_i^p ln(V_i^p)] - A(p) ln A(p); <= 0 on [1,2] for d=2.
double inequality_gap(const SimplexLaw& V, double p);

struct SearchResult {
    int dimension = 0;
    std::vector<SimplexAtom> atoms;   // best candidate found
    double violation = 0.0;           // max over the p-grid of K(p+step) - K(p)
    double p_at = 0.0;
    long evaluations = 0;
    std::uint64_t seed = 0;
    nlohmann::ordered_json to_json() const;
};

// Random-restart Nelder-Mead over 2..4-atom laws on the d-simplex (softmax
// coordinates, stick-breaking probabilities), maximizing the monotonicity
// violation. Deterministic for fixed (d, budget, seed) at any thread count.
SearchResult counterexample_search(int d, long budget, std::uint64_t seed);

}  // namespace cascadelab
