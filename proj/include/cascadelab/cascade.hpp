#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cascadelab/weights.hpp"

namespace cascadelab {

inline constexpr int kMaxTreeDepth = 26;  // ~6.7e7 leaves: DFS finishes in seconds

// Dyadic tree address: bits packed MSB-first, so bit j of the path (1-based)
// is (bits >> (depth - j)) & 1 and the node covers [bits/2^depth, (bits+1)/2^depth).
struct NodePath {
    std::uint64_t bits = 0;
    int depth = 0;

    static NodePath parse(std::string_view s);  // string of '0'/'1'; "" = root
    NodePath child(int b) const { return {(bits << 1) | static_cast<std::uint64_t>(b), depth + 1}; }
    int bit(int j) const { return static_cast<int>((bits >> (depth - j)) & 1u); }  // j in [1, depth]
    double left_endpoint() const;  // l_u = sum u_k 2^{-k}
    std::string to_string() const;
};

// A deterministic assignment of weight pairs to every node of the dyadic
// tree: node u's draw is a pure function of (master seed, replica index, u),
// so any traversal order and any thread count sees identical weights.
class CascadeRealization {
public:
    CascadeRealization(WeightLaw law, std::uint64_t master_seed, std::uint64_t replica_index,
                       int max_depth = 30);

    // Test hook: every node weight forced to the given w0 (e.g. 1/2 turns the
    // cascade into Lebesgue measure at every depth). The law is kept only for
    // normalization constants.
    static CascadeRealization forced(WeightLaw law, double w0, int max_depth = 30);

    std::pair<double, double> node_weights(const NodePath& u) const;
    // Hot-path variant without NodePath packing.
    std::pair<double, double> node_weights(std::uint64_t bits, int depth) const;

    const WeightLaw& law() const { return law_; }
    std::uint64_t master_seed() const { return seed_; }
    std::uint64_t replica_index() const { return replica_; }
    int max_depth() const { return max_depth_; }

private:
    WeightLaw law_;
    std::uint64_t seed_ = 0;
    std::uint64_t replica_ = 0;
    int max_depth_ = 30;
    double forced_w0_ = -1.0;  // < 0: sample from the law
};

struct BranchingWalkSummary {
    int depth = 0;
    double min_S = 0.0;      // inf over |v|=depth of S_v = -ln leaf mass
    double max_S = 0.0;
    double num_leaves = 0.0; // 2^depth
};

// Exact product of the weights along v; equals mu_n(I_v) for every n >= |v|.
double leaf_mass(const CascadeRealization& r, const NodePath& v);

// Streaming DFS over level n: exact min and max of S_v, O(n) memory.
BranchingWalkSummary extremal_logmass(const CascadeRealization& r, int n);

// Several depths in one traversal (depths must be positive; output sorted).
std::vector<BranchingWalkSummary> extremal_profile(const CascadeRealization& r,
                                                   std::vector<int> depths);

// M2_n = (8 E[W0^2])^{-n} * sum over |u|=n of prod_j X(u|_j)^2.
double martingale_m2(const CascadeRealization& r, int n);

// max over |u|=n of Y(u) = (8 E[W0^2])^{-n} * prod_j X(u|_j)^2.
double sup_Y(const CascadeRealization& r, int n);

// F_n(t): cumulative mass of [0,t] under the level-n approximant (piecewise
// linear, density 2^n * prod W on each level-n interval).
double F_eval(const CascadeRealization& r, int n, double t);

// Monotone tree descent: t with |F_n(t) - y| <= tol.
double F_inverse(const CascadeRealization& r, int n, double y, double tol);

// CSV dump of level-n leaf masses (columns: path, mass), n <= 16.
void dump_leaf_masses(const CascadeRealization& r, int n, std::ostream& out);

// Naive whole-tree recursions used as ground truth in tests and as the
// baseline in the kernel benchmark. Same contracts as the production kernels
// above; plain left-to-right accumulation instead of split-and-pairwise.
namespace serial_ref {
double martingale_m2(const CascadeRealization& r, int n);
double sup_Y(const CascadeRealization& r, int n);
BranchingWalkSummary extremal_logmass(const CascadeRealization& r, int n);
}  // namespace serial_ref

}  // namespace cascadelab
