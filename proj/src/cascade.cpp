#include "cascadelab/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <ostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cascadelab/errors.hpp"
#include "cascadelab/pairwise.hpp"

namespace cascadelab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
// Parallel kernels split the tree at this fixed level regardless of thread
// count; each subtree runs as a serial DFS and partials combine in fixed
// index order, so results do not depend on the schedule.
constexpr int kSplitLevel = 10;

void check_depth(const CascadeRealization& r, int n) {
    if (n < 0) throw DomainError("tree depth must be nonnegative");
    if (n > kMaxTreeDepth || n > r.max_depth())
        throw DepthExceeded("depth " + std::to_string(n) + " exceeds the supported maximum");
}
}  // namespace

NodePath NodePath::parse(std::string_view s) {
    if (s.size() > 63) throw DepthExceeded("path longer than 63 bits");
    NodePath p;
    for (char c : s) {
        if (c != '0' && c != '1') throw ParameterError("path must consist of '0'/'1'");
        p.bits = (p.bits << 1) | static_cast<std::uint64_t>(c - '0');
        ++p.depth;
    }
    return p;
}

double NodePath::left_endpoint() const {
    return static_cast<double>(bits) * std::ldexp(1.0, -depth);
}

std::string NodePath::to_string() const {
    std::string s(static_cast<std::size_t>(depth), '0');
    for (int j = 1; j <= depth; ++j) s[static_cast<std::size_t>(j - 1)] = static_cast<char>('0' + bit(j));
    return s;
}

CascadeRealization::CascadeRealization(WeightLaw law, std::uint64_t master_seed,
                                       std::uint64_t replica_index, int max_depth)
    : law_(std::move(law)), seed_(master_seed), replica_(replica_index), max_depth_(max_depth) {
    if (max_depth < 1) throw ParameterError("max_depth must be at least 1");
}

CascadeRealization CascadeRealization::forced(WeightLaw law, double w0, int max_depth) {
    if (!(w0 > 0.0 && w0 < 1.0)) throw ParameterError("forced weight must lie in (0,1)");
    CascadeRealization r(std::move(law), 0, 0, max_depth);
    r.forced_w0_ = w0;
    return r;
}

std::pair<double, double> CascadeRealization::node_weights(std::uint64_t bits, int depth) const {
    if (depth >= max_depth_) throw DepthExceeded("node below the realization's max depth");
    if (forced_w0_ >= 0.0) return {forced_w0_, 1.0 - forced_w0_};
    RngStream st = node_stream(seed_, replica_, static_cast<std::uint64_t>(depth), bits);
    return law_.sample(st);
}

std::pair<double, double> CascadeRealization::node_weights(const NodePath& u) const {
    return node_weights(u.bits, u.depth);
}

double leaf_mass(const CascadeRealization& r, const NodePath& v) {
    if (v.depth < 1) throw DomainError("leaf_mass needs depth >= 1");
    if (v.depth > r.max_depth()) throw DepthExceeded("path deeper than the realization allows");
    double m = 1.0;
    for (int j = 1; j <= v.depth; ++j) {
        const auto [w0, w1] = r.node_weights(v.bits >> (v.depth - j + 1), j - 1);
        m *= (v.bit(j) == 0) ? w0 : w1;
    }
    return m;
}

namespace {

// Serial DFS over the subtree rooted at (bits, depth): accumulates, over the
// leaves at absolute depth n, the sum and max of prod X^2 and the min/max of
// S = -sum ln w. Always cheap enough to compute all four.
struct LevelAcc {
    double sum_x2 = 0.0;
    double max_x2 = 0.0;
    double min_S = kInf;
    double max_S = -kInf;
};

void dfs_level(const CascadeRealization& r, std::uint64_t bits, int depth, int n, double x2,
               double logm, LevelAcc& acc) {
    if (depth == n) {
        acc.sum_x2 += x2;
        acc.max_x2 = std::max(acc.max_x2, x2);
        acc.min_S = std::min(acc.min_S, -logm);
        acc.max_S = std::max(acc.max_S, -logm);
        return;
    }
    const auto [w0, w1] = r.node_weights(bits, depth);
    dfs_level(r, bits << 1, depth + 1, n, x2 * 4.0 * w0 * w0, logm + std::log(w0), acc);
    dfs_level(r, (bits << 1) | 1u, depth + 1, n, x2 * 4.0 * w1 * w1, logm + std::log(w1), acc);
}

struct Prefix {
    std::uint64_t bits;
    double x2;
    double logm;
};

// All level-L prefixes in canonical (left-to-right) order, with their running
// products; the association order of the running products matches a plain
// root-to-leaf DFS, so splitting changes no bits.
void collect_prefixes(const CascadeRealization& r, std::uint64_t bits, int depth, int L, double x2,
                      double logm, std::vector<Prefix>& out) {
    if (depth == L) {
        out.push_back({bits, x2, logm});
        return;
    }
    const auto [w0, w1] = r.node_weights(bits, depth);
    collect_prefixes(r, bits << 1, depth + 1, L, x2 * 4.0 * w0 * w0, logm + std::log(w0), out);
    collect_prefixes(r, (bits << 1) | 1u, depth + 1, L, x2 * 4.0 * w1 * w1, logm + std::log(w1),
                     out);
}

LevelAcc level_stats(const CascadeRealization& r, int n) {
    check_depth(r, n);
    const int L = std::min(n, kSplitLevel);
    std::vector<Prefix> pre;
    pre.reserve(std::size_t{1} << L);
    collect_prefixes(r, 0, 0, L, 1.0, 0.0, pre);
    const long P = static_cast<long>(pre.size());
    std::vector<LevelAcc> part(pre.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < P; ++i) {
        const std::size_t idx = static_cast<std::size_t>(i);
        dfs_level(r, pre[idx].bits, L, n, pre[idx].x2, pre[idx].logm, part[idx]);
    }
    LevelAcc acc;
    std::vector<double> sums(pre.size());
    for (std::size_t i = 0; i < pre.size(); ++i) {
        sums[i] = part[i].sum_x2;
        acc.max_x2 = std::max(acc.max_x2, part[i].max_x2);
        acc.min_S = std::min(acc.min_S, part[i].min_S);
        acc.max_S = std::max(acc.max_S, part[i].max_S);
    }
    acc.sum_x2 = pairwise_sum(sums);
    return acc;
}

}  // namespace

BranchingWalkSummary extremal_logmass(const CascadeRealization& r, int n) {
    const LevelAcc acc = level_stats(r, n);
    return {n, acc.min_S, acc.max_S, std::ldexp(1.0, n)};
}

std::vector<BranchingWalkSummary> extremal_profile(const CascadeRealization& r,
                                                   std::vector<int> depths) {
    if (depths.empty()) return {};
    std::sort(depths.begin(), depths.end());
    depths.erase(std::unique(depths.begin(), depths.end()), depths.end());
    if (depths.front() < 1) throw DomainError("profile depths must be positive");
    check_depth(r, depths.back());

    const int L = std::min(depths.front(), kSplitLevel);
    std::vector<Prefix> pre;
    pre.reserve(std::size_t{1} << L);
    collect_prefixes(r, 0, 0, L, 1.0, 0.0, pre);
    const long P = static_cast<long>(pre.size());
    const std::size_t D = depths.size();

    struct MinMax {
        double mn = kInf, mx = -kInf;
    };
    std::vector<MinMax> glob(D);
#pragma omp parallel
    {
        std::vector<MinMax> local(D);
        // recursive walk over one subtree, recording S at every requested depth
        struct Walker {
            const CascadeRealization& r;
            const std::vector<int>& depths;
            std::vector<MinMax>& mm;
            void walk(std::uint64_t bits, int depth, std::size_t next, double logm) {
                if (depths[next] == depth) {
                    mm[next].mn = std::min(mm[next].mn, -logm);
                    mm[next].mx = std::max(mm[next].mx, -logm);
                    if (++next == depths.size()) return;
                }
                const auto [w0, w1] = r.node_weights(bits, depth);
                walk(bits << 1, depth + 1, next, logm + std::log(w0));
                walk((bits << 1) | 1u, depth + 1, next, logm + std::log(w1));
            }
        } walker{r, depths, local};
#pragma omp for schedule(dynamic) nowait
        for (long i = 0; i < P; ++i) {
            const std::size_t idx = static_cast<std::size_t>(i);
            std::size_t next = 0;
            while (next < D && depths[next] < L) ++next;  // unreachable: L <= depths.front()
            walker.walk(pre[idx].bits, L, next, pre[idx].logm);
        }
#pragma omp critical
        for (std::size_t d = 0; d < D; ++d) {
            glob[d].mn = std::min(glob[d].mn, local[d].mn);
            glob[d].mx = std::max(glob[d].mx, local[d].mx);
        }
    }
    std::vector<BranchingWalkSummary> out(D);
    for (std::size_t d = 0; d < D; ++d)
        out[d] = {depths[d], glob[d].mn, glob[d].mx, std::ldexp(1.0, depths[d])};
    return out;
}

double martingale_m2(const CascadeRealization& r, int n) {
    const LevelAcc acc = level_stats(r, n);
    return std::pow(8.0 * r.law().e2(), -n) * acc.sum_x2;
}

double sup_Y(const CascadeRealization& r, int n) {
    const LevelAcc acc = level_stats(r, n);
    return std::pow(8.0 * r.law().e2(), -n) * acc.max_x2;
}

double F_eval(const CascadeRealization& r, int n, double t) {
    check_depth(r, n);
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("F_eval: t outside [0,1]");
    if (t == 0.0) return 0.0;
    if (t == 1.0) return 1.0;
    const double scaled = std::ldexp(t, n);
    std::uint64_t j = static_cast<std::uint64_t>(scaled);
    const std::uint64_t leaves = std::uint64_t{1} << n;
    if (j >= leaves) j = leaves - 1;
    double F = 0.0, mass = 1.0;
    for (int d = 0; d < n; ++d) {
        const std::uint64_t prefix = j >> (n - d);
        const auto [w0, w1] = r.node_weights(prefix, d);
        if ((j >> (n - d - 1)) & 1u) {
            F += mass * w0;
            mass *= w1;
        } else {
            mass *= w0;
        }
    }
    return F + mass * (scaled - static_cast<double>(j));
}

double F_inverse(const CascadeRealization& r, int n, double y, double tol) {
    check_depth(r, n);
    if (!(tol > 0.0)) throw ParameterError("F_inverse: tolerance must be positive");
    if (!(y >= 0.0 && y <= 1.0)) throw DomainError("F_inverse: y outside [0,1]");
    if (y == 0.0) return 0.0;
    if (y == 1.0) return 1.0;
    std::uint64_t bits = 0;
    double cum = 0.0, mass = 1.0;
    for (int d = 0; d < n; ++d) {
        const auto [w0, w1] = r.node_weights(bits, d);
        const double m0 = mass * w0;
        if (y <= cum + m0) {
            bits <<= 1;
            mass = m0;
        } else {
            bits = (bits << 1) | 1u;
            cum += m0;
            mass *= w1;
        }
    }
    const double frac = std::min(std::max((y - cum) / mass, 0.0), 1.0);
    return std::ldexp(static_cast<double>(bits) + frac, -n);
}

void dump_leaf_masses(const CascadeRealization& r, int n, std::ostream& out) {
    if (n < 1 || n > 16) throw ParameterError("leaf-mass dump supports 1 <= n <= 16");
    check_depth(r, n);
    out << "path,mass\n";
    const std::uint64_t leaves = std::uint64_t{1} << n;
    char buf[64];
    for (std::uint64_t v = 0; v < leaves; ++v) {
        const NodePath p{v, n};
        std::snprintf(buf, sizeof buf, "%.17g", leaf_mass(r, p));
        out << p.to_string() << ',' << buf << '\n';
    }
}

namespace serial_ref {

namespace {
void dfs_naive(const CascadeRealization& r, std::uint64_t bits, int depth, int n, double x2,
               double logm, LevelAcc& acc) {
    if (depth == n) {
        acc.sum_x2 += x2;
        acc.max_x2 = std::max(acc.max_x2, x2);
        acc.min_S = std::min(acc.min_S, -logm);
        acc.max_S = std::max(acc.max_S, -logm);
        return;
    }
    const auto [w0, w1] = r.node_weights(bits, depth);
    dfs_naive(r, bits << 1, depth + 1, n, x2 * 4.0 * w0 * w0, logm + std::log(w0), acc);
    dfs_naive(r, (bits << 1) | 1u, depth + 1, n, x2 * 4.0 * w1 * w1, logm + std::log(w1), acc);
}

LevelAcc naive_stats(const CascadeRealization& r, int n) {
    check_depth(r, n);
    LevelAcc acc;
    dfs_naive(r, 0, 0, n, 1.0, 0.0, acc);
    return acc;
}
}  // namespace

double martingale_m2(const CascadeRealization& r, int n) {
    return std::pow(8.0 * r.law().e2(), -n) * naive_stats(r, n).sum_x2;
}

double sup_Y(const CascadeRealization& r, int n) {
    return std::pow(8.0 * r.law().e2(), -n) * naive_stats(r, n).max_x2;
}

BranchingWalkSummary extremal_logmass(const CascadeRealization& r, int n) {
    const LevelAcc acc = naive_stats(r, n);
    return {n, acc.min_S, acc.max_S, std::ldexp(1.0, n)};
}

}  // namespace serial_ref

}  // namespace cascadelab
