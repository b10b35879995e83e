#include "cascadelab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cascadelab/errors.hpp"
#include "cascadelab/rng.hpp"
#include "cascadelab/special.hpp"

namespace cascadelab {

namespace {

constexpr double kGridLo = 1.0;
constexpr double kGridHi = 2.0;

void check_p(double p) {
    if (!(p > 0.0)) throw DomainError("moment order p must be positive");
}

// forward differences of K over [1,2] with the given step; returns the max
// and the left endpoint where it occurs
std::pair<double, double> scan_forward_diffs(const SimplexLaw& V, double step) {
    if (!(step > 0.0 && step < 1.0)) throw ParameterError("grid step must lie in (0,1)");
    const int nsteps = static_cast<int>(std::floor((kGridHi - kGridLo) / step + 1e-9));
    double best = -std::numeric_limits<double>::infinity();
    double p_at = kGridLo;
    double k_prev = V.K(kGridLo);
    for (int i = 0; i < nsteps; ++i) {
        const double p = kGridLo + i * step;
        const double k_next = V.K(kGridLo + (i + 1) * step);
        const double diff = k_next - k_prev;
        if (diff > best) {
            best = diff;
            p_at = p;
        }
        k_prev = k_next;
    }
    return {best, p_at};
}

}  // namespace

SimplexLaw SimplexLaw::discrete_atoms(int d, std::vector<SimplexAtom> atoms) {
    if (d < 2) throw DimensionError("the simplex needs d >= 2");
    if (atoms.empty()) throw ParameterError("at least one atom is required");
    double qsum = 0.0;
    for (auto& a : atoms) {
        if (static_cast<int>(a.v.size()) != d)
            throw DimensionError("atom coordinate count does not match d");
        double vsum = 0.0;
        for (double x : a.v) {
            if (!(x >= 0.0) || !std::isfinite(x))
                throw InvalidLaw("atom coordinates must be finite and nonnegative");
            vsum += x;
        }
        if (std::abs(vsum - 1.0) > 1e-9) throw InvalidLaw("atom coordinates must sum to 1");
        for (double& x : a.v) x /= vsum;
        if (!(a.prob > 0.0) || !std::isfinite(a.prob))
            throw InvalidLaw("atom probabilities must be positive");
        qsum += a.prob;
    }
    if (std::abs(qsum - 1.0) > 1e-9) throw InvalidLaw("atom probabilities must sum to 1");
    for (auto& a : atoms) a.prob /= qsum;
    SimplexLaw V;
    V.kind_ = SimplexKind::DiscreteAtoms;
    V.d_ = d;
    V.atoms_ = std::move(atoms);
    return V;
}

SimplexLaw SimplexLaw::dirichlet_symmetric(int d, double alpha) {
    if (d < 2) throw DimensionError("the simplex needs d >= 2");
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw ParameterError("Dirichlet concentration must be positive");
    SimplexLaw V;
    V.kind_ = SimplexKind::DirichletSymmetric;
    V.d_ = d;
    V.alpha_ = alpha;
    return V;
}

SimplexLaw SimplexLaw::two_d(WeightLaw law) {
    SimplexLaw V;
    V.kind_ = SimplexKind::TwoDFromWeightLaw;
    V.d_ = 2;
    V.wlaw_.push_back(std::move(law));
    return V;
}

double SimplexLaw::A(double p) const {
    check_p(p);
    switch (kind_) {
        case SimplexKind::DiscreteAtoms: {
            double sum = 0.0;
            for (const auto& a : atoms_) {
                double inner = 0.0;
                for (double v : a.v)
                    if (v > 0.0) inner += std::pow(v, p);
                sum += a.prob * inner;
            }
            return sum;
        }
        case SimplexKind::DirichletSymmetric: {
            // each coordinate is Beta(alpha, (d-1) alpha)
            const double c = (d_ - 1) * alpha_;
            return d_ * std::exp(lbeta(alpha_ + p, c) - lbeta(alpha_, c));
        }
        case SimplexKind::TwoDFromWeightLaw:
            return wlaw_.front().moment_sum(p);
    }
    throw ConsistencyError("unreachable simplex kind");
}

double SimplexLaw::A_log(double p) const {
    check_p(p);
    switch (kind_) {
        case SimplexKind::DiscreteAtoms: {
            double sum = 0.0;
            for (const auto& a : atoms_) {
                double inner = 0.0;
                for (double v : a.v)
                    if (v > 0.0) inner += std::pow(v, p) * std::log(v);
                sum += a.prob * inner;
            }
            return sum;
        }
        case SimplexKind::DirichletSymmetric:
            // d/dp of lbeta(alpha+p, c) is psi(alpha+p) - psi(d alpha + p)
            return A(p) * (digamma(alpha_ + p) - digamma(d_ * alpha_ + p));
        case SimplexKind::TwoDFromWeightLaw:
            return wlaw_.front().moment_log_sum(p);
    }
    throw ConsistencyError("unreachable simplex kind");
}

double SimplexLaw::K(double p) const {
    check_p(p);
    if (p == 1.0) return 0.0;  // sum of coordinates is 1 by construction
    return std::log(A(p)) / p;
}

double SimplexLaw::c_cross() const {
    if (d_ != 2) throw DimensionError("the cross moment is a d = 2 quantity");
    switch (kind_) {
        case SimplexKind::DiscreteAtoms: {
            double sum = 0.0;
            for (const auto& a : atoms_) sum += a.prob * a.v[0] * a.v[1];
            return sum;
        }
        case SimplexKind::DirichletSymmetric:
            // E[V0 V1] = E[V0] - E[V0^2] with V0 ~ Beta(alpha, alpha)
            return alpha_ / (2.0 * (2.0 * alpha_ + 1.0));
        case SimplexKind::TwoDFromWeightLaw:
            return 0.5 - wlaw_.front().e2();
    }
    throw ConsistencyError("unreachable simplex kind");
}

nlohmann::ordered_json SimplexLaw::to_json() const {
    nlohmann::ordered_json j;
    j["d"] = d_;
    switch (kind_) {
        case SimplexKind::DiscreteAtoms: {
            j["kind"] = "atoms";
            nlohmann::ordered_json arr = nlohmann::ordered_json::array();
            for (const auto& a : atoms_) {
                nlohmann::ordered_json ja;
                ja["v"] = a.v;
                ja["prob"] = a.prob;
                arr.push_back(std::move(ja));
            }
            j["atoms"] = std::move(arr);
            break;
        }
        case SimplexKind::DirichletSymmetric:
            j["kind"] = "dirichlet";
            j["alpha"] = alpha_;
            break;
        case SimplexKind::TwoDFromWeightLaw:
            j["kind"] = "weight_pair";
            j["law"] = wlaw_.front().to_json();
            break;
    }
    return j;
}

MonotonicityReport monotonicity_report(const SimplexLaw& V, double grid_step) {
    if (!(grid_step > 0.0 && grid_step <= 0.1))
        throw ParameterError("grid step must lie in (0, 0.1]");
    const auto [best, p_at] = scan_forward_diffs(V, grid_step);
    MonotonicityReport rep;
    rep.grid_step = grid_step;
    rep.max_forward_diff = best;
    rep.p_at_max = p_at;
    rep.pass = best <= 1e-10;
    return rep;
}

L3L2Check l3l2_identity_check(const SimplexLaw& V) {
    if (V.dimension() != 2) throw DimensionError("the cubic identity is a d = 2 statement");
    L3L2Check chk;
    chk.c = V.c_cross();
    const double c = chk.c;
    chk.lhs = (1.0 - 2.0 * c) * (1.0 - 2.0 * c) * (1.0 - 2.0 * c) -
              (1.0 - 3.0 * c) * (1.0 - 3.0 * c);
    const double a2 = V.A(2.0), a3 = V.A(3.0);
    chk.rhs = a2 * a2 * a2 - a3 * a3;
    chk.gap = chk.lhs - chk.rhs;
    return chk;
}

double inequality_gap(const SimplexLaw& V, double p) {
    const double a = V.A(p);
    return p * V.A_log(p) - a * std::log(a);
}

nlohmann::ordered_json SearchResult::to_json() const {
    nlohmann::ordered_json j;
    j["dimension"] = dimension;
    j["violation"] = violation;
    j["p_at"] = p_at;
    j["evaluations"] = evaluations;
    j["seed"] = seed;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& a : atoms) {
        nlohmann::ordered_json ja;
        ja["v"] = a.v;
        ja["prob"] = a.prob;
        arr.push_back(std::move(ja));
    }
    j["atoms"] = std::move(arr);
    return j;
}

namespace {

double sigmoid(double y) {
    const double z = std::clamp(y, -30.0, 30.0);
    return 1.0 / (1.0 + std::exp(-z));
}

// parameter vector layout: n_atoms blocks of d softmax logits, then
// n_atoms - 1 stick-breaking logits for the probabilities
std::vector<SimplexAtom> decode_atoms(const std::vector<double>& x, int d, int n_atoms) {
    std::vector<SimplexAtom> atoms(static_cast<std::size_t>(n_atoms));
    for (int a = 0; a < n_atoms; ++a) {
        auto& v = atoms[static_cast<std::size_t>(a)].v;
        v.resize(static_cast<std::size_t>(d));
        const std::size_t off = static_cast<std::size_t>(a) * static_cast<std::size_t>(d);
        double zmax = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < d; ++i) zmax = std::max(zmax, x[off + static_cast<std::size_t>(i)]);
        double sum = 0.0;
        for (int i = 0; i < d; ++i) {
            const double e = std::exp(x[off + static_cast<std::size_t>(i)] - zmax);
            v[static_cast<std::size_t>(i)] = e;
            sum += e;
        }
        for (double& vi : v) vi /= sum;
    }
    double rem = 1.0;
    const std::size_t poff = static_cast<std::size_t>(n_atoms) * static_cast<std::size_t>(d);
    for (int a = 0; a + 1 < n_atoms; ++a) {
        const double q = rem * sigmoid(x[poff + static_cast<std::size_t>(a)]);
        atoms[static_cast<std::size_t>(a)].prob = q;
        rem -= q;
    }
    atoms[static_cast<std::size_t>(n_atoms - 1)].prob = rem;
    return atoms;
}

struct NmOutcome {
    std::vector<double> x;
    double f = 0.0;
    long evals = 0;
};

NmOutcome nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                      const std::vector<double>& x0, double step, long max_evals) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> fv(n + 1);
    for (std::size_t i = 1; i <= n; ++i) pts[i][i - 1] += step;
    NmOutcome out;
    for (std::size_t i = 0; i <= n; ++i) {
        if (i > 0 && out.evals >= max_evals) {
            fv[i] = std::numeric_limits<double>::infinity();
            continue;
        }
        fv[i] = f(pts[i]);
        ++out.evals;
    }
    std::vector<std::size_t> ord(n + 1);
    auto reorder = [&] {
        for (std::size_t i = 0; i <= n; ++i) ord[i] = i;
        std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) {
            return fv[a] < fv[b] || (fv[a] == fv[b] && a < b);
        });
    };
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    while (out.evals < max_evals) {
        reorder();
        const std::size_t best = ord[0], worst = ord[n], second = ord[n - 1];
        if (fv[worst] - fv[best] < 1e-12 * std::max(1.0, std::abs(fv[best]))) break;
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i <= n; ++i)
                if (i != worst) s += pts[i][j];
            centroid[j] = s / static_cast<double>(n);
        }
        for (std::size_t j = 0; j < n; ++j) xr[j] = centroid[j] + (centroid[j] - pts[worst][j]);
        const double fr = f(xr);
        ++out.evals;
        if (fr < fv[best]) {
            for (std::size_t j = 0; j < n; ++j)
                xe[j] = centroid[j] + 2.0 * (centroid[j] - pts[worst][j]);
            const double fe = f(xe);
            ++out.evals;
            if (fe < fr) {
                pts[worst] = xe;
                fv[worst] = fe;
            } else {
                pts[worst] = xr;
                fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            pts[worst] = xr;
            fv[worst] = fr;
        } else {
            const bool outside = fr < fv[worst];
            const std::vector<double>& base = outside ? xr : pts[worst];
            for (std::size_t j = 0; j < n; ++j) xc[j] = centroid[j] + 0.5 * (base[j] - centroid[j]);
            const double fc = f(xc);
            ++out.evals;
            if (fc < (outside ? fr : fv[worst])) {
                pts[worst] = xc;
                fv[worst] = fc;
            } else {  // shrink toward the best vertex
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t j = 0; j < n; ++j)
                        pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
                    fv[i] = f(pts[i]);
                    ++out.evals;
                    if (out.evals >= max_evals) break;
                }
            }
        }
    }
    reorder();
    out.x = pts[ord[0]];
    out.f = fv[ord[0]];
    return out;
}

}  // namespace

SearchResult counterexample_search(int d, long budget, std::uint64_t seed) {
    if (d < 2) throw DimensionError("the simplex needs d >= 2");
    if (budget < 1) throw ParameterError("the search budget must be positive");
    constexpr double kStep = 0.005;
    const int n_restarts = static_cast<int>(std::clamp<long>(budget / 400, 1, 12));
    const long per = budget / n_restarts;

    struct Cand {
        double violation = -std::numeric_limits<double>::infinity();
        double p_at = kGridLo;
        std::vector<SimplexAtom> atoms;
        long evals = 0;
    };
    std::vector<Cand> cands(static_cast<std::size_t>(n_restarts));

#pragma omp parallel for schedule(dynamic)
    for (int rs = 0; rs < n_restarts; ++rs) {
        const int n_atoms = rs == 0 ? 2 : 2 + rs % 3;
        const std::size_t dim =
            static_cast<std::size_t>(n_atoms) * static_cast<std::size_t>(d) +
            static_cast<std::size_t>(n_atoms - 1);
        std::vector<double> x0(dim, 0.0);
        if (rs == 0) {
            // one vertex atom at high probability plus the barycenter: the
            // configuration that produces nonmonotone K in high dimension
            x0[0] = 12.0;                                 // first atom near e_1
            x0[static_cast<std::size_t>(n_atoms) * d] = std::log(9.0);  // prob ~ 0.9
        } else {
            RngStream g = salted_stream(seed, 0x9e3779b900ULL + static_cast<std::uint64_t>(rs));
            for (std::size_t i = 0; i < dim - static_cast<std::size_t>(n_atoms - 1); ++i)
                x0[i] = 2.0 * g.next_normal();
            for (std::size_t i = dim - static_cast<std::size_t>(n_atoms - 1); i < dim; ++i)
                x0[i] = 1.5 * g.next_normal();
        }
        auto objective = [&](const std::vector<double>& x) {
            const SimplexLaw V = SimplexLaw::discrete_atoms(d, decode_atoms(x, d, n_atoms));
            return -scan_forward_diffs(V, kStep).first;
        };
        const NmOutcome nm = nelder_mead(objective, x0, rs == 0 ? 0.25 : 0.5, per);
        Cand c;
        c.atoms = decode_atoms(nm.x, d, n_atoms);
        const SimplexLaw V = SimplexLaw::discrete_atoms(d, c.atoms);
        const auto [viol, p_at] = scan_forward_diffs(V, kStep);
        c.violation = viol;
        c.p_at = p_at;
        c.evals = nm.evals;
        cands[static_cast<std::size_t>(rs)] = std::move(c);
    }

    int best = 0;
    long total = 0;
    for (int rs = 0; rs < n_restarts; ++rs) {
        total += cands[static_cast<std::size_t>(rs)].evals;
        if (cands[static_cast<std::size_t>(rs)].violation >
            cands[static_cast<std::size_t>(best)].violation)
            best = rs;
    }
    SearchResult out;
    out.dimension = d;
    out.atoms = std::move(cands[static_cast<std::size_t>(best)].atoms);
    out.violation = cands[static_cast<std::size_t>(best)].violation;
    out.p_at = cands[static_cast<std::size_t>(best)].p_at;
    out.evaluations = total;
    out.seed = seed;
    return out;
}

}  // namespace cascadelab
