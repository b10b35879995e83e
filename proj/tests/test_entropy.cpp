#include <doctest.h>

#include <cmath>
#include <vector>

#include "cascadelab/entropy.hpp"
#include "cascadelab/errors.hpp"
#include "cascadelab/weights.hpp"

using namespace cascadelab;

namespace {

SimplexLaw vertex_pair() {
    return SimplexLaw::discrete_atoms(2, {{{1.0, 0.0}, 0.5}, {{0.0, 1.0}, 0.5}});
}

// One vertex atom at probability 0.9 plus the barycenter: the structured
// configuration whose K(p) fails to be nondecreasing once d is large.
SimplexLaw vertex_barycenter(int d, double p_vertex) {
    std::vector<double> vertex(static_cast<std::size_t>(d), 0.0);
    vertex[0] = 1.0;
    std::vector<double> center(static_cast<std::size_t>(d), 1.0 / d);
    return SimplexLaw::discrete_atoms(
        d, {{vertex, p_vertex}, {center, 1.0 - p_vertex}});
}

}  // namespace

TEST_SUITE("entropy") {

TEST_CASE("two_d laws inherit the weight moment oracles") {
    const SimplexLaw u = SimplexLaw::two_d(WeightLaw::uniform());
    CHECK(u.dimension() == 2);
    CHECK(u.A(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(u.A(2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(u.A(3.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(u.K(1.0) == 0.0);
    CHECK(u.K(2.0) == doctest::Approx(0.5 * std::log(2.0 / 3.0)).epsilon(1e-14));
    CHECK(u.K(2.0) == doctest::Approx(-0.202732554054082).epsilon(1e-12));
    CHECK(u.A_log(1.0) == doctest::Approx(-0.5).epsilon(1e-13));
    CHECK(u.c_cross() == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("dirichlet closed forms") {
    // Symmetric Dirichlet: E[V_1^p] = Gamma(a+p) Gamma(d a) / (Gamma(a) Gamma(d a + p)).
    const SimplexLaw d31 = SimplexLaw::dirichlet_symmetric(3, 1.0);
    CHECK(d31.A(2.0) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(d31.K(2.0) == doctest::Approx(0.5 * std::log(0.5)).epsilon(1e-12));
    CHECK(d31.K(1.0) == 0.0);

    // d = 2 Dirichlet(a) is the symmetric beta weight pair.
    for (double alpha : {0.5, 1.0, 2.0, 7.0}) {
        const SimplexLaw dir = SimplexLaw::dirichlet_symmetric(2, alpha);
        const SimplexLaw two = SimplexLaw::two_d(WeightLaw::symmetric_beta(alpha));
        for (double p : {1.0, 1.3, 2.0, 2.8}) {
            CHECK(dir.A(p) == doctest::Approx(two.A(p)).epsilon(1e-11));
            CHECK(dir.A_log(p) == doctest::Approx(two.A_log(p)).epsilon(1e-9));
        }
        // c = alpha / (2 (2 alpha + 1)).
        CHECK(dir.c_cross() ==
              doctest::Approx(alpha / (2.0 * (2.0 * alpha + 1.0))).epsilon(1e-12));
    }

    CHECK_THROWS_AS(SimplexLaw::dirichlet_symmetric(1, 1.0), DimensionError);
    CHECK_THROWS_AS(SimplexLaw::dirichlet_symmetric(3, 0.0), ParameterError);
}

TEST_CASE("discrete atom validation") {
    CHECK_THROWS_AS(SimplexLaw::discrete_atoms(1, {{{1.0}, 1.0}}), DimensionError);
    CHECK_THROWS_AS(SimplexLaw::discrete_atoms(2, {}), ParameterError);
    CHECK_THROWS_AS(SimplexLaw::discrete_atoms(2, {{{0.5, 0.5, 0.0}, 1.0}}), DimensionError);
    CHECK_THROWS_AS(SimplexLaw::discrete_atoms(2, {{{0.7, 0.2}, 1.0}}), InvalidLaw);
    CHECK_THROWS_AS(SimplexLaw::discrete_atoms(2, {{{-0.1, 1.1}, 1.0}}), InvalidLaw);
    CHECK_THROWS_AS(SimplexLaw::discrete_atoms(2, {{{0.5, 0.5}, 0.4}}), InvalidLaw);
}

TEST_CASE("inequality gap for the pair dimension") {
    const SimplexLaw u = SimplexLaw::two_d(WeightLaw::uniform());
    // p = 1: the gap reduces to A_log(1) = -1/2.
    CHECK(inequality_gap(u, 1.0) == doctest::Approx(-0.5).epsilon(1e-13));
    CHECK(inequality_gap(u, 2.0) == doctest::Approx(-0.174134372372335).epsilon(1e-12));

    // gap(p) = p^2 A(p) K'(p); cross-check the derivative numerically.
    for (double p : {1.2, 1.5, 2.0}) {
        const double h = 1e-6;
        const double kprime = (u.K(p + h) - u.K(p - h)) / (2.0 * h);
        CHECK(inequality_gap(u, p) ==
              doctest::Approx(p * p * u.A(p) * kprime).epsilon(1e-5));
    }

    // Nonpositive on [1,2] for a spread of d = 2 laws.
    std::vector<SimplexLaw> laws;
    laws.push_back(u);
    laws.push_back(SimplexLaw::two_d(WeightLaw::symmetric_beta(2.0)));
    laws.push_back(SimplexLaw::two_d(WeightLaw::symmetric_two_point(0.25)));
    laws.push_back(SimplexLaw::dirichlet_symmetric(2, 0.7));
    laws.push_back(SimplexLaw::discrete_atoms(
        2, {{{0.3, 0.7}, 0.25}, {{0.7, 0.3}, 0.25}, {{0.5, 0.5}, 0.5}}));
    for (const SimplexLaw& law : laws) {
        for (int i = 0; i <= 20; ++i) {
            const double p = 1.0 + i / 20.0;
            CHECK(inequality_gap(law, p) <= 1e-12);
        }
    }
}

TEST_CASE("monotonicity report") {
    const auto rep = monotonicity_report(SimplexLaw::two_d(WeightLaw::uniform()), 0.005);
    CHECK(rep.pass);
    CHECK(rep.max_forward_diff <= 1e-10);
    CHECK(rep.grid_step == 0.005);

    CHECK_THROWS_AS(monotonicity_report(vertex_pair(), 0.0), ParameterError);
    CHECK_THROWS_AS(monotonicity_report(vertex_pair(), 0.2), ParameterError);
}

TEST_CASE("vertex atoms sit on the equality case") {
    const SimplexLaw v = vertex_pair();
    // sum V_i^p = 1 identically, so every functional collapses.
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
        CHECK(v.A(p) == 1.0);
        CHECK(v.K(p) == 0.0);
        CHECK(inequality_gap(v, p) == 0.0);
    }
    const auto rep = monotonicity_report(v, 0.005);
    CHECK(rep.max_forward_diff == 0.0);
    CHECK(rep.pass);
    const L3L2Check chk = l3l2_identity_check(v);
    CHECK(chk.c == 0.0);
    CHECK(chk.lhs == 0.0);
    CHECK(chk.rhs == 0.0);
}

TEST_CASE("cubic-quadratic norm identity") {
    const L3L2Check u = l3l2_identity_check(SimplexLaw::two_d(WeightLaw::uniform()));
    CHECK(u.c == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(u.lhs == doctest::Approx(5.0 / 108.0).epsilon(1e-13));
    CHECK(u.rhs == doctest::Approx(5.0 / 108.0).epsilon(1e-13));
    CHECK(std::abs(u.gap) <= 1e-14);

    for (double alpha : {0.5, 2.0, 6.0}) {
        const L3L2Check chk = l3l2_identity_check(SimplexLaw::dirichlet_symmetric(2, alpha));
        CAPTURE(alpha);
        // lhs = c^2 (3 - 8c) in expanded form; both sides agree to rounding.
        CHECK(chk.lhs == doctest::Approx(chk.c * chk.c * (3.0 - 8.0 * chk.c)).epsilon(1e-11));
        CHECK(std::abs(chk.gap) <= 1e-12);
    }
    CHECK_THROWS_AS(l3l2_identity_check(SimplexLaw::dirichlet_symmetric(3, 1.0)),
                    DimensionError);
}

TEST_CASE("monotonicity fails in high dimension") {
    // d = 17, vertex at 0.9: K decreases on part of [1, 2].
    const SimplexLaw bad = vertex_barycenter(17, 0.9);
    const auto rep = monotonicity_report(bad, 0.005);
    CHECK_FALSE(rep.pass);
    // Per-step forward difference: small in absolute size but five orders
    // above the 1e-10 pass gate.
    CHECK(rep.max_forward_diff > 1e-5);
    CHECK(rep.p_at_max > 1.0);

    // The same construction at d = 2 stays monotone.
    const auto ok = monotonicity_report(vertex_barycenter(2, 0.9), 0.005);
    CHECK(ok.pass);
}

TEST_CASE("counterexample search") {
    const SearchResult r = counterexample_search(17, 1500, 42);
    CHECK(r.dimension == 17);
    CHECK(r.violation > 0.0);
    CHECK(r.evaluations >= 1);
    CHECK(r.evaluations <= 1500);
    CHECK_FALSE(r.atoms.empty());
    // The reported candidate reproduces the reported violation.
    const SimplexLaw best = SimplexLaw::discrete_atoms(17, r.atoms);
    const auto rep = monotonicity_report(best, 0.005);
    CHECK(rep.max_forward_diff == doctest::Approx(r.violation).epsilon(1e-12));

    // Deterministic in (d, budget, seed).
    const SearchResult again = counterexample_search(17, 1500, 42);
    CHECK(again.violation == r.violation);
    CHECK(again.p_at == r.p_at);
    CHECK(again.evaluations == r.evaluations);
    REQUIRE(again.atoms.size() == r.atoms.size());
    for (std::size_t i = 0; i < r.atoms.size(); ++i) {
        CHECK(again.atoms[i].prob == r.atoms[i].prob);
        for (std::size_t k = 0; k < r.atoms[i].v.size(); ++k) {
            CHECK(again.atoms[i].v[k] == r.atoms[i].v[k]);
        }
    }

    // A unit budget still returns the single evaluated candidate.
    const SearchResult tiny = counterexample_search(5, 1, 9);
    CHECK(tiny.evaluations == 1);
    CHECK_FALSE(tiny.atoms.empty());
    CHECK(std::isfinite(tiny.violation));

    CHECK_THROWS_AS(counterexample_search(1, 100, 0), DimensionError);
    CHECK_THROWS_AS(counterexample_search(4, 0, 0), ParameterError);
}

TEST_CASE("domain guards") {
    const SimplexLaw u = SimplexLaw::two_d(WeightLaw::uniform());
    CHECK_THROWS_AS(u.A(0.0), DomainError);
    CHECK_THROWS_AS(u.A(-1.0), DomainError);
    CHECK_THROWS_AS(SimplexLaw::dirichlet_symmetric(3, 1.0).c_cross(), DimensionError);
}

}  // TEST_SUITE
