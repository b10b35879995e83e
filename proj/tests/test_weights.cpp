#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "cascadelab/errors.hpp"
#include "cascadelab/rng.hpp"
#include "cascadelab/weights.hpp"

using namespace cascadelab;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

std::string write_temp(const char* name, const std::string& body) {
    std::string path = std::string("/tmp/cascadelab_test_") + name;
    std::ofstream out(path);
    out << body;
    return path;
}

std::vector<WeightLaw> battery() {
    std::vector<WeightLaw> laws;
    laws.push_back(WeightLaw::uniform());
    laws.push_back(WeightLaw::symmetric_beta(2.0));
    laws.push_back(WeightLaw::symmetric_beta(5.0));
    laws.push_back(WeightLaw::symmetric_beta(0.5));
    laws.push_back(WeightLaw::symmetric_two_point(0.25));
    laws.push_back(WeightLaw::discrete_symmetric(
        {{0.2, 0.3}, {0.45, 0.2}, {0.55, 0.2}, {0.8, 0.3}}));
    return laws;
}

}  // namespace

TEST_SUITE("weights") {

TEST_CASE("uniform moment closed forms") {
    const WeightLaw u = WeightLaw::uniform();
    // E[W0^p + W1^p] = 2/(p+1) for the uniform weight.
    CHECK(u.moment_sum(1.0) == 1.0);
    CHECK(u.moment_sum(2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(u.moment_sum(3.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(u.moment_sum(-0.5) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(u.moment_sum(-1.0) == kInf);
    CHECK(u.moment_sum(-2.5) == kInf);
    CHECK(u.e2() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(u.variance() == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
    // d/dp E[W0^p + W1^p] at p = 1 is 2 * int_0^1 x ln x dx = -1/2.
    CHECK(u.moment_log_sum(1.0) == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("two point moment closed forms") {
    const WeightLaw tp = WeightLaw::symmetric_two_point(0.25);
    CHECK(tp.moment_sum(3.0) == doctest::Approx(0.4375).epsilon(1e-15));
    CHECK(tp.moment_sum(1.0) == 1.0);
    CHECK(tp.e2() == doctest::Approx(5.0 / 16.0).epsilon(1e-15));
    CHECK(tp.variance() == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
    // Atomic law: every negative moment is finite.
    CHECK(tp.moment_sum(-3.0) == doctest::Approx(std::pow(0.25, -3.0) + std::pow(0.75, -3.0)));
    CHECK(tp.ess_sup_max() == doctest::Approx(0.75));
    CHECK(tp.ess_inf_min() == doctest::Approx(0.25));
}

TEST_CASE("symmetric beta closed forms") {
    // Var(W0) = 1/(4(2a+1)) for Beta(a,a).
    CHECK(WeightLaw::symmetric_beta(2.0).variance() == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(WeightLaw::symmetric_beta(2.0).e2() == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(WeightLaw::symmetric_beta(5.0).variance() ==
          doctest::Approx(1.0 / 44.0).epsilon(1e-14));
    // Beta(1,1) is the uniform weight.
    CHECK(WeightLaw::symmetric_beta(1.0).moment_sum(2.0) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("negative moment divergence thresholds") {
    CHECK(WeightLaw::uniform().neg_divergence_threshold() == doctest::Approx(1.0));
    CHECK(WeightLaw::symmetric_beta(2.0).neg_divergence_threshold() == doctest::Approx(2.0));
    CHECK(WeightLaw::symmetric_beta(0.5).neg_divergence_threshold() == doctest::Approx(0.5));
    CHECK(WeightLaw::symmetric_two_point(0.25).neg_divergence_threshold() == kInf);
    // Divergence is respected by moment_sum itself.
    const WeightLaw b2 = WeightLaw::symmetric_beta(2.0);
    CHECK(std::isfinite(b2.moment_sum(-1.9)));
    CHECK(b2.moment_sum(-2.0) == kInf);
}

TEST_CASE("shared invariants across the battery") {
    for (const WeightLaw& law : battery()) {
        CAPTURE(law.describe());
        // phi(1) = ln E[W0 + W1] = ln 1, exactly.
        CHECK(law.phi(1.0) == 0.0);
        CHECK(law.moment_sum(1.0) == doctest::Approx(1.0).epsilon(1e-14));
        // 1/2 < E[W0^2 + W1^2] < 1 for any nondegenerate pair.
        const double m2 = law.moment_sum(2.0);
        CHECK(m2 > 0.5);
        CHECK(m2 < 1.0);
        CHECK(law.variance() > 0.0);
        CHECK(law.variance() <= 0.25);
        // The two marginals coincide.
        for (double p : {0.5, 1.0, 2.0, 3.0, 5.0}) {
            CHECK(std::abs(law.moment_w0(p) - law.moment_w1(p)) <= 1e-12);
            CHECK(law.moment_w0(p) + law.moment_w1(p) ==
                  doctest::Approx(law.moment_sum(p)).epsilon(1e-12));
        }
    }
}

TEST_CASE("phi is convex and phi_prime matches finite differences") {
    for (const WeightLaw& law : battery()) {
        CAPTURE(law.describe());
        const double h = 1e-5;
        std::vector<double> grid;
        for (double p = 0.25; p <= 6.0; p += 0.25) grid.push_back(p);
        for (std::size_t i = 0; i + 2 < grid.size(); ++i) {
            const double second =
                law.phi(grid[i]) - 2.0 * law.phi(grid[i + 1]) + law.phi(grid[i + 2]);
            CHECK(second >= -1e-9);
        }
        for (double p : {0.7, 1.0, 2.0, 3.5}) {
            const double fd = (law.phi(p + h) - law.phi(p - h)) / (2.0 * h);
            CHECK(law.phi_prime(p) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("sampling identities and determinism") {
    const std::uint64_t seed = 0x5EEDBA5Eu;

    SUBCASE("uniform draw is the raw unit variate") {
        RngStream a(node_key(seed, 1, 2, 3));
        RngStream b(node_key(seed, 1, 2, 3));
        const auto [w0, w1] = WeightLaw::uniform().sample(a);
        const double u = b.next_unit();
        CHECK(w0 == u);
        CHECK(w1 == 1.0 - w0);
    }

    SUBCASE("two point draws hit both atoms") {
        const WeightLaw tp = WeightLaw::symmetric_two_point(0.25);
        RngStream st(node_key(seed, 0, 0, 0));
        bool saw_low = false, saw_high = false;
        for (int i = 0; i < 64; ++i) {
            const auto [w0, w1] = tp.sample(st);
            CHECK((w0 == 0.25 || w0 == 0.75));
            CHECK(w1 == 1.0 - w0);
            saw_low = saw_low || w0 == 0.25;
            saw_high = saw_high || w0 == 0.75;
        }
        CHECK(saw_low);
        CHECK(saw_high);
    }

    SUBCASE("same stream state gives the same draw") {
        for (const WeightLaw& law : battery()) {
            RngStream a(node_key(seed, 4, 9, 1));
            RngStream b(node_key(seed, 4, 9, 1));
            const auto da = law.sample(a);
            const auto db = law.sample(b);
            CHECK(da.first == db.first);
            CHECK(da.second == db.second);
        }
    }

    SUBCASE("empirical second moment matches the oracle") {
        for (const WeightLaw& law : battery()) {
            CAPTURE(law.describe());
            RngStream st(node_key(seed, 7, 7, 7));
            const int n = 20000;
            double sum2 = 0.0;
            for (int i = 0; i < n; ++i) {
                const auto [w0, w1] = law.sample(st);
                CHECK(w0 > 0.0);
                CHECK(w0 < 1.0);
                sum2 += w0 * w0;
            }
            const double est = sum2 / n;
            // Var(W0^2) <= 1/4, so 3 standard errors are below 0.011.
            CHECK(std::abs(est - law.e2()) < 0.011);
        }
    }
}

TEST_CASE("law grammar parsing") {
    CHECK(parse_law("uniform").kind() == LawKind::Uniform);
    CHECK(parse_law("beta:2").kind() == LawKind::SymmetricBeta);
    CHECK(parse_law("beta:2").beta_alpha() == doctest::Approx(2.0));
    CHECK(parse_law("twopoint:0.25").two_point_a() == doctest::Approx(0.25));

    CHECK_THROWS_AS(parse_law("twopoint:0.7"), InvalidLaw);
    CHECK_THROWS_AS(parse_law("twopoint:0.5"), DegenerateLaw);
    CHECK_THROWS_AS(parse_law("twopoint:0"), InvalidLaw);
    CHECK_THROWS_AS(parse_law("beta:0"), InvalidLaw);
    CHECK_THROWS_AS(parse_law("beta:-1"), InvalidLaw);
    CHECK_THROWS_AS(parse_law("beta:oops"), InvalidLaw);
    CHECK_THROWS_AS(parse_law("bogus"), InvalidLaw);
    CHECK_THROWS_AS(parse_law("discrete:missing-at-sign.csv"), InvalidLaw);
    CHECK_THROWS_AS(parse_law("density:@/no/such/file.csv"), InvalidLaw);
}

TEST_CASE("discrete law validation") {
    CHECK_THROWS_AS(WeightLaw::discrete_symmetric({}), InvalidLaw);
    CHECK_THROWS_AS(WeightLaw::discrete_symmetric({{0.5, 1.0}}), DegenerateLaw);
    CHECK_THROWS_AS(WeightLaw::discrete_symmetric({{0.3, 1.0}}), InvalidLaw);
    CHECK_THROWS_AS(WeightLaw::discrete_symmetric({{0.3, 0.6}, {0.7, 0.6}}), InvalidLaw);
    CHECK_THROWS_AS(WeightLaw::discrete_symmetric({{-0.1, 0.5}, {1.1, 0.5}}), InvalidLaw);

    // A mirror pair at {1/4, 3/4} is the symmetric two-point law.
    const WeightLaw d = WeightLaw::discrete_symmetric({{0.25, 0.5}, {0.75, 0.5}});
    const WeightLaw tp = WeightLaw::symmetric_two_point(0.25);
    for (double p : {0.5, 2.0, 3.0, -1.0}) {
        CHECK(d.moment_sum(p) == doctest::Approx(tp.moment_sum(p)).epsilon(1e-15));
    }
    CHECK(d.ess_sup_max() == doctest::Approx(0.75));
    CHECK(d.ess_inf_min() == doctest::Approx(0.25));
    CHECK(d.neg_divergence_threshold() == kInf);
}

TEST_CASE("discrete csv loader") {
    const std::string path = write_temp("discrete.csv",
                                        "# comment line\n"
                                        "value,prob\n"
                                        "0.25, 0.5\n"
                                        "# interior comment\n"
                                        "0.75 0.5\n");
    const WeightLaw law = WeightLaw::discrete_symmetric_csv(path);
    CHECK(law.kind() == LawKind::DiscreteSymmetric);
    CHECK(law.moment_sum(3.0) == doctest::Approx(0.4375).epsilon(1e-15));

    const WeightLaw via_grammar = parse_law("discrete:@" + path);
    CHECK(via_grammar.moment_sum(3.0) == doctest::Approx(0.4375).epsilon(1e-15));

    const std::string bad = write_temp("discrete_bad.csv", "0.25,0.5\nnot,a,number,row\n");
    CHECK_THROWS_AS(WeightLaw::discrete_symmetric_csv(bad), InvalidLaw);
    const std::string empty = write_temp("discrete_empty.csv", "# nothing\n");
    CHECK_THROWS_AS(WeightLaw::discrete_symmetric_csv(empty), InvalidLaw);
    std::remove(path.c_str());
    std::remove(bad.c_str());
    std::remove(empty.c_str());
}

TEST_CASE("numeric density reproduces closed forms") {
    SUBCASE("constant table is the uniform law") {
        std::vector<double> xs, fs;
        for (int i = 0; i < 64; ++i) {
            xs.push_back((i + 0.5) / 64.0);
            fs.push_back(1.0);
        }
        const WeightLaw num = WeightLaw::numeric_density(xs, fs);
        CHECK(num.moment_sum(2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
        CHECK(num.moment_sum(0.5) == doctest::Approx(4.0 / 3.0).epsilon(1e-8));
        CHECK(num.variance() == doctest::Approx(1.0 / 12.0).epsilon(1e-7));
        CHECK(num.phi(1.0) == 0.0);
        // Flat endpoint fit: f ~ c x^0 puts the true threshold at p = 1; the
        // table keeps a 0.15 safety margin on the extrapolated exponent.
        CHECK(num.neg_divergence_threshold() == doctest::Approx(0.85).epsilon(0.01));
        CHECK(num.moment_sum(-0.9) == std::numeric_limits<double>::infinity());
    }

    SUBCASE("x(1-x) table matches the beta(2) law") {
        std::vector<double> xs, fs;
        const int n = 1024;
        for (int i = 0; i < n; ++i) {
            const double x = (i + 0.5) / n;
            xs.push_back(x);
            fs.push_back(x * (1.0 - x));
        }
        const WeightLaw num = WeightLaw::numeric_density(xs, fs);
        const WeightLaw b2 = WeightLaw::symmetric_beta(2.0);
        CHECK(num.e2() == doctest::Approx(b2.e2()).epsilon(2e-5));
        CHECK(num.moment_sum(3.0) == doctest::Approx(b2.moment_sum(3.0)).epsilon(2e-5));
        CHECK(num.variance() == doctest::Approx(0.05).epsilon(1e-3));
    }

    SUBCASE("sampling from a table follows its quantile") {
        std::vector<double> xs, fs;
        for (int i = 0; i < 128; ++i) {
            const double x = (i + 0.5) / 128.0;
            xs.push_back(x);
            fs.push_back(1.0 + 0.8 * std::sin(2.0 * 3.14159265358979323846 * x));
        }
        const WeightLaw num = WeightLaw::numeric_density(xs, fs);
        RngStream st(node_key(0xABCDEFu, 0, 0, 0));
        double sum = 0.0, sum2 = 0.0;
        const int n = 20000;
        for (int i = 0; i < n; ++i) {
            const auto [w0, w1] = num.sample(st);
            CHECK(w0 > 0.0);
            CHECK(w0 < 1.0);
            CHECK(w1 == 1.0 - w0);
            sum += w0;
            sum2 += w0 * w0;
        }
        CHECK(std::abs(sum / n - 0.5) < 0.01);
        CHECK(std::abs(sum2 / n - num.e2()) < 0.011);
    }

    SUBCASE("table validation") {
        CHECK_THROWS_AS(WeightLaw::numeric_density({0.5}, {1.0}), InvalidLaw);
        CHECK_THROWS_AS(WeightLaw::numeric_density({0.2, 0.2}, {1.0, 1.0}), InvalidLaw);
        CHECK_THROWS_AS(WeightLaw::numeric_density({0.0, 0.5}, {1.0, 1.0}), InvalidLaw);
        CHECK_THROWS_AS(WeightLaw::numeric_density({0.2, 0.8}, {1.0, -1.0}), InvalidLaw);
        CHECK_THROWS_AS(WeightLaw::numeric_density({0.2, 0.8}, {0.0, 0.0}), InvalidLaw);
        CHECK_THROWS_AS(WeightLaw::numeric_density({0.2, 0.8}, {1.0, 1.0}, 0.0), InvalidLaw);
    }
}

TEST_CASE("density csv loader round trip") {
    std::string body = "x,f\n";
    char buf[64];
    for (int i = 0; i < 64; ++i) {
        const double x = (i + 0.5) / 64.0;
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x, 1.0);
        body += buf;
    }
    const std::string path = write_temp("density.csv", body);
    const WeightLaw law = WeightLaw::numeric_density_csv(path);
    CHECK(law.kind() == LawKind::NumericDensity);
    CHECK(law.moment_sum(2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
    const WeightLaw via_grammar = parse_law("density:@" + path);
    CHECK(via_grammar.moment_sum(2.0) == doctest::Approx(law.moment_sum(2.0)).epsilon(1e-15));
    std::remove(path.c_str());
}

TEST_CASE("describe and config echo") {
    CHECK(WeightLaw::uniform().describe() == "uniform");
    CHECK(WeightLaw::symmetric_two_point(0.25).describe().find("twopoint") == 0);
    CHECK(WeightLaw::symmetric_beta(2.0).describe().find("beta") == 0);

    CHECK(WeightLaw::uniform().to_json()["variant"] == "uniform");
    const auto j = WeightLaw::symmetric_beta(2.0).to_json();
    CHECK(j["variant"] == "beta");
    CHECK(j["alpha"].get<double>() == doctest::Approx(2.0));
    const auto jd = WeightLaw::discrete_symmetric({{0.25, 0.5}, {0.75, 0.5}}).to_json();
    CHECK(jd["variant"] == "discrete");
    CHECK(jd["atoms"].size() == 2);
}

}  // TEST_SUITE
