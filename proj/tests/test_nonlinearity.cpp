#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "netblow/functionals.hpp"
#include "netblow/nonlinearity.hpp"
#include "netblow/quadrature.hpp"
#include "netblow/rng.hpp"

using namespace netblow;

TEST_CASE("families: F agrees with quadrature of f") {
    const Nonlinearity cases[] = {
        Nonlinearity::power(2.0),
        Nonlinearity::power(3.5),
        Nonlinearity::linear(1.5),
        Nonlinearity::polynomial({0.5, 0.0, 2.0}),
        Nonlinearity::custom([](double u) { return u * std::log1p(u); }),
    };
    for (const auto& f : cases) {
        for (double u = 1e-3; u <= 64.0; u *= 4.0) {
            const double direct = f.F(u);
            const double quad = adaptive_simpson([&](double s) { return f.f(s); }, 0.0, u);
            REQUIRE(std::abs(direct - quad) <= 1e-10 * std::max(1.0, std::abs(direct)));
        }
        REQUIRE(f.F(0.0) == 0.0);
        REQUIRE(f.f(0.0) == 0.0);
        REQUIRE(f.f(-3.0) == f.f(0.0));  // negative-argument clamp
    }
}

TEST_CASE("families: lipschitz bound dominates sampled quotients") {
    SplitMix64 rng(10110ull);
    const Nonlinearity cases[] = {
        Nonlinearity::power(2.0),
        Nonlinearity::power(1.0),
        Nonlinearity::linear(0.7),
        Nonlinearity::polynomial({1.0, 0.0, 0.25}),
    };
    for (const auto& f : cases) {
        const double m = 3.0;
        const double L = f.lipschitz_on(m);
        for (int i = 0; i < 2000; ++i) {
            const double a = rng.uniform(-m, m);
            const double b = rng.uniform(-m, m);
            REQUIRE(std::abs(f.f(a) - f.f(b)) <= L * std::abs(a - b) * (1.0 + 1e-12) + 1e-15);
        }
    }
}

TEST_CASE("spec parsing and structural validation") {
    REQUIRE(Nonlinearity::parse("power:2").f(3.0) == 9.0);
    REQUIRE(Nonlinearity::parse("linear:1.5").f(2.0) == 3.0);
    REQUIRE(Nonlinearity::parse("poly:1,2").f(2.0) == 2.0 + 2.0 * 4.0);
    REQUIRE(Nonlinearity::parse("linear:0").f(5.0) == 0.0);

    REQUIRE_THROWS_AS(Nonlinearity::parse("poly:1,-2"), Error);
    REQUIRE_THROWS_AS(Nonlinearity::parse("poly:0,0"), Error);
    REQUIRE_THROWS_AS(Nonlinearity::parse("power:0.5"), Error);
    REQUIRE_THROWS_AS(Nonlinearity::parse("linear:-1"), Error);
    REQUIRE_THROWS_AS(Nonlinearity::parse("exp:1"), Error);
    REQUIRE_THROWS_AS(Nonlinearity::parse("power"), Error);
    REQUIRE_THROWS_AS(Nonlinearity::parse("poly:1,x"), Error);
}

TEST_CASE("check_condition: power and linear examples") {
    const double lambda0 = 2.0;  // the P3 star

    auto f2 = Nonlinearity::power(2.0);
    ConditionCParams pA{3.0, 1.0, 0.1};
    auto certA = check_condition(f2, Condition::A, pA, lambda0, 100.0);
    REQUIRE(certA.holds_on_grid);
    REQUIRE(certA.max_abs_normalized <= 1e-12);  // margin identically zero
    REQUIRE(certA.analytic.has_value());
    REQUIRE(*certA.analytic);

    // linear(a), condition (C): exact verdict flips at a = lambda0
    ConditionCParams pC{3.0, ConditionCParams::beta_max(3.0, lambda0), 0.1};
    auto ok = check_condition(Nonlinearity::linear(lambda0), Condition::C, pC, lambda0, 100.0);
    REQUIRE(ok.analytic.has_value());
    REQUIRE(*ok.analytic);
    REQUIRE(ok.holds_on_grid);

    auto bad = check_condition(Nonlinearity::linear(lambda0 + 1.0), Condition::C, pC, lambda0,
                               100.0);
    REQUIRE_FALSE(*bad.analytic);
    REQUIRE_FALSE(bad.holds_on_grid);
    REQUIRE(bad.worst_margin < 0.0);
    REQUIRE(bad.worst_u > 1.0);  // fails for large u

    REQUIRE_THROWS_AS(check_condition(f2, Condition::A, pA, lambda0, 0.0), Error);
    REQUIRE_THROWS_AS(check_condition(f2, Condition::A, pA, lambda0, 100.0, 10), Error);
    ConditionCParams badAlpha{2.0, 0.5, 0.1};
    REQUIRE_THROWS_AS(check_condition(f2, Condition::A, badAlpha, lambda0, 100.0), Error);
    ConditionCParams badBeta{3.0, lambda0, 0.1};  // beta above (alpha-2)*lambda0/2
    REQUIRE_THROWS_AS(check_condition(f2, Condition::C, badBeta, lambda0, 100.0), Error);
}

TEST_CASE("h decomposition monotonicity") {
    const double lambda0 = 2.0;
    // power q=2, alpha=3, (A): h = 1/3 constant
    REQUIRE(h_decomposition_monotone(Nonlinearity::power(2.0), Condition::A, 3.0, 0.0, 0.0,
                                     lambda0, 0.5, 50.0));
    // linear(lambda0), alpha=4, a=lambda0/2, b=1: h = -1/u^4, nondecreasing
    REQUIRE(h_decomposition_monotone(Nonlinearity::linear(lambda0), Condition::C, 4.0,
                                     lambda0 / 2.0, 1.0, lambda0, 0.5, 50.0));
    // linear(2*lambda0): (C) fails, so every admissible decomposition has
    // non-monotone h on a wide range
    REQUIRE_FALSE(h_decomposition_monotone(Nonlinearity::linear(2.0 * lambda0), Condition::C,
                                           4.0, lambda0 / 2.0, 1.0, lambda0, 0.1, 100.0));

    REQUIRE_THROWS_AS(h_decomposition_monotone(Nonlinearity::power(2.0), Condition::A, 3.0, 0.1,
                                               0.0, lambda0, 0.5, 50.0),
                      Error);
    REQUIRE_THROWS_AS(h_decomposition_monotone(Nonlinearity::power(2.0), Condition::C, 3.0,
                                               2.0 * lambda0, 1.0, lambda0, 0.5, 50.0),
                      Error);
    REQUIRE_THROWS_AS(h_decomposition_monotone(Nonlinearity::power(2.0), Condition::B, 3.0, 0.0,
                                               0.0, lambda0, 0.5, 50.0),
                      Error);
}

TEST_CASE("superlinear minorant search") {
    auto m1 = superlinear_minorant(Nonlinearity::power(2.0), 3.0, 100.0);
    REQUIRE(m1.has_value());
    REQUIRE(std::abs(m1->delta - 1.0) <= 1e-9);
    REQUIRE(m1->m <= 1.01);

    REQUIRE_FALSE(superlinear_minorant(Nonlinearity::linear(3.0), 3.0, 1e4).has_value());

    // f(u) = u^3 + u with alpha = 4
    auto m3 = superlinear_minorant(Nonlinearity::polynomial({1.0, 0.0, 1.0}), 4.0, 100.0);
    REQUIRE(m3.has_value());
    REQUIRE(m3->delta >= 0.99);
    REQUIRE(m3->delta <= 1.2);
    REQUIRE(m3->m <= 1.01);

    REQUIRE_THROWS_AS(superlinear_minorant(Nonlinearity::power(2.0), 2.0, 10.0), Error);
    REQUIRE_THROWS_AS(superlinear_minorant(Nonlinearity::power(2.0), 3.0, 0.5), Error);
}

TEST_CASE("osgood probe") {
    auto conv = osgood_test(Nonlinearity::power(2.0), 1.0, 1e6);
    REQUIRE_FALSE(conv.diverges);
    REQUIRE(std::abs(conv.estimate - 1.0) <= 1e-8);

    auto div = osgood_test(Nonlinearity::linear(1.0), 1.0, 1e4);
    REQUIRE(div.diverges);

    auto slow = osgood_test(Nonlinearity::custom([](double u) { return u * std::log1p(u); }),
                            1.0, 1e9);
    REQUIRE(slow.diverges);

    REQUIRE_THROWS_AS(osgood_test(Nonlinearity::linear(0.0), 1.0, 1e4), Error);
    REQUIRE_THROWS_AS(osgood_test(Nonlinearity::power(2.0), -1.0, 1e4), Error);
    REQUIRE_THROWS_AS(osgood_test(Nonlinearity::power(2.0), 1.0, 1.5), Error);
}

TEST_CASE("find_initial_data: the P3 instance and the linear obstruction") {
    Network p3 = Network::star(2, 1.0);
    auto f2 = Nonlinearity::power(2.0);
    auto u0 = find_initial_data(p3, f2, 0.1, 100.0);
    REQUIRE(u0.has_value());
    const double v = (*u0)[p3.index_of("c")];
    // threshold: F(v) > omega0 v^2 + gamma1 with omega0 = 2, gamma1 = 0.3
    REQUIRE(v * v * v / 3.0 > 2.0 * v * v + 0.3);
    REQUIRE(v <= 6.1);  // smallest qualifying point, just above the root ~6.0248
    REQUIRE(J(p3, f2, 0.1, *u0) > 0.0);
    for (std::size_t z : p3.boundary()) REQUIRE((*u0)[z] == 0.0);

    // linear(a), a <= lambda0: no initial data can qualify
    const double lambda0 = 2.0;
    REQUIRE_FALSE(find_initial_data(p3, Nonlinearity::linear(lambda0), 0.1, 1e6).has_value());
    REQUIRE_FALSE(
        find_initial_data(p3, Nonlinearity::linear(0.9 * lambda0), 0.1, 1e6).has_value());

    // threshold beyond reach on the scanned range
    REQUIRE_FALSE(find_initial_data(p3, f2, 1e9, 10.0).has_value());

    REQUIRE_THROWS_AS(find_initial_data(p3, f2, 0.0, 10.0), Error);
}

TEST_CASE("large_data_threshold closed form") {
    REQUIRE(large_data_threshold(1.0, 1.0, 1.0, 2.0) == 2.0);
    REQUIRE(large_data_threshold(4.0, 2.0, 3.0, 1.0) == 3.0);
    REQUIRE(large_data_threshold(1.0, 1.0, 1.0, 1.0) == 1.0);
    REQUIRE_THROWS_AS(large_data_threshold(0.0, 1.0, 1.0, 1.0), Error);
}

TEST_CASE("linear lower-bound hypothesis check") {
    const double lambda0 = 2.0;
    auto strong = linear_lower_bound(Nonlinearity::linear(3.0), lambda0, 100.0);
    REQUIRE(strong.holds_on_grid);
    REQUIRE(std::abs(strong.inf_ratio - 3.0) <= 1e-12);

    auto weak = linear_lower_bound(Nonlinearity::power(2.0), lambda0, 100.0);
    REQUIRE_FALSE(weak.holds_on_grid);  // f(u)/u = u dips below lambda0 near 0
}

TEST_CASE("property: (A) implies (B) implies (C) on random polynomials") {
    SplitMix64 rng(190ull);
    const double lambda0 = 2.0;
    int a_held = 0, b_held = 0;
    for (int trial = 0; trial < 100; ++trial) {
        auto g = rng.split(trial);
        std::vector<double> coeffs(1 + g.index(4), 0.0);
        for (double& c : coeffs) c = g.uniform() < 0.3 ? 0.0 : g.uniform(0.0, 2.0);
        coeffs[g.index(coeffs.size())] = g.uniform(0.1, 2.0);
        Nonlinearity f = Nonlinearity::polynomial(coeffs);
        ConditionCParams params{g.uniform(2.2, 5.0), 0.0, 0.3};
        params.beta = ConditionCParams::beta_max(params.alpha, lambda0);

        const bool holdsA =
            check_condition(f, Condition::A, params, lambda0, 50.0, 2000).holds_on_grid;
        const bool holdsB =
            check_condition(f, Condition::B, params, lambda0, 50.0, 2000).holds_on_grid;
        const bool holdsC =
            check_condition(f, Condition::C, params, lambda0, 50.0, 2000).holds_on_grid;
        if (holdsA) {
            ++a_held;
            REQUIRE(holdsB);
        }
        if (holdsB) {
            ++b_held;
            REQUIRE(holdsC);
            ConditionCParams smaller = params;
            smaller.beta = 0.25 * params.beta;
            REQUIRE(check_condition(f, Condition::C, smaller, lambda0, 50.0, 2000).holds_on_grid);
        }
    }
    // the suite must actually exercise both implications
    REQUIRE(a_held > 0);
    REQUIRE(b_held > 0);
}
