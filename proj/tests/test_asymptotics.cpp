#include <cmath>

#include <doctest.h>

#include "ccpb/asymptotics.hpp"
#include "support/params.hpp"

using namespace ccpb;
using ccpb_test::p0;
using ccpb_test::p0_mirror;

namespace {
constexpr double kLn2 = 0.69314718055994530942;
constexpr double kLn8 = 3.0 * kLn2;
constexpr double kLn32 = 5.0 * kLn2;
}  // namespace

TEST_CASE("coefficient limits") {
    SUBCASE("reference configuration: I_p -> 1/2, I_q -> 1") {
        const auto c = coefficient_limits(p0());
        CHECK(c.ip_limit == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(c.iq_limit == doctest::Approx(1.0).epsilon(1e-14));
        CHECK_FALSE(c.degenerate);
    }
    SUBCASE("mirror configuration swaps the limits") {
        const auto c = coefficient_limits(p0_mirror());
        CHECK(c.ip_limit == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(c.iq_limit == doctest::Approx(0.5).epsilon(1e-14));
    }
    SUBCASE("a nonzero mean rescales exponentially") {
        const auto c = coefficient_limits(p0(), 0.3);
        CHECK(c.ip_limit == doctest::Approx(0.5 * std::exp(0.3)).epsilon(1e-14));
        CHECK(c.iq_limit == doctest::Approx(1.0 * std::exp(-0.3)).epsilon(1e-14));
    }
    SUBCASE("A = B collapses both to R^N/N") {
        ModelParams p = p0();
        p.B = 1.0;
        const auto c = coefficient_limits(p);
        CHECK(c.degenerate);
        CHECK(c.ip_limit == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(c.iq_limit == doctest::Approx(0.5).epsilon(1e-14));
    }
}

TEST_CASE("boundary expansion") {
    SUBCASE("reference configuration: U(R) ~ -2 log(1/eps) + log 8") {
        const auto [lead, second] = boundary_expansion(p0());
        CHECK(lead == doctest::Approx(-2.0).epsilon(1e-14));
        CHECK(second == doctest::Approx(kLn8).epsilon(1e-14));
        // evaluated at eps = 1e-3
        const double u = lead * std::log(1e3) + second;
        CHECK(u == doctest::Approx(-11.7361).epsilon(1e-4));
    }
    SUBCASE("doubling the dielectric adds log 2 to the constant") {
        ModelParams p = p0();
        p.dielectric = DielectricProfile::constant(2.0);
        const auto [lead, second] = boundary_expansion(p);
        CHECK(lead == doctest::Approx(-2.0).epsilon(1e-14));
        CHECK(second == doctest::Approx(kLn8 + kLn2).epsilon(1e-14));
    }
    SUBCASE("mirror configuration flips the sign") {
        const auto [lead, second] = boundary_expansion(p0_mirror());
        CHECK(lead == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(second == doctest::Approx(-kLn8).epsilon(1e-14));
    }
    SUBCASE("A = B has no expansion") {
        ModelParams p = p0();
        p.B = 1.0;
        CHECK_THROWS_AS(boundary_expansion(p), EqualConcentrations);
    }
}

TEST_CASE("interior expansion: fixed-power distances") {
    const ModelParams p = p0();
    const double eps = 1e-3;
    const double L = std::log(1.0 / eps);

    SUBCASE("beta in (1,2): single layer term") {
        const auto r = interior_expansion(p, {PowerQuery{1.5, 1.0}, eps});
        CHECK(r.chi1);
        CHECK_FALSE(r.chi2);
        CHECK(r.u_leading == doctest::Approx(-L).epsilon(1e-13));
        CHECK(r.u_second == doctest::Approx(-kLn2).epsilon(1e-13));
        CHECK(r.u_total == doctest::Approx(r.u_leading + r.u_second).epsilon(1e-14));
        CHECK(r.du_leading == doctest::Approx(-2.0 * std::pow(eps, -1.5)).epsilon(1e-13));
        CHECK(r.rho_leading == doctest::Approx(2.0 * std::pow(eps, -1.0)).epsilon(1e-13));
        CHECK_FALSE(r.bound.has_value());
    }
    SUBCASE("beta = 2, gamma = 4: both terms, constant log 32") {
        const auto r = interior_expansion(p, {PowerQuery{2.0, 4.0}, eps});
        CHECK(r.chi1);
        CHECK(r.chi2);
        CHECK(r.u_leading == doctest::Approx(-2.0 * L).epsilon(1e-13));
        CHECK(r.u_second == doctest::Approx(kLn32).epsilon(1e-13));
        // gamma q + curvature = 8 in the slope denominator
        CHECK(r.du_leading == doctest::Approx(-0.25 * std::pow(eps, -2.0)).epsilon(1e-13));
    }
    SUBCASE("beta > 2 reproduces the boundary constants") {
        const auto r = interior_expansion(p, {PowerQuery{3.0, 0.0}, eps});
        CHECK_FALSE(r.chi1);
        CHECK(r.chi2);
        const auto [lead, second] = boundary_expansion(p);
        CHECK(r.u_leading == doctest::Approx(lead * L).epsilon(1e-13));
        CHECK(r.u_second == doctest::Approx(second).epsilon(1e-13));
        CHECK(r.u_second == doctest::Approx(kLn8).epsilon(1e-13));
    }
    SUBCASE("invalid power queries") {
        CHECK_THROWS_AS(interior_expansion(p, {PowerQuery{1.0, 1.0}, eps}), MalformedQuery);
        CHECK_THROWS_AS(interior_expansion(p, {PowerQuery{1.5, 0.0}, eps}), MalformedQuery);
        CHECK_THROWS_AS(interior_expansion(p, {PowerQuery{1.5, 1.0}, 2.0}), MalformedQuery);
    }
}

TEST_CASE("interior expansion: generalized distance scales") {
    const ModelParams p = p0();
    const double eps = 1e-4;
    const double L = std::log(1.0 / eps);

    SUBCASE("Theta scale") {
        const auto r = interior_expansion(p, {ThetaQuery{0.5, 1.0}, eps});
        CHECK(r.chi1);
        CHECK(r.u_leading == doctest::Approx(-2.0 * std::sqrt(L)).epsilon(1e-13));
        CHECK(r.u_second == doctest::Approx(std::log(0.5)).epsilon(1e-13));
        CHECK_THROWS_AS(interior_expansion(p, {ThetaQuery{1.5, 1.0}, eps}), MalformedQuery);
        CHECK_THROWS_AS(interior_expansion(p, {ThetaQuery{0.5, 0.0}, eps}), MalformedQuery);
    }
    SUBCASE("iterated-log scale") {
        const auto r = interior_expansion(p, {IteratedLogQuery{2, 1.0, 0.3}, eps});
        const double ll = std::log(std::log(1.0 / eps));
        CHECK(r.chi1);
        CHECK(r.u_leading == doctest::Approx(-2.0 * ll).epsilon(1e-13));
        CHECK(r.u_second == doctest::Approx(-0.6 + std::log(0.5)).epsilon(1e-13));
        CHECK_THROWS_AS(interior_expansion(p, {IteratedLogQuery{1, 1.0, 0.0}, eps}),
                        MalformedQuery);
    }
    SUBCASE("regularly varying scale, fast class, matches the power case") {
        PiSpecQuery q{1.5, PiSpecQuery::LimitClass::Zero,
                      [](double e) { return 3.0 * std::pow(e, 1.5); }};
        const auto r = interior_expansion(p, {q, eps});
        const auto ref = interior_expansion(p, {PowerQuery{1.5, 3.0}, eps});
        CHECK(r.chi1);
        CHECK(r.u_total == doctest::Approx(ref.u_total).epsilon(1e-12));
        CHECK(r.du_leading == doctest::Approx(ref.du_leading).epsilon(1e-12));
    }
    SUBCASE("regularly varying scale, thin class, matches beta > 2") {
        PiSpecQuery q{3.0, PiSpecQuery::LimitClass::Zero,
                      [](double e) { return std::pow(e, 3.0); }};
        const auto r = interior_expansion(p, {q, eps});
        const auto ref = interior_expansion(p, {PowerQuery{3.0, 0.0}, eps});
        CHECK(r.chi2);
        CHECK(r.u_total == doctest::Approx(ref.u_total).epsilon(1e-12));
        CHECK(r.rho_leading == doctest::Approx(ref.rho_leading).epsilon(1e-12));
    }
    SUBCASE("deep interior returns only a decay bound") {
        const auto r = interior_expansion(p, {InteriorQuery{0.5}, eps});
        REQUIRE(r.bound.has_value());
        CHECK(r.bound->kappa == 0.5);
        CHECK(r.bound->magnitude == doctest::Approx(std::sqrt(eps) * L).epsilon(1e-13));
        CHECK(std::isnan(r.u_total));
        CHECK_THROWS_AS(interior_expansion(p, {InteriorQuery{1.5}, eps}), MalformedQuery);
    }
    SUBCASE("mirror configuration negates every predicted field") {
        const auto r = interior_expansion(p0(), {PowerQuery{2.0, 4.0}, eps});
        const auto m = interior_expansion(p0_mirror(), {PowerQuery{2.0, 4.0}, eps});
        CHECK(m.u_leading == doctest::Approx(-r.u_leading).epsilon(1e-14));
        CHECK(m.u_second == doctest::Approx(-r.u_second).epsilon(1e-14));
        CHECK(m.du_leading == doctest::Approx(-r.du_leading).epsilon(1e-14));
        CHECK(m.rho_leading == doctest::Approx(-r.rho_leading).epsilon(1e-14));
    }
}

TEST_CASE("delta weights") {
    SUBCASE("reference configuration: (1/2, 1, 1/2)") {
        const auto w = delta_weights(p0());
        CHECK(w.w_rho == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(w.w_energy == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(w.w_exp == doctest::Approx(0.5).epsilon(1e-14));
    }
    SUBCASE("A = B carries no concentration") {
        ModelParams p = p0();
        p.B = 1.0;
        const auto w = delta_weights(p);
        CHECK(w.w_rho == 0.0);
        CHECK(w.w_energy == 0.0);
        CHECK(w.w_exp == 0.0);
    }
    SUBCASE("mirror configuration keeps the same magnitudes") {
        const auto w = delta_weights(p0_mirror());
        CHECK(w.w_rho == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(w.w_energy == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(w.w_exp == doctest::Approx(0.5).epsilon(1e-14));
    }
}

TEST_CASE("closed-form layer profile") {
    const ModelParams p = p0(1e-3);
    const double L = std::log(1.0 / p.epsilon);

    SUBCASE("at r = R it reproduces the boundary expansion") {
        const auto [lead, second] = boundary_expansion(p);
        CHECK(layer_profile(p, p.R) == doctest::Approx(lead * L + second).epsilon(1e-12));
    }
    SUBCASE("at r = R - 4 eps^2 it reproduces the power beta=2, gamma=4 total") {
        const double r = p.R - 4.0 * p.epsilon * p.epsilon;
        const auto ref = interior_expansion(p, {PowerQuery{2.0, 4.0}, p.epsilon});
        CHECK(layer_profile(p, r) == doctest::Approx(ref.u_total).epsilon(1e-12));
    }
    SUBCASE("at r = R - eps^1.5 the extracted constant tends to -log 2") {
        const ModelParams fine = p0(1e-8);
        const double Lf = std::log(1.0 / fine.epsilon);
        const double r = fine.R - std::pow(fine.epsilon, 1.5);
        const double second = layer_profile(fine, r) + Lf;  // subtract the -L leading term
        CHECK(second == doctest::Approx(-kLn2).epsilon(2e-3));
    }
    SUBCASE("mirror configuration negates the profile") {
        ModelParams m = p0_mirror(1e-3);
        CHECK(layer_profile(m, 1.0) == doctest::Approx(-layer_profile(p, 1.0)).epsilon(1e-14));
    }
    SUBCASE("radius is validated") {
        CHECK_THROWS_AS(layer_profile(p, -0.1), OutOfDomain);
        CHECK_THROWS_AS(layer_profile(p, 1.1), OutOfDomain);
    }
}

TEST_CASE("first-order gradient closure") {
    const ModelParams p = p0(1e-3);

    SUBCASE("at the boundary value it returns -1/2 exactly in the leading order") {
        const auto [lead, second] = boundary_expansion(p);
        const double u = lead * std::log(1.0 / p.epsilon) + second;
        CHECK(gradient_closure(p, u, p.R) == doctest::Approx(-0.5).epsilon(1e-12));
    }
    SUBCASE("at U = 0 it returns -sqrt(2) eps") {
        CHECK(gradient_closure(p, 0.0, 1.0) ==
              doctest::Approx(-std::sqrt(2.0) * p.epsilon).epsilon(1e-13));
    }
    SUBCASE("doubling A scales the closure by sqrt(2) at fixed U") {
        ModelParams p2 = p0(1e-3);
        p2.A = 2.0;
        p2.B = 4.0;
        CHECK(gradient_closure(p2, 0.0, 1.0) ==
              doctest::Approx(std::sqrt(2.0) * gradient_closure(p, 0.0, 1.0)).epsilon(1e-13));
    }
    SUBCASE("radius is validated") {
        CHECK_THROWS_AS(gradient_closure(p, 0.0, 0.0), OutOfDomain);
        CHECK_THROWS_AS(gradient_closure(p, 0.0, 1.5), OutOfDomain);
    }
}

TEST_CASE("capacitance limit") {
    const ModelParams p = p0();

    SUBCASE("gamma = 4 gives 1/(8 log 2)") {
        const auto c = capacitance_limit(p, 4.0);
        CHECK(c.exact_limit == doctest::Approx(1.0 / (8.0 * kLn2)).epsilon(1e-14));
        CHECK(c.series_c1 == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(c.series_c2 == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(c.combination == doctest::Approx(0.125).epsilon(1e-14));
        CHECK(c.supremum == doctest::Approx(0.25).epsilon(1e-14));
    }
    SUBCASE("gamma = 0.1 reference values") {
        const auto c = capacitance_limit(p, 0.1);
        CHECK(c.exact_limit == doctest::Approx(0.24694).epsilon(1e-4));
        CHECK(c.combination == doctest::Approx(0.24390).epsilon(1e-4));
    }
    SUBCASE("monotone decreasing in gamma, strictly below the supremum") {
        double prev = 1e300;
        for (double g : {0.01, 0.1, 1.0, 4.0, 10.0, 100.0}) {
            const auto c = capacitance_limit(p, g);
            CHECK(c.exact_limit < prev);
            CHECK(c.exact_limit < c.supremum);
            prev = c.exact_limit;
        }
    }
    SUBCASE("gamma -> 0 saturates the supremum C^b q/(2N) = 1/4") {
        const auto c = capacitance_limit(p, 1e-8);
        CHECK(c.exact_limit == doctest::Approx(0.25).epsilon(1e-6));
    }
    SUBCASE("increasing R increases the limit") {
        ModelParams big = p0();
        big.R = 2.0;
        CHECK(capacitance_limit(big, 1.0).exact_limit >
              capacitance_limit(p, 1.0).exact_limit);
    }
    SUBCASE("invalid inputs") {
        CHECK_THROWS_AS(capacitance_limit(p, 0.0), NonPositiveGamma);
        CHECK_THROWS_AS(capacitance_limit(p, -1.0), NonPositiveGamma);
        ModelParams eq = p0();
        eq.B = 1.0;
        CHECK_THROWS_AS(capacitance_limit(eq, 1.0), EqualConcentrations);
    }
}

TEST_CASE("asymptotic queries are bitwise pure") {
    const ModelParams p = p0();
    const auto a = interior_expansion(p, {PowerQuery{2.0, 4.0}, 1e-3});
    const auto b = interior_expansion(p, {PowerQuery{2.0, 4.0}, 1e-3});
    CHECK(a.u_total == b.u_total);
    CHECK(a.du_leading == b.du_leading);
    CHECK(capacitance_limit(p, 4.0).exact_limit == capacitance_limit(p, 4.0).exact_limit);
}
