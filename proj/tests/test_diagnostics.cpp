#include <cmath>
#include <memory>
#include <vector>

#include <doctest.h>

#include "ccpb/asymptotics.hpp"
#include "ccpb/diagnostics.hpp"
#include "support/params.hpp"

using namespace ccpb;
using ccpb_test::p0;

namespace {

Solution solve_p0(double eps, const MeshSpec& spec) {
    ModelParams p = p0(eps);
    auto mesh = std::make_shared<const Mesh>(Mesh::build(p, spec));
    return solve_newton(p, mesh);
}

Solution solve_p0(double eps) {
    ModelParams p = p0(eps);
    return solve_p0(eps, GeometricSpec::default_for(p));
}

/// Solve down a short ladder ending at eps (for small eps that need seeding).
Solution ladder_to(double eps) {
    std::vector<double> ladder;
    for (double e = 0.2; e > eps * 1.0001; e *= 0.5) ladder.push_back(e);
    ladder.push_back(eps);
    return solve_continuation(p0(), ladder).back();
}

}  // namespace

TEST_CASE("Pohozaev identities on the trivial A = B solution") {
    ModelParams p = p0(0.2);
    p.B = 1.0;
    auto mesh = std::make_shared<const Mesh>(Mesh::build(p, UniformSpec{64}));
    const Solution s = solve_newton(p, mesh);
    const PohozaevReport r = pohozaev_check(s, 0.5);
    // Every gradient term vanishes; both sides reduce to A/p + B/q = 2.
    CHECK(r.lhs1 == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(r.rhs1 == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(std::abs(r.residual1) < 1e-9);
    CHECK(std::abs(r.residual2) < 1e-9);
    CHECK(std::abs(r.lambda1) < 1e-12);
}

TEST_CASE("Pohozaev identities at eps = 0.05 on a fine layer mesh") {
    ModelParams p = p0(0.05);
    const GeometricSpec fine{p.epsilon * p.epsilon / 100.0, 1.05, 1.0 / 1000.0};
    const Solution s = solve_p0(0.05, fine);
    const PohozaevReport r = pohozaev_check(s, 0.5);
    CHECK(std::abs(r.residual1) < 1e-3);
    CHECK(std::abs(r.residual2) < 1e-3);
    CHECK(r.kappa == 0.5);
    CHECK(r.snap_error < 1e-2);

    SUBCASE("residuals shrink at least at order 1.5 under refinement") {
        auto residual_on = [&](const Mesh& mesh) {
            auto m = std::make_shared<const Mesh>(mesh);
            return std::abs(pohozaev_check(solve_newton(p, m), 0.5).residual1);
        };
        const Mesh coarse = Mesh::build(p, fine);
        const double e0 = residual_on(coarse);
        const double e1 = residual_on(coarse.refined());
        CHECK(std::log2(e0 / e1) >= 1.5);
    }
    SUBCASE("kappa is validated") {
        CHECK_THROWS_AS(pohozaev_check(s, 0.0), KappaOutOfRange);
        CHECK_THROWS_AS(pohozaev_check(s, 1.0), KappaOutOfRange);
    }
}

TEST_CASE("inequality suite holds on the reference solve") {
    const Solution s = solve_p0(0.1);
    const InequalityLedger led = inequality_suite(s);
    CHECK(led.all_pass);
    CHECK(led.checks.size() >= 6);
    for (const auto& c : led.checks) {
        INFO(c.name, " value=", c.value, " in [", c.lower, ", ", c.upper, "]");
        CHECK(c.pass);
        CHECK(c.margin >= 0.0);
        CHECK(c.value >= c.lower);
        CHECK(c.value <= c.upper);
    }
}

TEST_CASE("delta-function weights emerge from the quadratures at eps = 2^-10") {
    const Solution s = ladder_to(std::ldexp(1.0, -10));
    const auto w = delta_weights(s.params);  // (1/2, 1, 1/2)
    const auto one = [](double) { return 1.0; };

    CHECK(delta_weight_estimate(s, one, DeltaTarget::Energy) ==
          doctest::Approx(w.w_energy).epsilon(0.03));
    CHECK(delta_weight_estimate(s, one, DeltaTarget::Rho) ==
          doctest::Approx(w.w_rho).epsilon(0.03));
    CHECK(delta_weight_estimate(s, one, DeltaTarget::Exp) ==
          doctest::Approx(w.w_exp).epsilon(0.03));

    SUBCASE("the mass concentrates at r = R: h(r) = r changes nothing in the limit") {
        const auto id = [](double r) { return r; };
        CHECK(delta_weight_estimate(s, id, DeltaTarget::Rho) ==
              doctest::Approx(w.w_rho).epsilon(0.03));
    }
    SUBCASE("a weight vanishing at R kills the mass") {
        const auto tail = [](double r) { return 1.0 - r; };
        CHECK(std::abs(delta_weight_estimate(s, tail, DeltaTarget::Rho)) < 0.02);
    }
}

TEST_CASE("discrete charge balance is exact by construction") {
    const Solution s = solve_p0(0.1);
    const auto& w = s.mesh->radial_weights();
    double q = 0.0;
    for (std::size_t i = 0; i < s.u.size(); ++i)
        q += w[i] * evaluate_solution(s, s.mesh->node(i)).rho;
    CHECK(q == doctest::Approx(0.5).epsilon(1e-8));  // R^N (B-A)/N
}

TEST_CASE("two-point capacitance probe") {
    const double eps = std::ldexp(1.0, -10);
    const Solution s = ladder_to(eps);

    SUBCASE("layer probe approaches the gamma = 4 closed-form limit") {
        const double c = capacitance_numeric(s, 1.0 - 4.0 * eps * eps);
        const double limit = capacitance_limit(s.params, 4.0).exact_limit;
        CHECK(c == doctest::Approx(limit).epsilon(0.05));
    }
    SUBCASE("probe radius is validated") {
        CHECK_THROWS_AS(capacitance_numeric(s, -0.5), OutOfDomain);
        CHECK_THROWS_AS(capacitance_numeric(s, 1.0), OutOfDomain);
    }
    SUBCASE("A = B makes the denominator degenerate") {
        ModelParams p = p0(0.2);
        p.B = 1.0;
        auto mesh = std::make_shared<const Mesh>(Mesh::build(p, UniformSpec{64}));
        const Solution trivial = solve_newton(p, mesh);
        CHECK_THROWS_AS(capacitance_numeric(trivial, 0.5), DegenerateDenominator);
    }
}

TEST_CASE("gradient norms and their decay fit") {
    std::vector<double> ladder;
    for (int k = 2; k <= 10; ++k) ladder.push_back(std::ldexp(1.0, -k));
    const auto sols = solve_continuation(p0(), ladder);
    // fit on the asymptotic tail eps <= 2^-6
    const std::vector<Solution> tail(sols.begin() + 4, sols.end());

    SUBCASE("norms are positive and decay overall for theta > 1") {
        for (const auto& s : sols) CHECK(grad_norm(s, 1.5) > 0.0);
        CHECK(grad_norm(sols.back(), 1.5) < 0.7 * grad_norm(sols.front(), 1.5));
    }
    SUBCASE("fitted slopes land near the predicted min{1, 2/theta - 1}") {
        CHECK(std::abs(norm_decay_fit(tail, 1.0) - 1.0) < 0.15);
        CHECK(std::abs(norm_decay_fit(tail, 1.5) - 1.0 / 3.0) < 0.12);
    }
    SUBCASE("insufficient data and bad theta are rejected") {
        const std::vector<Solution> few(sols.begin(), sols.begin() + 3);
        CHECK_THROWS_AS(norm_decay_fit(few, 1.0), InsufficientData);
        CHECK_THROWS_AS(grad_norm(sols[0], 0.0), MalformedQuery);
    }
}

TEST_CASE("validation report") {
    SUBCASE("single-row report at eps = 0.5 fills every column") {
        ValidationOptions opts;
        opts.thetas = {1.0};
        const ValidationReport rep = validate_report(p0(), {0.5}, opts);
        REQUIRE(rep.rows.size() == 1);
        const ValidationRow& row = rep.rows[0];
        CHECK(row.eps == 0.5);
        CHECK(std::isfinite(row.u_r_num));
        CHECK(std::isfinite(row.u_r_pred));
        CHECK(row.ip > 0.0);
        CHECK(row.iq > 0.0);
        CHECK(row.ip_limit == doctest::Approx(0.5));
        CHECK(row.iq_limit == doctest::Approx(1.0));
        REQUIRE(row.norms.size() == 1);
        CHECK(row.norms[0] > 0.0);
        // slope fit needs >= 4 rows
        REQUIRE(rep.slopes.size() == 1);
        CHECK(std::isnan(rep.slopes[0]));
        CHECK(rep.slope_targets[0] == doctest::Approx(1.0));
        CHECK_FALSE(rep.degenerate);
    }
    SUBCASE("A = B is reported as the degenerate regime") {
        ModelParams p = p0();
        p.B = 1.0;
        const ValidationReport rep = validate_report(p, {0.5, 0.25});
        CHECK(rep.degenerate);
        CHECK(rep.overall_pass);
        for (const auto& row : rep.rows) CHECK(std::abs(row.u_r_num) < 1e-8);
    }
}
