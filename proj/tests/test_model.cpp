#include <cmath>

#include <doctest.h>

#include "ccpb/model.hpp"
#include "support/params.hpp"

using namespace ccpb;
using ccpb_test::p0;

TEST_CASE("validate_params accepts the reference configuration") {
    const ModelParams p = validate_params(p0());
    CHECK(p.A == 1.0);
    CHECK(p.B == 2.0);
    CHECK(p.N == 2);
}

TEST_CASE("validate_params rejects a dielectric that dips below zero") {
    ModelParams p = p0();
    p.dielectric = DielectricProfile::polynomial({-0.5, 1.0});  // g(r) = r - 0.5
    CHECK_THROWS_AS(validate_params(p), InvalidParams);
    try {
        validate_params(p);
    } catch (const InvalidParams& e) {
        CHECK(e.has("DielectricNotPositive"));
    }
}

TEST_CASE("validate_params rejects N = 1") {
    ModelParams p = p0();
    p.N = 1;
    try {
        validate_params(p);
        FAIL("expected InvalidParams");
    } catch (const InvalidParams& e) {
        CHECK(e.has("InvalidDimension"));
    }
}

TEST_CASE("validate_params collects every violation at once") {
    ModelParams p = p0();
    p.A = -1.0;
    p.q = 0.0;
    p.N = 0;
    try {
        validate_params(p);
        FAIL("expected InvalidParams");
    } catch (const InvalidParams& e) {
        CHECK(e.violations().size() == 3);
        CHECK(e.has("NonPositiveParameter"));
        CHECK(e.has("InvalidDimension"));
    }
}

TEST_CASE("derived constants by direct substitution") {
    SUBCASE("boundary slope at eps = 0.1 is -50") {
        const DerivedConstants d = derived_constants(p0(0.1));
        CHECK(d.boundary_slope == doctest::Approx(-50.0).epsilon(1e-14));
        CHECK_FALSE(d.robin_boundary_value.has_value());
    }
    SUBCASE("decay rate is sqrt(2)") {
        const DerivedConstants d = derived_constants(p0());
        CHECK(d.decay_rate == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
        CHECK(d.decay_rate > 0.0);
    }
    SUBCASE("Robin boundary value with eta = eps^2 is 0.5") {
        ModelParams p = p0(0.1);
        p.eta = p.epsilon * p.epsilon;
        const DerivedConstants d = derived_constants(p);
        REQUIRE(d.robin_boundary_value.has_value());
        CHECK(*d.robin_boundary_value == doctest::Approx(0.5).epsilon(1e-14));
    }
    SUBCASE("A = B zeroes both the slope and the total charge") {
        ModelParams p = p0();
        p.B = 1.0;
        const DerivedConstants d = derived_constants(p);
        CHECK(d.boundary_slope == 0.0);
        CHECK(d.total_charge == 0.0);
    }
    SUBCASE("slope scales exactly by 4 under eps halving and keeps sign(A-B)") {
        const double s1 = derived_constants(p0(0.1)).boundary_slope;
        const double s2 = derived_constants(p0(0.05)).boundary_slope;
        CHECK(s2 == doctest::Approx(4.0 * s1).epsilon(1e-14));
        CHECK(s1 < 0.0);  // A < B
    }
}

TEST_CASE("dielectric profile shapes") {
    SUBCASE("constant") {
        const auto g = DielectricProfile::constant(2.5);
        CHECK(g.eval(0.3) == 2.5);
        CHECK(g.deriv(0.3) == 0.0);
        CHECK(g.is_constant());
    }
    SUBCASE("polynomial value and derivative") {
        const auto g = DielectricProfile::polynomial({1.0, 0.0, 0.5});  // 1 + r^2/2
        CHECK(g.eval(2.0) == doctest::Approx(3.0));
        CHECK(g.deriv(2.0) == doctest::Approx(2.0));
        CHECK_FALSE(g.is_constant());
    }
    SUBCASE("tabulated interpolation passes through samples and stays in range") {
        const auto g = DielectricProfile::tabulated({0.0, 0.5, 1.0}, {1.0, 2.0, 1.5});
        CHECK(g.eval(0.0) == doctest::Approx(1.0));
        CHECK(g.eval(0.5) == doctest::Approx(2.0));
        CHECK(g.eval(1.0) == doctest::Approx(1.5));
        // Shape preservation: no overshoot beyond the data range.
        for (int i = 0; i <= 100; ++i) {
            const double v = g.eval(i / 100.0);
            CHECK(v >= 1.0 - 1e-12);
            CHECK(v <= 2.0 + 1e-12);
            CHECK(std::isfinite(g.deriv(i / 100.0)));
        }
        CHECK(g.min_on(1.0) > 0.0);
    }
    SUBCASE("tabulated input validation") {
        CHECK_THROWS_AS(DielectricProfile::tabulated({0.0, 1.0}, {1.0}), LengthMismatch);
        CHECK_THROWS_AS(DielectricProfile::tabulated({0.0, 0.0}, {1.0, 1.0}), DegenerateSpec);
    }
}
