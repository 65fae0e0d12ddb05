#include <doctest.h>

#include "shadowlab/errors.hpp"
#include "shadowlab/params.hpp"

using namespace shadowlab;

TEST_CASE("valid parameter record certifies") {
    Params p;
    p.a = 1.0;
    p.l = 0.01;
    p.K = 99.0; // K*l must stay strictly below 1
    p.delta_cap = 0.5;
    p.T_a = 1.0;
    p.chart_radius = 1.0;
    CHECK_NOTHROW(validate(p));
}

TEST_CASE("each violated constraint is reported") {
    Params p;
    p.l = 0.01;

    SUBCASE("K too small") {
        p.K = 2.0;
        const auto v = constraint_violations(p);
        REQUIRE(v.size() == 1);
        CHECK(v[0] == "K > 3");
        CHECK_THROWS_AS(validate(p), ConstraintViolation);
    }
    SUBCASE("K*l too large") {
        p.l = 0.3;
        p.K = 100.0;
        const auto v = constraint_violations(p);
        CHECK(std::find(v.begin(), v.end(), "K*l < 1") != v.end());
        CHECK_THROWS_AS(validate(p), ConstraintViolation);
    }
    SUBCASE("several at once") {
        p.a = -1.0;
        p.T_a = 0.0;
        const auto v = constraint_violations(p);
        CHECK(v.size() >= 2);
    }
}

TEST_CASE("validation is idempotent") {
    Params p;
    const ValidatedParams vp = validate(p);
    const ValidatedParams again = validate(vp);
    CHECK(again->a == vp->a);
    CHECK(again->l == vp->l);
    CHECK(again->grid_dt == vp->grid_dt);
}
