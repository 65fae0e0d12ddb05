#include <doctest.h>

#include <cmath>

#include "shadowlab/errors.hpp"
#include "shadowlab/planar.hpp"
#include "shadowlab/rng.hpp"
#include "support/ode_oracle.hpp"
#include "support/test_util.hpp"

using namespace shadowlab;

namespace {
// The profile from the worked constants used throughout the paper-scale
// checks (small l, large K).
WindingProfile small_l_profile() {
    Params p;
    p.l = 0.01;
    p.K = 99.0;
    static ValidatedParams vp = validate(p);
    return WindingProfile(vp);
}
} // namespace

TEST_CASE("profile values across the branches") {
    const WindingProfile prof = small_l_profile();
    const double l = 0.01, K = 99.0;

    CHECK(prof.value(0.0) == 0.0);
    CHECK(prof.value(2.0 * (K - 1.0) * l) == 0.0);
    CHECK(prof.value(l) == doctest::Approx(-1.0 / std::log(l)).epsilon(1e-14));

    // continuity at both joins
    CHECK(prof.value(2.0 * l - 1e-12) ==
          doctest::Approx(prof.value(2.0 * l + 1e-12)).epsilon(1e-6));
    CHECK(prof.value((K - 1.0) * l - 1e-12) ==
          doctest::Approx(0.0).epsilon(1e-9));

    // nonnegative across the band
    for (int i = 0; i <= 1000; ++i) {
        const double r = 2.0 * l + (K - 3.0) * l * i / 1000.0;
        CHECK(prof.value(r) >= 0.0);
    }
}

TEST_CASE("profile slope: closed form and finite differences") {
    const WindingProfile prof = small_l_profile();
    const double l = 0.01;
    CHECK(prof.slope(l) ==
          doctest::Approx(1.0 / (l * std::log(l) * std::log(l))).epsilon(1e-12));
    CHECK(prof.slope(2.0 * (99.0 - 1.0) * l) == 0.0);
    CHECK_THROWS_AS(prof.slope(0.0), DomainError);

    std::mt19937_64 rng(7);
    for (int k = 0; k < 200; ++k) {
        const double r = rand_log(rng, 1e-6, 2.0 * l * 0.999);
        const double h = r * 1e-6;
        const double fd = (prof.value(r + h) - prof.value(r - h)) / (2.0 * h);
        CHECK(prof.slope(r) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("planar field: origin, far zone, polar form") {
    const WindingProfile prof = small_l_profile();
    const double a = prof.a();

    const PlanarPoint at0 = planar_field(prof, {0.0, 0.0});
    CHECK(at0.x1 == 0.0);
    CHECK(at0.x2 == 0.0);

    const double r_far = (99.0 - 1.0) * 0.01 * 1.5;
    const PlanarPoint far = planar_field(prof, {r_far, 0.0});
    CHECK(far.x1 == doctest::Approx(a * r_far));
    CHECK(far.x2 == doctest::Approx(0.0));

    // Cartesian value equals the polar system mapped back
    std::mt19937_64 rng(11);
    for (int k = 0; k < 300; ++k) {
        const double r = rand_log(rng, 1e-5, 1.2);
        const double phi = rand_in(rng, 0.0, kTwoPi);
        const PlanarPoint x{r * std::cos(phi), r * std::sin(phi)};
        const PlanarPoint v = planar_field(prof, x);
        const double b = prof.value(r);
        // dr/dt = a r, dphi/dt = b: velocity = a*x + b*rot90(x)
        CHECK(v.x1 == doctest::Approx(a * x.x1 - b * x.x2).epsilon(1e-12));
        CHECK(v.x2 == doctest::Approx(b * x.x1 + a * x.x2).epsilon(1e-12));
    }
}

TEST_CASE("jacobian matches finite differences and is a*I at the ends") {
    const WindingProfile prof = small_l_profile();
    const double a = prof.a();

    auto J0 = planar_jacobian(prof, {0.0, 0.0});
    CHECK(J0[0][0] == a);
    CHECK(J0[0][1] == 0.0);
    CHECK(J0[1][0] == 0.0);
    CHECK(J0[1][1] == a);

    auto Jfar = planar_jacobian(prof, {1.5, 0.2});
    CHECK(Jfar[0][0] == a);
    CHECK(Jfar[0][1] == 0.0);

    std::mt19937_64 rng(13);
    for (int k = 0; k < 200; ++k) {
        const double r = rand_log(rng, 1e-4, 0.0199);
        const double phi = rand_in(rng, 0.0, kTwoPi);
        const PlanarPoint x{r * std::cos(phi), r * std::sin(phi)};
        const auto J = planar_jacobian(prof, x);
        const double h = 1e-7 * std::max(r, 1e-3);
        const PlanarPoint fx1p = planar_field(prof, {x.x1 + h, x.x2});
        const PlanarPoint fx1m = planar_field(prof, {x.x1 - h, x.x2});
        const PlanarPoint fx2p = planar_field(prof, {x.x1, x.x2 + h});
        const PlanarPoint fx2m = planar_field(prof, {x.x1, x.x2 - h});
        CHECK(J[0][0] == doctest::Approx((fx1p.x1 - fx1m.x1) / (2 * h)).epsilon(1e-5));
        CHECK(J[0][1] == doctest::Approx((fx2p.x1 - fx2m.x1) / (2 * h)).epsilon(1e-5));
        CHECK(J[1][0] == doctest::Approx((fx1p.x2 - fx1m.x2) / (2 * h)).epsilon(1e-5));
        CHECK(J[1][1] == doctest::Approx((fx2p.x2 - fx2m.x2) / (2 * h)).epsilon(1e-5));
    }
}

TEST_CASE("finite-difference jacobians tighten toward a*I at the origin") {
    const WindingProfile prof = small_l_profile();
    const double a = prof.a();
    double prev = 1e300;
    for (int k = 3; k <= 10; ++k) {
        const double r = std::pow(10.0, -k);
        const PlanarPoint x{r * 0.6, r * 0.8};
        const double h = r / 128.0;
        double dev = 0.0;
        const PlanarPoint f1p = planar_field(prof, {x.x1 + h, x.x2});
        const PlanarPoint f1m = planar_field(prof, {x.x1 - h, x.x2});
        const PlanarPoint f2p = planar_field(prof, {x.x1, x.x2 + h});
        const PlanarPoint f2m = planar_field(prof, {x.x1, x.x2 - h});
        dev = std::max(dev, std::abs((f1p.x1 - f1m.x1) / (2 * h) - a));
        dev = std::max(dev, std::abs((f2p.x1 - f2m.x1) / (2 * h)));
        dev = std::max(dev, std::abs((f1p.x2 - f1m.x2) / (2 * h)));
        dev = std::max(dev, std::abs((f2p.x2 - f2m.x2) / (2 * h) - a));
        CHECK(dev < prev);
        prev = dev;
    }
}

TEST_CASE("flow basics: identity, radial exactness, frozen far angle") {
    const WindingProfile prof = small_l_profile();
    const double a = prof.a();
    const PlanarPoint x{0.005, 0.002};

    const PlanarPoint same = planar_flow(prof, 0.0, x);
    CHECK(same.x1 == x.x1);
    CHECK(same.x2 == x.x2);

    std::mt19937_64 rng(17);
    for (int k = 0; k < 200; ++k) {
        const double r0 = rand_log(rng, 1e-6, 0.9);
        const double phi = rand_in(rng, 0.0, kTwoPi);
        const double t = rand_in(rng, -12.0, 4.0);
        const LogPolar z =
            planar_flow_log(prof, t, {std::log(r0), phi});
        CHECK(z.log_r == doctest::Approx(std::log(r0) + a * t).epsilon(1e-14));
    }

    const double r_far = 0.99 * 1.2;
    const PlanarPoint far0{r_far, 0.0};
    const PlanarPoint far1 = planar_flow(prof, 0.7, far0);
    CHECK(far1.x2 == doctest::Approx(0.0)); // angle unchanged where b = 0
    CHECK(far1.norm() == doctest::Approx(r_far * std::exp(a * 0.7)).epsilon(1e-14));
}

TEST_CASE("flow group law") {
    const WindingProfile prof = small_l_profile();
    std::mt19937_64 rng(19);
    for (int k = 0; k < 100; ++k) {
        const double r0 = rand_log(rng, 1e-5, 0.5);
        const double phi = rand_in(rng, 0.0, kTwoPi);
        const double s = rand_in(rng, -20.0, 20.0);
        const double t = rand_in(rng, -20.0, 20.0);
        const LogPolar z0{std::log(r0), phi};
        const LogPolar one = planar_flow_log(prof, s + t, z0);
        const LogPolar two = planar_flow_log(prof, s, planar_flow_log(prof, t, z0));
        CHECK(one.log_r == doctest::Approx(two.log_r).epsilon(1e-12));
        CHECK(one.phi == doctest::Approx(two.phi).epsilon(1e-8));
    }
}

TEST_CASE("closed-form flow against the adaptive integrator") {
    const WindingProfile prof = small_l_profile();
    std::mt19937_64 rng(23);
    for (int k = 0; k < 8; ++k) {
        const double r0 = rand_log(rng, 1e-4, 0.8);
        const double phi = rand_in(rng, 0.0, kTwoPi);
        const PlanarPoint x{r0 * std::cos(phi), r0 * std::sin(phi)};
        for (double t : {-6.0, -1.5, 0.3, 2.0}) {
            const PlanarPoint closed = planar_flow(prof, t, x);
            const PlanarPoint oracle = testutil::integrate_planar(prof, t, x);
            CHECK(dist(closed, oracle) < 5e-9 * std::max(1.0, closed.norm()));
        }
    }
}

TEST_CASE("backward winding diverges") {
    const WindingProfile prof = small_l_profile();
    for (double r0 : {0.0199, 0.01, 1e-4}) {
        const double w0 = std::log(r0);
        // over a long enough backward stretch the winding passes two turns
        double T = 10.0;
        double wound = backward_winding(prof, w0, -T);
        int guard = 0;
        while (wound < 2.0 * kTwoPi && ++guard < 60) {
            T *= 4.0;
            wound = backward_winding(prof, w0, -T);
        }
        CHECK(wound > 2.0 * kTwoPi);
    }
}

TEST_CASE("winding time solves the angle equation") {
    const WindingProfile prof = small_l_profile();
    const double l = 0.01;

    SUBCASE("already-attained angle still returns t < T0") {
        const PlanarPoint x0{l / 3.0, 0.0};
        const double t = winding_time(prof, x0, x0.angle(), 1.0);
        CHECK(t < 1.0);
        const LogPolar z = planar_flow_log(prof, t, LogPolar::from(x0));
        CHECK(angular_gap(z.phi, x0.angle()) < 1e-7);
    }
    SUBCASE("backward solve verified by forward evaluation") {
        const PlanarPoint x0{l / 2.0, 0.0};
        const double theta = kTwoPi / 2.0;
        const double t = winding_time(prof, x0, theta, 0.0);
        CHECK(t < 0.0);
        const LogPolar z = planar_flow_log(prof, t, LogPolar::from(x0));
        CHECK(angular_gap(z.phi, theta) < 1e-7);
        // cartesian cross-check while the radius is representable
        if (z.log_r > -300.0) {
            const PlanarPoint fwd = planar_flow(prof, t, x0);
            CHECK(angular_gap(fwd.angle(), theta) < 1e-6);
        }
    }
    SUBCASE("closed-form winding matches the antiderivative on the log zone") {
        const PlanarPoint x0{0.005, 0.0};
        const double a = prof.a();
        const double w0 = std::log(0.005);
        for (double tau : {-0.5, -2.0, -9.0}) {
            const double direct = prof.winding_change(w0, tau);
            const double anti =
                (-std::log(std::abs(a * tau + w0)) + std::log(std::abs(w0))) / a;
            CHECK(direct == doctest::Approx(anti).epsilon(1e-12));
        }
    }
}

TEST_CASE("angle gap premise checker") {
    const WindingProfile prof = small_l_profile();
    const double l = 0.01;

    SUBCASE("same orbit, identity reparametrization") {
        const PlanarPoint x0{l / 2.0, 0.0};
        const AngleGapResult r =
            angle_gap_check(prof, x0, x0, Reparam::identity(), 12.0);
        CHECK(r.premise_holds);
        CHECK(r.gap == doctest::Approx(0.0));
    }
    SUBCASE("antipodal points violate the premise") {
        const PlanarPoint x0{l / 2.0, 0.0};
        const PlanarPoint x1{-l / 2.0, 0.0};
        const AngleGapResult r =
            angle_gap_check(prof, x0, x1, Reparam::identity(), 12.0);
        CHECK_FALSE(r.premise_holds);
        CHECK(r.gap == doctest::Approx(kTwoPi / 2.0));
    }
    SUBCASE("preconditions enforced") {
        const PlanarPoint big{3.0 * l, 0.0};
        CHECK_THROWS_AS(
            angle_gap_check(prof, big, big, Reparam::identity(), 5.0),
            PreconditionError);
        const Reparam steep = Reparam::from_knots({{0.0, 0.0}, {1.0, 2.0}});
        CHECK_THROWS_AS(angle_gap_check(prof, {l / 2, 0}, {l / 2, 0}, steep, 5.0),
                        PreconditionError);
    }
}
