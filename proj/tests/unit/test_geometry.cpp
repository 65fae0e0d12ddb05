#include <doctest.h>

#include <cmath>

#include "shadowlab/errors.hpp"
#include "shadowlab/geometry.hpp"
#include "shadowlab/rng.hpp"
#include "support/grid_oracle.hpp"

using namespace shadowlab;

namespace {

Spiral log_spiral(double scale, double pitch = 0.3, int samples = 3000,
                  double turns = 2.6) {
    Spiral sp;
    for (int i = 0; i <= samples; ++i) {
        const double th = turns * kTwoPi * i / samples;
        const double r = scale * std::exp(-pitch * th);
        sp.pts.push_back({r * std::cos(th), r * std::sin(th)});
        sp.params.push_back(th);
    }
    return sp;
}

LinearMap3 random_map(std::mt19937_64& rng) {
    LinearMap3 Q;
    do {
        for (auto& row : Q.m)
            for (auto& v : row) v = rand_in(rng, -1.0, 1.0);
        Q.m[0][0] += 1.5; // keep it well-conditioned and non-aligned
        Q.m[1][0] += 1.0;
        Q.m[1][1] += 1.5;
        Q.m[2][2] += 1.5;
    } while (std::abs(Q.det()) < 0.2);
    return Q;
}

} // namespace

TEST_CASE("hits_every_ray") {
    CHECK(hits_every_ray(log_spiral(1.0), 1e-3));

    Spiral segment;
    for (int i = 0; i <= 50; ++i) segment.pts.push_back({0.1 + 0.01 * i, 0.2});
    CHECK_FALSE(hits_every_ray(segment, 1e-3));

    Spiral barely;
    for (int i = 0; i <= 200; ++i) {
        const double th = (kTwoPi - 0.05) * i / 200.0;
        barely.pts.push_back({std::cos(th), std::sin(th)});
    }
    CHECK_FALSE(hits_every_ray(barely, 1e-3)); // less than a full turn
}

TEST_CASE("radius_for basics") {
    SUBCASE("orthogonal axis image") {
        LinearMap3 Q;
        Q.m = {{{0.0, 1.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}}};
        const double R = radius_for(Q, 1.0);
        CHECK(R > 0.0);
        CHECK(R < 1.0);
    }
    SUBCASE("aligned axes are rejected") {
        LinearMap3 I;
        I.m = {{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
        CHECK_THROWS_AS(radius_for(I, 1.0), DegenerateLines);
    }
    SUBCASE("halving D shrinks R by at most half") {
        std::mt19937_64 rng(61);
        for (int k = 0; k < 20; ++k) {
            const LinearMap3 Q = random_map(rng);
            const double D = rand_in(rng, 0.4, 2.0);
            const double R1 = radius_for(Q, D);
            const double R2 = radius_for(Q, D / 2.0);
            CHECK(R2 > 0.0);
            CHECK(R2 >= 0.5 * R1 - 1e-12);
        }
    }
    SUBCASE("containment verified by boundary sampling") {
        std::mt19937_64 rng(67);
        for (int k = 0; k < 10; ++k) {
            const LinearMap3 Q = random_map(rng);
            const double D = rand_in(rng, 0.5, 1.5);
            const double R = radius_for(Q, D);
            // points of B(R,0) in the common plane must satisfy both slabs
            const Vec3 u1{1.0, 0.0, 0.0};
            Vec3 qv = Q.apply({1.0, 0.0, 0.0});
            const double qn = std::sqrt(qv[0] * qv[0] + qv[1] * qv[1] + qv[2] * qv[2]);
            for (auto& c : qv) c /= qn;
            Vec3 f2{0.0, qv[1], qv[2]};
            const double pn = std::sqrt(f2[1] * f2[1] + f2[2] * f2[2]);
            f2 = {0.0, f2[1] / pn, f2[2] / pn};
            for (int s = 0; s < 1000; ++s) {
                const double th = kTwoPi * s / 1000.0;
                const Vec3 pt{R * std::cos(th) * u1[0] + R * std::sin(th) * f2[0],
                              R * std::cos(th) * u1[1] + R * std::sin(th) * f2[1],
                              R * std::cos(th) * u1[2] + R * std::sin(th) * f2[2]};
                CHECK(std::abs(pt[0]) < D);
                const Vec3 pre = Q.apply_inverse(pt);
                CHECK(std::abs(pre[0]) < D);
            }
        }
    }
}

TEST_CASE("cylinder intersection certificates") {
    std::mt19937_64 rng(71);
    for (int k = 0; k < 25; ++k) {
        const LinearMap3 Q = random_map(rng);
        const double D = rand_in(rng, 0.5, 1.5);
        const double R = radius_for(Q, D);
        const Spiral sp1 = log_spiral(0.95 * R, rand_in(rng, 0.2, 0.5));
        const Spiral sp2 = log_spiral(0.9 * R, rand_in(rng, 0.2, 0.5));
        const CylinderIntersection ci = intersect_cylinders(Q, D, sp1, sp2);

        CHECK(std::abs(ci.axial1) < D);
        CHECK(std::abs(ci.axial2) < D);
        // planar parts sit on the interpolated spirals
        const PlanarPoint zp{ci.z[1], ci.z[2]};
        double best1 = 1e300;
        for (std::size_t i = 1; i < sp1.pts.size(); ++i) {
            // distance to the segment midpoint scale is enough here
            best1 = std::min(best1, dist(zp, sp1.pts[i]));
        }
        CHECK(best1 < 0.01 * R + 1e-12);
        const Vec3 pre = Q.apply_inverse(ci.z);
        const PlanarPoint zq{pre[1], pre[2]};
        double best2 = 1e300;
        for (std::size_t i = 1; i < sp2.pts.size(); ++i)
            best2 = std::min(best2, dist(zq, sp2.pts[i]));
        CHECK(best2 < 0.01 * R + 1e-12);
    }
}

TEST_CASE("exact sample hit is returned verbatim") {
    LinearMap3 Q;
    Q.m = {{{0.0, 1.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}}};
    const double D = 1.0;
    const double R = radius_for(Q, D);
    // the common-plane trace in the first frame is along f2; for this Q the
    // plane V = span(e1, e2) so the trace direction is (x2,x3) = (1, 0)
    Spiral sp1 = log_spiral(0.9 * R);
    // ensure a sample exactly on the positive trace direction
    sp1.pts[100] = {0.5 * R, 0.0};
    const Spiral sp2 = log_spiral(0.85 * R);
    const CylinderIntersection ci = intersect_cylinders(Q, D, sp1, sp2);
    CHECK(std::abs(ci.z[2]) < 1e-9); // trace lies in the x2 axis of the plane
}

TEST_CASE("errors: coarse spiral and ball violation") {
    LinearMap3 Q;
    Q.m = {{{0.0, 1.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}}};
    const double D = 1.0;
    const double R = radius_for(Q, D);

    Spiral wild = log_spiral(2.0 * R);
    CHECK_THROWS_AS(intersect_cylinders(Q, D, wild, log_spiral(0.5 * R)),
                    NotInBall);

    Spiral flat;
    for (int i = 0; i < 100; ++i) flat.pts.push_back({0.1 * R, 0.2 * R});
    CHECK_THROWS_AS(intersect_cylinders(Q, D, flat, log_spiral(0.5 * R)),
                    PreconditionError);
}

TEST_CASE("intersection agrees with the brute-force grid search") {
    std::mt19937_64 rng(73);
    for (int k = 0; k < 4; ++k) {
        const LinearMap3 Q = random_map(rng);
        const double D = rand_in(rng, 0.5, 1.2);
        const double R = radius_for(Q, D);
        const Spiral sp1 = log_spiral(0.9 * R, 0.3, 120);
        const Spiral sp2 = log_spiral(0.85 * R, 0.3, 120);
        const CylinderIntersection ci = intersect_cylinders(Q, D, sp1, sp2);
        const auto grid = testutil::cylinder_grid_search(Q, D, sp1, sp2, 21);
        // the minimizing grid pair must already be nearly touching, and the
        // constructed point should sit within one grid cell of it
        const double cell =
            std::max(2.0 * D / 20.0, 0.9 * R * kTwoPi * 2.6 / 120.0);
        CHECK(grid.min_dist < cell);
        const double dx = ci.z[0] - grid.best[0];
        const double dy = ci.z[1] - grid.best[1];
        const double dz = ci.z[2] - grid.best[2];
        CHECK(std::sqrt(dx * dx + dy * dy + dz * dz) < 2.0 * cell);
    }
}
