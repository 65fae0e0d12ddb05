#pragma once

// Brute-force oracle for the cylinder intersection: coarse grid over the
// first cylinder (spiral parameter x axial offset), minimizing the distance
// to the image of the second cylinder.

#include <cmath>
#include <limits>

#include "shadowlab/geometry.hpp"

namespace shadowlab::testutil {

struct GridSearchResult {
    Vec3 best{};
    double min_dist = std::numeric_limits<double>::infinity();
};

inline GridSearchResult cylinder_grid_search(const LinearMap3& Q, double D,
                                             const Spiral& sp1, const Spiral& sp2,
                                             int axial_steps = 41) {
    GridSearchResult out;
    for (const auto& p1 : sp1.pts) {
        for (int ia = 0; ia < axial_steps; ++ia) {
            const double a1 = -D + 2.0 * D * ia / (axial_steps - 1);
            const Vec3 z1{a1, p1.x1, p1.x2};
            for (const auto& p2 : sp2.pts) {
                for (int ja = 0; ja < axial_steps; ++ja) {
                    const double a2 = -D + 2.0 * D * ja / (axial_steps - 1);
                    const Vec3 qz = Q.apply({a2, p2.x1, p2.x2});
                    const double dx = z1[0] - qz[0];
                    const double dy = z1[1] - qz[1];
                    const double dz = z1[2] - qz[2];
                    const double dd = std::sqrt(dx * dx + dy * dy + dz * dz);
                    if (dd < out.min_dist) {
                        out.min_dist = dd;
                        out.best = {0.5 * (z1[0] + qz[0]), 0.5 * (z1[1] + qz[1]),
                                    0.5 * (z1[2] + qz[2])};
                    }
                }
            }
        }
    }
    return out;
}

// Same search restricted to grid pairs whose midpoint lies near a given
// point, for confirming one crossing of a multi-crossing configuration.
inline GridSearchResult cylinder_grid_search_near(const LinearMap3& Q, double D,
                                                  const Spiral& sp1,
                                                  const Spiral& sp2,
                                                  const Vec3& center,
                                                  double radius,
                                                  int axial_steps = 41) {
    GridSearchResult out;
    for (const auto& p1 : sp1.pts) {
        for (int ia = 0; ia < axial_steps; ++ia) {
            const double a1 = -D + 2.0 * D * ia / (axial_steps - 1);
            const Vec3 z1{a1, p1.x1, p1.x2};
            for (const auto& p2 : sp2.pts) {
                for (int ja = 0; ja < axial_steps; ++ja) {
                    const double a2 = -D + 2.0 * D * ja / (axial_steps - 1);
                    const Vec3 qz = Q.apply({a2, p2.x1, p2.x2});
                    const Vec3 mid{0.5 * (z1[0] + qz[0]), 0.5 * (z1[1] + qz[1]),
                                   0.5 * (z1[2] + qz[2])};
                    const double cx = mid[0] - center[0];
                    const double cy = mid[1] - center[1];
                    const double cz = mid[2] - center[2];
                    if (std::sqrt(cx * cx + cy * cy + cz * cz) > radius) continue;
                    const double dx = z1[0] - qz[0];
                    const double dy = z1[1] - qz[1];
                    const double dz = z1[2] - qz[2];
                    const double dd = std::sqrt(dx * dx + dy * dy + dz * dz);
                    if (dd < out.min_dist) {
                        out.min_dist = dd;
                        out.best = mid;
                    }
                }
            }
        }
    }
    return out;
}

} // namespace shadowlab::testutil
