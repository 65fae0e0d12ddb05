#pragma once

#include <vector>

#include "shadowlab/field4d.hpp" // Vec3 / Mat3
#include "shadowlab/planar.hpp"

namespace shadowlab {

// Linear map between two 3D hyperplane frames (y1,y2,y3) -> (x1,x2,x3).
// The cylinder axes are the first coordinate directions on each side; the
// hypothesis is that the image of the y1-axis is not the x1-axis.
struct LinearMap3 {
    Mat3 m{};

    Vec3 apply(const Vec3& v) const;
    Vec3 apply_inverse(const Vec3& v) const;
    double det() const;
};

// Densely sampled planar curve in the {x1 = 0} plane of its hyperplane.
// params carry the curve parameter per sample (orbit time when the spiral is
// a flow orbit); they are optional but must match pts in size when present.
struct Spiral {
    std::vector<PlanarPoint> pts;
    std::vector<double> params;
};

// Axial half-width D plus the spiral cross-section describe the open set
// {|axial| < D, planar part on the spiral}.
struct CylinderSpec {
    double D = 0.0;
    const Spiral* base = nullptr;
};

// True iff the unwrapped polar angle along the samples spans an interval of
// length at least 2*pi + resolution.
bool hits_every_ray(const Spiral& sp, double resolution);

// Inscribed parallelogram construction: returns the largest safe R (with a
// 0.9 factor) such that the R-disc of the plane spanned by the two cylinder
// axis images fits inside a parallelogram inscribed in the slab intersection,
// on both sides of the map. Throws DegenerateLines when the axis images are
// parallel within tolerance.
double radius_for(const LinearMap3& Q, double D, double tol = 1e-12);

struct CylinderIntersection {
    Vec3 z{};          // point in the first frame, inside both cylinders
    double axial1 = 0; // axial coordinate of z (|.| < D certified)
    double axial2 = 0; // axial coordinate of Q^{-1} z in the second frame
    double R = 0;      // ball radius used for containment
    double param1 = 0; // interpolated spiral parameter at the crossing
    double param2 = 0;
    Vec3 z1{}, z2{};   // spiral/line intersection points in their own frames
};

// Constructive cylinder intersection: crosses each spiral with the trace of
// the common plane, runs the two axis-parallel lines, intersects them and
// certifies membership in both cylinders. Preconditions: both spirals inside
// B(R, 0) for R = radius_for(Q, D) and winding past a full turn.
CylinderIntersection intersect_cylinders(const LinearMap3& Q, double D,
                                         const Spiral& sp1, const Spiral& sp2,
                                         double tol = 1e-12);

} // namespace shadowlab
