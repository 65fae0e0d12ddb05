#include "shadowlab/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "shadowlab/errors.hpp"

namespace shadowlab {

namespace {

double dot3(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
Vec3 add3(const Vec3& a, const Vec3& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
Vec3 scale3(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }

Mat3 invert3(const Mat3& m) {
    const double d =
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
        m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
        m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if (d == 0.0 || !std::isfinite(d))
        throw DegenerateLines("linear map is singular");
    const double id = 1.0 / d;
    Mat3 inv;
    inv[0][0] = id * (m[1][1] * m[2][2] - m[1][2] * m[2][1]);
    inv[0][1] = id * (m[0][2] * m[2][1] - m[0][1] * m[2][2]);
    inv[0][2] = id * (m[0][1] * m[1][2] - m[0][2] * m[1][1]);
    inv[1][0] = id * (m[1][2] * m[2][0] - m[1][0] * m[2][2]);
    inv[1][1] = id * (m[0][0] * m[2][2] - m[0][2] * m[2][0]);
    inv[1][2] = id * (m[0][2] * m[1][0] - m[0][0] * m[1][2]);
    inv[2][0] = id * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    inv[2][1] = id * (m[0][1] * m[2][0] - m[0][0] * m[2][1]);
    inv[2][2] = id * (m[0][0] * m[1][1] - m[0][1] * m[1][0]);
    return inv;
}

Vec3 matvec(const Mat3& m, const Vec3& v) {
    return {m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2]};
}

// Frame data shared by the construction: the common plane V and the
// parallelogram adapted to the two axis images.
struct PlaneFrame {
    Vec3 u1;        // first-frame axis (unit)
    Vec3 u2;        // image of the second axis, normalized
    double qv_norm; // |Q e1|
    Vec3 f1, f2;    // orthonormal basis of V
    double cos_phi, sin_phi;
    double s_max, t_max; // parallelogram half-sides along u1, u2
    double inradius;
    double g_abs;   // |first coordinate of Q^{-1} e1|
    double c1;      // |first coordinate of u2|
};

PlaneFrame make_frame(const LinearMap3& Q, double D, double tol) {
    PlaneFrame fr;
    fr.u1 = {1.0, 0.0, 0.0};
    Vec3 qv = Q.apply({1.0, 0.0, 0.0});
    fr.qv_norm = norm3(qv);
    if (fr.qv_norm == 0.0) throw DegenerateLines("axis image vanishes");
    fr.u2 = scale3(1.0 / fr.qv_norm, qv);
    Vec3 perp = {0.0, fr.u2[1], fr.u2[2]}; // u2 minus its u1 component
    const double pn = norm3(perp);
    if (pn < tol)
        throw DegenerateLines("axis image parallel to the first axis");
    fr.f1 = fr.u1;
    fr.f2 = scale3(1.0 / pn, perp);
    fr.cos_phi = fr.u2[0];
    fr.sin_phi = pn;

    const Vec3 qinv_e1 = Q.apply_inverse({1.0, 0.0, 0.0});
    fr.g_abs = std::abs(qinv_e1[0]);
    fr.c1 = std::abs(fr.u2[0]);
    const double c2 = 1.0 / fr.qv_norm;

    // Pick half-sides by a coarse scan over the aspect angle: gauge both slab
    // constraints and keep the parallelogram with the best inscribed circle.
    double best_r = -1.0, best_s = 0.0, best_t = 0.0;
    for (int i = 1; i < 64; ++i) {
        const double th = (kTwoPi / 4.0) * (static_cast<double>(i) / 64.0);
        const double cs = std::cos(th), sn = std::sin(th);
        const double bind =
            std::max(cs + sn * fr.c1, cs * fr.g_abs + sn * c2);
        const double rho = 0.9 * D / bind;
        const double s_half = rho * cs, t_half = rho * sn;
        const double inr = std::min(s_half, t_half) * fr.sin_phi;
        if (inr > best_r) {
            best_r = inr;
            best_s = s_half;
            best_t = t_half;
        }
    }
    fr.s_max = best_s;
    fr.t_max = best_t;
    fr.inradius = best_r;
    return fr;
}

// Parallelogram gauge of a point expressed in the (f1,f2) plane basis.
double gauge(const PlaneFrame& fr, double p1, double p2) {
    const double t = p2 / fr.sin_phi;
    const double s = p1 - t * fr.cos_phi;
    return std::max(std::abs(s) / fr.s_max, std::abs(t) / fr.t_max);
}

// Largest singular value of the restriction of Q to the plane Q^{-1} V,
// measured into the (f1,f2) coordinates of V.
double sigma_max_into_plane(const LinearMap3& Q, const PlaneFrame& fr) {
    // Basis of Q^{-1}V: preimages of f1 and f2, orthonormalized.
    Vec3 w1 = Q.apply_inverse(fr.f1);
    Vec3 w2 = Q.apply_inverse(fr.f2);
    const double n1 = norm3(w1);
    w1 = scale3(1.0 / n1, w1);
    Vec3 w2p = add3(w2, scale3(-dot3(w2, w1), w1));
    const double n2 = norm3(w2p);
    if (n2 == 0.0) throw DegenerateLines("collapsed preimage plane");
    w2p = scale3(1.0 / n2, w2p);

    const Vec3 a = Q.apply(w1);
    const Vec3 b = Q.apply(w2p);
    const double m11 = dot3(a, fr.f1), m21 = dot3(a, fr.f2);
    const double m12 = dot3(b, fr.f1), m22 = dot3(b, fr.f2);
    const double t = m11 * m11 + m12 * m12 + m21 * m21 + m22 * m22;
    const double d = m11 * m22 - m12 * m21;
    const double mid = 0.5 * t;
    const double rad = std::sqrt(std::max(0.0, mid * mid - d * d));
    return std::sqrt(mid + rad);
}

struct LineCross {
    PlanarPoint point;
    double param;
};

// First sign change of the linear functional cutting the plane trace.
LineCross cross_line(const Spiral& sp, PlanarPoint dir, const char* who) {
    if (sp.pts.size() < 2) throw SpiralTooCoarse(std::string(who) + ": too few samples");
    auto side = [&](PlanarPoint p) { return dir.x1 * p.x2 - dir.x2 * p.x1; };
    double prev = side(sp.pts[0]);
    for (std::size_t i = 1; i < sp.pts.size(); ++i) {
        const double cur = side(sp.pts[i]);
        if (prev == 0.0) {
            const double par = sp.params.empty() ? static_cast<double>(i - 1)
                                                 : sp.params[i - 1];
            return {sp.pts[i - 1], par};
        }
        if ((prev < 0.0) != (cur < 0.0)) {
            const double u = prev / (prev - cur);
            PlanarPoint z{sp.pts[i - 1].x1 + u * (sp.pts[i].x1 - sp.pts[i - 1].x1),
                          sp.pts[i - 1].x2 + u * (sp.pts[i].x2 - sp.pts[i - 1].x2)};
            double par = static_cast<double>(i - 1) + u;
            if (!sp.params.empty())
                par = sp.params[i - 1] + u * (sp.params[i] - sp.params[i - 1]);
            return {z, par};
        }
        prev = cur;
    }
    throw SpiralTooCoarse(std::string(who) +
                          ": no sample pair brackets the plane trace");
}

} // namespace

Vec3 LinearMap3::apply(const Vec3& v) const { return matvec(m, v); }
Vec3 LinearMap3::apply_inverse(const Vec3& v) const { return matvec(invert3(m), v); }
double LinearMap3::det() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

bool hits_every_ray(const Spiral& sp, double resolution) {
    if (sp.pts.size() < 2) return false;
    double span_lo = 0.0, span_hi = 0.0, phi = 0.0;
    bool started = false;
    double prev_angle = 0.0;
    for (const auto& p : sp.pts) {
        if (p.is_origin()) continue;
        const double ang = std::atan2(p.x2, p.x1);
        if (!started) {
            started = true;
            prev_angle = ang;
            continue;
        }
        double d = ang - prev_angle;
        while (d > kTwoPi / 2.0) d -= kTwoPi;
        while (d < -kTwoPi / 2.0) d += kTwoPi;
        phi += d;
        prev_angle = ang;
        span_lo = std::min(span_lo, phi);
        span_hi = std::max(span_hi, phi);
    }
    return started && (span_hi - span_lo >= kTwoPi + resolution);
}

double radius_for(const LinearMap3& Q, double D, double tol) {
    if (!(D > 0.0)) throw PreconditionError("radius_for: D must be positive");
    const PlaneFrame fr = make_frame(Q, D, tol);
    const double r1 = fr.inradius;
    const double r2 = fr.inradius / sigma_max_into_plane(Q, fr);
    return 0.9 * std::min(r1, r2);
}

CylinderIntersection intersect_cylinders(const LinearMap3& Q, double D,
                                         const Spiral& sp1, const Spiral& sp2,
                                         double tol) {
    const PlaneFrame fr = make_frame(Q, D, tol);
    const double R = radius_for(Q, D, tol);

    for (const auto& p : sp1.pts)
        if (p.norm() > R)
            throw NotInBall("first spiral leaves the containment ball");
    for (const auto& p : sp2.pts)
        if (p.norm() > R)
            throw NotInBall("second spiral leaves the containment ball");
    if (!hits_every_ray(sp1, 1e-6) || !hits_every_ray(sp2, 1e-6))
        throw PreconditionError("intersect_cylinders: spiral misses a full turn");

    // Trace of V in the first planar frame: direction of u2 minus its axial
    // component, projected onto (x2, x3).
    const PlanarPoint dir1{fr.u2[1], fr.u2[2]};
    const LineCross c1 = cross_line(sp1, dir1, "first spiral");
    const Vec3 z1{0.0, c1.point.x1, c1.point.x2};

    // Trace of Q^{-1}V in the second planar frame.
    Vec3 qinv_u1 = Q.apply_inverse(fr.u1);
    const PlanarPoint dir2{qinv_u1[1], qinv_u1[2]};
    if (std::hypot(dir2.x1, dir2.x2) < tol)
        throw DegenerateLines("preimage trace degenerates");
    const LineCross c2 = cross_line(sp2, dir2, "second spiral");
    const Vec3 z2{0.0, c2.point.x1, c2.point.x2};
    const Vec3 qz2 = Q.apply(z2);

    // Intersect the two axis-parallel lines inside V using plane coordinates.
    const double z1_2 = dot3(z1, fr.f2);
    const double qz2_1 = dot3(qz2, fr.f1), qz2_2 = dot3(qz2, fr.f2);
    const double qv_2 = fr.qv_norm * fr.sin_phi;
    const double t_par = (z1_2 - qz2_2) / qv_2;          // along Q e1
    const double axial2 = t_par;                          // = axial coord of Q^{-1} z
    const double z_1 = qz2_1 + t_par * fr.qv_norm * fr.cos_phi;
    const double s_par = z_1 - dot3(z1, fr.f1);           // along e1

    CylinderIntersection out;
    out.z = add3(z1, scale3(s_par, fr.u1));
    out.axial1 = s_par;
    out.axial2 = axial2;
    out.R = R;
    out.param1 = c1.param;
    out.param2 = c2.param;
    out.z1 = z1;
    out.z2 = z2;

    if (!(std::abs(out.axial1) < D && std::abs(out.axial2) < D))
        throw Error("cylinder intersection failed its axial certificate");
    return out;
}

} // namespace shadowlab
