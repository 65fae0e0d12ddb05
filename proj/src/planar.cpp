#include "shadowlab/planar.hpp"

#include <algorithm>
#include <cmath>

#include "shadowlab/errors.hpp"
#include "shadowlab/quadrature.hpp"

namespace shadowlab {

double PlanarPoint::angle() const {
    if (is_origin())
        throw DomainError("polar angle undefined at the origin");
    return principal_angle(std::atan2(x2, x1));
}

PlanarPoint operator+(PlanarPoint a, PlanarPoint b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
PlanarPoint operator-(PlanarPoint a, PlanarPoint b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
PlanarPoint operator*(double s, PlanarPoint a) { return {s * a.x1, s * a.x2}; }
double dist(PlanarPoint a, PlanarPoint b) { return (a - b).norm(); }

double principal_angle(double phi) {
    double r = std::fmod(phi, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

double angular_gap(double alpha, double beta) {
    double d = std::abs(principal_angle(alpha) - principal_angle(beta));
    if (d > kTwoPi / 2.0) d = kTwoPi - d;
    return d;
}

// ---------------------------------------------------------------------------
// WindingProfile
// ---------------------------------------------------------------------------

namespace {
constexpr int kBandIntervals = 2048;
}

WindingProfile::WindingProfile(const ValidatedParams& vp)
    : a_(vp->a), l_(vp->l), K_(vp->K) {
    r_lo_ = 2.0 * l_;
    r_hi_ = (K_ - 1.0) * l_;
    w_lo_ = std::log(r_lo_);
    w_hi_ = std::log(r_hi_);
    width_ = r_hi_ - r_lo_;
    p0_ = -1.0 / std::log(r_lo_);
    m0_ = 1.0 / (r_lo_ * std::log(r_lo_) * std::log(r_lo_));

    // Nonnegativity of the Hermite joint, checked exactly: with zero value
    // and slope at the right end, H(s) = p0*h00(s) + width*m0*h10(s); the
    // minimum over [0,1] is at an endpoint or a critical point of the cubic.
    const double al = 2.0 * p0_ + width_ * m0_;
    const double be = -3.0 * p0_ - 2.0 * width_ * m0_;
    const double ga = width_ * m0_;
    auto hermite = [&](double s) {
        return ((al * s + be) * s + ga) * s + p0_;
    };
    double hmin = std::min(hermite(0.0), hermite(1.0));
    double hmax = std::max(hermite(0.0), hermite(1.0));
    const double qa = 3.0 * al, qb = 2.0 * be, qc = ga;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc >= 0.0 && qa != 0.0) {
        for (double sgn : {-1.0, 1.0}) {
            const double s = (-qb + sgn * std::sqrt(disc)) / (2.0 * qa);
            if (s > 0.0 && s < 1.0) {
                hmin = std::min(hmin, hermite(s));
                hmax = std::max(hmax, hermite(s));
            }
        }
    }
    if (hmin < -1e-12 * p0_)
        throw ConstraintViolation(
            "winding profile: Hermite joint dips below zero on the band");
    b_max_ = std::max(p0_, hmax);

    // Cumulative band potential at log-spaced nodes. The integrand in w is
    // just b(e^w), smooth across the band, so one Kronrod panel per node
    // interval is ample.
    dw_ = (w_hi_ - w_lo_) / kBandIntervals;
    band_cum_.assign(kBandIntervals + 1, 0.0);
    auto integrand = [&](double w) { return value(std::exp(w)); };
    double acc = 0.0;
    for (int i = 0; i < kBandIntervals; ++i) {
        const double wa = w_lo_ + i * dw_;
        acc += gk15(integrand, wa, wa + dw_).value;
        band_cum_[static_cast<std::size_t>(i) + 1] = acc;
    }
    band_total_ = acc;
}

double WindingProfile::value(double r) const {
    if (r < 0.0) throw DomainError("profile value: negative radius");
    if (r == 0.0 || r > r_hi_) return 0.0;
    if (r < r_lo_) return -1.0 / std::log(r);
    const double s = (r - r_lo_) / width_;
    const double al = 2.0 * p0_ + width_ * m0_;
    const double be = -3.0 * p0_ - 2.0 * width_ * m0_;
    const double ga = width_ * m0_;
    // clamp the last-bit cancellation at the vanishing right end
    return std::max(0.0, ((al * s + be) * s + ga) * s + p0_);
}

double WindingProfile::slope(double r) const {
    if (r <= 0.0) throw DomainError("profile slope undefined at r <= 0");
    if (r > r_hi_) return 0.0;
    if (r < r_lo_) {
        const double lr = std::log(r);
        return 1.0 / (r * lr * lr);
    }
    const double s = (r - r_lo_) / width_;
    const double al = 2.0 * p0_ + width_ * m0_;
    const double be = -3.0 * p0_ - 2.0 * width_ * m0_;
    const double ga = width_ * m0_;
    return ((3.0 * al * s + 2.0 * be) * s + ga) / width_;
}

double WindingProfile::band_cumulative(double w) const {
    if (w <= w_lo_) return 0.0;
    if (w >= w_hi_) return band_total_;
    const double x = (w - w_lo_) / dw_;
    int i = static_cast<int>(x);
    if (i >= kBandIntervals) i = kBandIntervals - 1;
    const double wa = w_lo_ + i * dw_;
    auto integrand = [&](double u) { return value(std::exp(u)); };
    return band_cum_[static_cast<std::size_t>(i)] + gk15(integrand, wa, w).value;
}

double WindingProfile::potential(double w) const {
    // dG/dw = b(e^w): -1/w on the logarithmic zone (w < ln 2l < 0, so
    // G = -ln(-w)), tabulated across the band, constant past the cutoff.
    if (w <= w_lo_) return -std::log(-w);
    const double base = -std::log(-w_lo_);
    if (w >= w_hi_) return base + band_total_;
    return base + band_cumulative(w);
}

// ---------------------------------------------------------------------------
// Field, Jacobian, flow
// ---------------------------------------------------------------------------

PlanarPoint planar_field(const WindingProfile& prof, PlanarPoint x) {
    if (x.is_origin()) return {0.0, 0.0};
    const double b = prof.value(x.norm());
    return {prof.a() * x.x1 - b * x.x2, b * x.x1 + prof.a() * x.x2};
}

std::array<std::array<double, 2>, 2> planar_jacobian(const WindingProfile& prof,
                                                     PlanarPoint x) {
    const double a = prof.a();
    if (x.is_origin() || x.norm() > prof.band_hi())
        return {{{a, 0.0}, {0.0, a}}};
    const double r = x.norm();
    const double b = prof.value(r);
    const double bp = prof.slope(r);
    const double u1 = x.x1 / r, u2 = x.x2 / r;
    return {{{a - bp * x.x2 * u1, -b - bp * x.x2 * u2},
             {b + bp * x.x1 * u1, a + bp * x.x1 * u2}}};
}

LogPolar planar_flow_log(const WindingProfile& prof, double t, LogPolar z) {
    const double w1 = z.log_r + prof.a() * t;
    return {w1, z.phi + prof.winding_change(z.log_r, t)};
}

PlanarPoint planar_flow(const WindingProfile& prof, double t, PlanarPoint x) {
    if (t == 0.0 || x.is_origin()) return x;
    return planar_flow_log(prof, t, LogPolar::from(x)).cartesian();
}

// ---------------------------------------------------------------------------
// Winding-time solver
// ---------------------------------------------------------------------------

double backward_winding(const WindingProfile& prof, double w0, double t) {
    return -prof.winding_change(w0, t); // t < 0 gives a positive number
}

double winding_time(const WindingProfile& prof, PlanarPoint x0, double theta,
                    double T0, double horizon, double tol_angle) {
    if (x0.is_origin())
        throw PreconditionError("winding_time: x0 must not be the origin");
    const double w0 = std::log(x0.norm());
    const double phi0 = x0.angle();
    auto phi_at = [&](double t) { return phi0 + prof.winding_change(w0, t); };

    const double phi_T0 = phi_at(T0);
    double k = std::floor((phi_T0 - theta) / kTwoPi);
    const double min_sep = 1e-9 * std::max(1.0, std::abs(T0));

    for (int attempt = 0; attempt < 4; ++attempt) {
        const double target = theta + kTwoPi * k;
        // Expand a bracket below T0. phi is nondecreasing and diverges to
        // -inf backward in time, so the bracket always closes eventually.
        double step = 1.0;
        double t_lo = T0 - step;
        while (phi_at(t_lo) > target - tol_angle) {
            step *= 2.0;
            if (step > horizon)
                throw NotFoundError("winding_time: backward horizon exhausted");
            t_lo = T0 - step;
        }
        double lo = t_lo, hi = T0;
        // phi(lo) < target - tol <= phi(hi) unless the target sits above
        // phi(T0) by rounding; guard and retreat a turn if so.
        if (phi_at(hi) < target) {
            k -= 1.0;
            continue;
        }
        for (int it = 0; it < 200 && (hi - lo) > 1e-13 * std::max(1.0, std::abs(lo)); ++it) {
            const double mid = 0.5 * (lo + hi);
            if (phi_at(mid) < target)
                lo = mid;
            else
                hi = mid;
        }
        const double t = 0.5 * (lo + hi);
        if (t < T0 - min_sep && std::abs(phi_at(t) - target) <= tol_angle)
            return t;
        k -= 1.0; // landed on T0 itself (or failed residual): take one more turn
    }
    throw NotFoundError("winding_time: no admissible root below T0");
}

// ---------------------------------------------------------------------------
// Angle-gap premise check
// ---------------------------------------------------------------------------

AngleGapResult angle_gap_check(const WindingProfile& prof, PlanarPoint x0,
                               PlanarPoint x1, const Reparam& h, double horizon,
                               double dt_override) {
    const double l = prof.l();
    if (x0.is_origin() || x1.is_origin())
        throw PreconditionError("angle_gap_check: points must be nonzero");
    if (!(x0.norm() < l))
        throw PreconditionError("angle_gap_check: |x0| < l required");
    if (!(x1.norm() < 2.0 * l))
        throw PreconditionError("angle_gap_check: |x1| < 2l required");
    if (!in_rep_class(h, l))
        throw PreconditionError("angle_gap_check: h not certified in Rep(l)");

    // Grid step: inter-sample motion must stay well under the premise scale.
    const double speed = prof.speed_bound_unit_ball();
    double dt = dt_override > 0.0 ? dt_override : 0.9 * (l / 10.0) / speed;
    if (!(dt * speed < l / 10.0))
        throw PreconditionError("angle_gap_check: grid step too coarse for l");

    const LogPolar z0 = LogPolar::from(x0);
    const LogPolar z1 = LogPolar::from(x1);

    AngleGapResult res;
    res.gap = angular_gap(z1.phi, z0.phi);
    res.premise_holds = true;
    res.worst_dist = 0.0;
    res.worst_t = 0.0;
    res.checked = 0;

    const long n = static_cast<long>(std::ceil(horizon / dt));
    for (long i = -n; i <= n; ++i) {
        const double t = static_cast<double>(i) * dt;
        const LogPolar p0 = planar_flow_log(prof, t, z0);
        const LogPolar p1 = planar_flow_log(prof, h(t), z1);
        if (p0.log_r >= 0.0 || p1.log_r >= 0.0) continue; // a norm reached 1
        ++res.checked;
        const double d = dist(p0.cartesian(), p1.cartesian());
        if (d > res.worst_dist) {
            res.worst_dist = d;
            res.worst_t = t;
        }
        if (!(d < l)) res.premise_holds = false;
    }
    return res;
}

} // namespace shadowlab
