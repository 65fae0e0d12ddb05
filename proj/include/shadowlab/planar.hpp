#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "shadowlab/params.hpp"
#include "shadowlab/reparam.hpp"

namespace shadowlab {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

struct PlanarPoint {
    double x1 = 0.0;
    double x2 = 0.0;

    double norm() const { return std::hypot(x1, x2); }
    bool is_origin() const { return x1 == 0.0 && x2 == 0.0; }
    // Polar angle in [0, 2*pi). Undefined at the origin (throws DomainError).
    double angle() const;
};

PlanarPoint operator+(PlanarPoint a, PlanarPoint b);
PlanarPoint operator-(PlanarPoint a, PlanarPoint b);
PlanarPoint operator*(double s, PlanarPoint a);
double dist(PlanarPoint a, PlanarPoint b);

// Log-polar representation used internally by the flow: radius as log,
// angle unwrapped (winding counts preserved). Exact for any |t|, immune to
// radius under/overflow.
struct LogPolar {
    double log_r;
    double phi;

    double radius() const { return std::exp(log_r); }
    PlanarPoint cartesian() const {
        const double r = std::exp(log_r);
        return {r * std::cos(phi), r * std::sin(phi)};
    }
    static LogPolar from(PlanarPoint x) {
        return {std::log(x.norm()), x.angle()};
    }
};

// Reduce an angle to [0, 2*pi).
double principal_angle(double phi);
// Distance between two angles on the circle, in [0, pi].
double angular_gap(double alpha, double beta);

// The radial angular-speed profile:
//   b(r) = 0 on {0} and past (K-1)*l,
//   b(r) = -1/ln r on (0, 2l),
//   cubic Hermite joint on [2l, (K-1)*l], C^1 at both ends, nonnegative.
//
// The winding potential G(w) with w = ln r satisfies dG/dw = b(e^w)
// (equivalently G(ln u) = integral of b(u)/u du), so the flow's angular
// displacement over [0,t] is (G(w0 + a t) - G(w0)) / a. On the logarithmic
// zone G(w) = -ln(-w) in closed form; across the Hermite band it is
// tabulated once at construction.
class WindingProfile {
  public:
    explicit WindingProfile(const ValidatedParams& vp);

    double a() const { return a_; }
    double l() const { return l_; }
    double K() const { return K_; }
    double band_lo() const { return r_lo_; }   // 2l
    double band_hi() const { return r_hi_; }   // (K-1)l

    // b and b'. value() is total on [0, inf); slope() throws DomainError at 0.
    double value(double r) const;
    double slope(double r) const;

    // Winding potential as a function of w = ln r, and the angular
    // displacement accumulated by the flow over time t from log-radius w0.
    double potential(double w) const;
    double winding_change(double w0, double t) const {
        return (potential(w0 + a_ * t) - potential(w0)) / a_;
    }

    // Largest b on [0, inf) and the field-speed bound sup |Y| on the unit ball.
    double max_value() const { return b_max_; }
    double speed_bound_unit_ball() const { return std::sqrt(a_ * a_ + b_max_ * b_max_); }

  private:
    double band_cumulative(double w) const; // integral of b over log-radius across the band

    double a_, l_, K_;
    double r_lo_, r_hi_, w_lo_, w_hi_;
    // Hermite cubic H(s) = p0*h00(s) + width*m0*h10(s), s in [0,1]
    double p0_, m0_, width_;
    double b_max_;
    // cumulative band potential at log-spaced nodes
    std::vector<double> band_cum_;
    double dw_;
    double band_total_;
};

// The planar vector field: x' = a*x1 - b(|x|)*x2, y' = b(|x|)*x1 + a*x2,
// i.e. radial growth at rate a and angular speed b(r).
PlanarPoint planar_field(const WindingProfile& prof, PlanarPoint x);

// Analytic Jacobian of the field; a*Identity at the origin and outside the
// profile support.
std::array<std::array<double, 2>, 2> planar_jacobian(const WindingProfile& prof,
                                                     PlanarPoint x);

// Closed-form flow. Radius is exactly e^{a t} |x|; the angle adds the
// winding potential difference.
LogPolar planar_flow_log(const WindingProfile& prof, double t, LogPolar z);
PlanarPoint planar_flow(const WindingProfile& prof, double t, PlanarPoint x);

// Finds t < T0 with arg(flow(t, x0)) == theta (mod 2pi) within tol_angle.
// Marches backward with the closed-form winding potential and bisects; the
// backward winding diverges, so the search fails only if the horizon budget
// is exhausted (reported as NotFoundError).
double winding_time(const WindingProfile& prof, PlanarPoint x0, double theta,
                    double T0, double horizon = 1e9, double tol_angle = 1e-9);

// Backward winding accumulated on [t, 0] for log-radius w0 (positive number,
// grows without bound as t -> -inf for any starting radius).
double backward_winding(const WindingProfile& prof, double w0, double t);

struct AngleGapResult {
    bool premise_holds;
    double gap;          // |arg x1 - arg x0| reduced to [0, pi]
    double worst_dist;   // largest premise distance seen on the grid
    double worst_t;
    int checked;         // grid times with both norms < 1
};

// Grid check of the tracking premise between the orbit of x0 and the
// h-reparametrized orbit of x1: dist(flow(h(t), x1), flow(t, x0)) < l at
// every grid time where both points have norm < 1. Preconditions:
// |x0| < l, |x1| < 2l, both nonzero, h certified in Rep(l).
AngleGapResult angle_gap_check(const WindingProfile& prof, PlanarPoint x0,
                               PlanarPoint x1, const Reparam& h,
                               double horizon, double dt_override = 0.0);

} // namespace shadowlab
