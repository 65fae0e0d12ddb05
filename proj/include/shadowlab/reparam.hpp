#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace shadowlab {

// Strictly increasing piecewise-linear homeomorphism of the real line.
// Canonical form: a finite knot list (t_i, v_i), both coordinates strictly
// increasing, linear interpolation between knots and unit slope beyond the
// first/last knot. No knots at all is the identity.
class Reparam {
  public:
    Reparam() = default; // identity

    static Reparam identity() { return Reparam(); }
    // Validates strict monotonicity of both coordinates.
    static Reparam from_knots(std::vector<std::pair<double, double>> knots);

    double operator()(double t) const;

    Reparam inverse() const;

    std::size_t knot_count() const { return t_.size(); }
    const std::vector<double>& knot_times() const { return t_; }
    const std::vector<double>& knot_values() const { return v_; }
    std::vector<std::pair<double, double>> knots() const;

  private:
    std::vector<double> t_;
    std::vector<double> v_;
};

// Chord-slope certificate for membership in Rep(a): every chord slope lies in
// the open interval (1-a, 1+a). For piecewise-linear maps this reduces to the
// segment slopes (chords are convex combinations of segment slopes), with the
// unit-slope extensions included. Slopes are tested with a relative margin of
// 1e-12 so boundary values do not flap.
bool in_rep_class(const Reparam& h, double a);

// h2 after h1, as an exact piecewise-linear map: knots at h1's knots plus
// h1-preimages of h2's knots.
Reparam compose(const Reparam& h2, const Reparam& h1);

// One prescribed affine piece of a reparametrization: h(t) = slope*t + offset
// on [t_lo, t_hi]. Unbounded pieces (lo_unbounded/hi_unbounded) must have unit
// slope, matching the extension rule of the canonical form.
struct AffinePiece {
    double t_lo = 0.0, t_hi = 0.0;
    double slope = 1.0, offset = 0.0;
    bool lo_unbounded = false;
    bool hi_unbounded = false;

    double at(double t) const { return slope * t + offset; }
};

// Builds the reparametrization matching every prescribed piece exactly and
// interpolating linearly across the gaps. Pieces must be increasing and
// order-compatible (each piece's image stays below the next piece's); throws
// IncompatiblePieces otherwise.
Reparam assemble(std::vector<AffinePiece> pieces);

} // namespace shadowlab
