#include "shadowlab/reparam.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shadowlab/errors.hpp"

namespace shadowlab {

Reparam Reparam::from_knots(std::vector<std::pair<double, double>> knots) {
    std::sort(knots.begin(), knots.end());
    Reparam h;
    h.t_.reserve(knots.size());
    h.v_.reserve(knots.size());
    for (const auto& [t, v] : knots) {
        if (!h.t_.empty()) {
            if (!(t > h.t_.back()))
                throw PreconditionError("reparam knots: times must strictly increase");
            if (!(v > h.v_.back()))
                throw PreconditionError("reparam knots: values must strictly increase");
            const double slope = (v - h.v_.back()) / (t - h.t_.back());
            if (!std::isfinite(slope) || slope <= 0.0)
                throw PreconditionError("reparam knots: nonpositive or infinite slope");
        }
        h.t_.push_back(t);
        h.v_.push_back(v);
    }
    return h;
}

double Reparam::operator()(double t) const {
    if (t_.empty()) return t;
    if (t <= t_.front()) return v_.front() + (t - t_.front());
    if (t >= t_.back()) return v_.back() + (t - t_.back());
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - t_.begin());
    const double u = (t - t_[i - 1]) / (t_[i] - t_[i - 1]);
    return v_[i - 1] + u * (v_[i] - v_[i - 1]);
}

Reparam Reparam::inverse() const {
    Reparam g;
    g.t_ = v_;
    g.v_ = t_;
    return g;
}

std::vector<std::pair<double, double>> Reparam::knots() const {
    std::vector<std::pair<double, double>> out;
    out.reserve(t_.size());
    for (std::size_t i = 0; i < t_.size(); ++i) out.emplace_back(t_[i], v_[i]);
    return out;
}

bool in_rep_class(const Reparam& h, double a) {
    if (!(a > 0.0)) return false;
    const double margin = 1e-12 * (1.0 + a);
    const double lo = (1.0 - a) + margin;
    const double hi = (1.0 + a) - margin;
    // Extensions have slope exactly 1, always admissible for a > 0.
    const auto& t = h.knot_times();
    const auto& v = h.knot_values();
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double s = (v[i] - v[i - 1]) / (t[i] - t[i - 1]);
        if (!(s > lo && s < hi)) return false;
    }
    return true;
}

Reparam compose(const Reparam& h2, const Reparam& h1) {
    std::vector<double> ts = h1.knot_times();
    const Reparam h1inv = h1.inverse();
    for (double u : h2.knot_times()) ts.push_back(h1inv(u));
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    if (ts.empty()) {
        // both identity-like: compose offsets via evaluation at 0 and 1
        ts.push_back(0.0);
        ts.push_back(1.0);
    }
    std::vector<std::pair<double, double>> knots;
    knots.reserve(ts.size());
    for (double t : ts) knots.emplace_back(t, h2(h1(t)));
    return Reparam::from_knots(std::move(knots));
}

Reparam assemble(std::vector<AffinePiece> pieces) {
    if (pieces.empty()) return Reparam::identity();
    std::sort(pieces.begin(), pieces.end(),
              [](const AffinePiece& x, const AffinePiece& y) {
                  const double xa = x.lo_unbounded ? -1e300 : x.t_lo;
                  const double ya = y.lo_unbounded ? -1e300 : y.t_lo;
                  return xa < ya;
              });

    std::vector<std::pair<double, double>> knots;
    double prev_t = 0.0, prev_v = 0.0;
    bool have_prev = false;

    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const AffinePiece& pc = pieces[i];
        if (!(pc.slope > 0.0))
            throw IncompatiblePieces("assemble: piece slope must be positive");
        if (pc.lo_unbounded || pc.hi_unbounded) {
            if (std::abs(pc.slope - 1.0) > 1e-15)
                throw IncompatiblePieces(
                    "assemble: unbounded piece requires unit slope");
            if (pc.lo_unbounded && i != 0)
                throw IncompatiblePieces("assemble: interior piece unbounded below");
            if (pc.hi_unbounded && i + 1 != pieces.size())
                throw IncompatiblePieces("assemble: interior piece unbounded above");
        }
        const double lo = pc.lo_unbounded ? pc.t_hi : pc.t_lo;
        const double hi = pc.hi_unbounded ? pc.t_lo : pc.t_hi;
        if (!pc.lo_unbounded && !pc.hi_unbounded && !(hi >= lo))
            throw IncompatiblePieces("assemble: piece interval reversed");

        const double v_lo = pc.at(lo);
        const double v_hi = pc.at(hi);
        bool touching = false;
        if (have_prev) {
            if (lo < prev_t)
                throw IncompatiblePieces("assemble: overlapping piece domains");
            if (lo == prev_t) {
                if (std::abs(v_lo - prev_v) >
                    1e-12 * (1.0 + std::abs(prev_v)))
                    throw IncompatiblePieces(
                        "assemble: touching pieces disagree in value");
                touching = true;
            } else if (!(v_lo > prev_v)) {
                throw IncompatiblePieces(
                    "assemble: prescribed images would force a decrease");
            }
        }
        if (!touching) knots.emplace_back(lo, v_lo);
        if (hi > lo) knots.emplace_back(hi, v_hi);
        prev_t = hi;
        prev_v = v_hi;
        have_prev = true;
    }
    return Reparam::from_knots(std::move(knots));
}

} // namespace shadowlab
