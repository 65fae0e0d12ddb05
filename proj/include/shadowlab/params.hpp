#pragma once

#include <string>
#include <vector>

namespace shadowlab {

// Every construction constant in one record. Field names deliberately match
// the config keys and CLI flags (see configs/default.ini).
struct Params {
    // [field]
    double a = 1.0;            // radial expansion rate of the planar field
    double l = 0.055;          // length scale of the winding profile
    double K = 16.0;           // outer cutoff multiplier: profile vanishes past (K-1)*l
    double delta_cap = 0.5;    // transit-tube half width, in (0,1)
    double T_a = 1.0;          // transit time between the two sections
    double chart_radius = 1.0; // planar absorbing radius of each chart

    // [numerics]
    double grid_dt = 0.02;     // sampling step for pseudotrajectories and alignments
    double tol = 1e-9;         // generic root-finding / comparison tolerance
};

// Proof that validate() ran. Immutable; downstream modules take this type,
// never a raw Params.
class ValidatedParams {
  public:
    const Params& get() const { return p_; }
    const Params* operator->() const { return &p_; }

  private:
    friend ValidatedParams validate(const Params& p);
    explicit ValidatedParams(const Params& p) : p_(p) {}
    Params p_;
};

// Checks every standing constraint and reports all violations at once.
// Throws ConstraintViolation listing each failed inequality.
ValidatedParams validate(const Params& p);

// Idempotent overload: a certified record revalidates to itself.
inline ValidatedParams validate(const ValidatedParams& vp) { return vp; }

// Human-readable list of violated constraints; empty means valid.
std::vector<std::string> constraint_violations(const Params& p);

} // namespace shadowlab
