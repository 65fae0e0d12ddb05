#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shadowlab/align.hpp"
#include "shadowlab/geometry.hpp"
#include "shadowlab/pseudotraj.hpp"
#include "shadowlab/reparam.hpp"

namespace shadowlab {

// Reparametrization regime of a shadowing query: Standard carries the
// chord-slope bound, Oriented admits any increasing homeomorphism.
struct Regime {
    enum class Kind { Standard, Oriented };
    Kind kind = Kind::Oriented;
    double a = 0.0; // slope bound for Standard

    static Regime standard(double a) { return {Kind::Standard, a}; }
    static Regime oriented() { return {Kind::Oriented, 0.0}; }
};

struct ShadowCertificate {
    ManifoldState x0;
    Reparam h;
    double sup_dist = 0.0;
    std::string case_tag; // "P1".."P4"
    std::map<std::string, double> locals;       // derived construction data
    std::map<std::string, double> piece_residuals;
};

// Grid supremum of dist(g(t), flow(h(t), x0)) over the trajectory window.
double sup_dist_given(const Model& model, const PseudoTraj& g,
                      const ManifoldState& x0, const Reparam& h);

struct BestReparam {
    Reparam h;
    double sup_dist = 0.0;
    bool rep_certified = false; // in_rep_class(h, a) for the Standard regime
};

// Minimax monotone alignment of g against the orbit of x0 by bottleneck
// dynamic programming over the product grid. The Standard regime restricts
// per-segment slope ratios to (1-a, 1+a) through its step set (diagonal
// steps plus long nearly-diagonal macro steps), a sufficient surrogate for
// the chord condition, certified afterwards. Optimal over grid-representable
// piecewise-linear reparametrizations with window-bounded drift.
BestReparam best_reparam(const Model& model, const PseudoTraj& g,
                         const ManifoldState& x0, const Regime& regime);

// Constructive oriented shadowing for a Ps(delta)-form input. target_sup is
// the tracking budget the construction must meet (the certificate is always
// re-verified); pass eps/2 for deep-section inputs. Throws DeltaTooLarge
// when the predicted alignment cost exceeds the budget and
// CaseDetectionAmbiguous when a planar component sits at the zero threshold.
ShadowCertificate oriented_shadow_construct(const Model& model,
                                            const PseudoTraj& g, double eps,
                                            double target_sup);

// Sign analysis of a standard-shadowing candidate against the counterexample
// pseudotrajectory: locates the two section crossings of the orbit, runs the
// planar tracking premise on both sides and reports the forced fourth-
// coordinate signs together with the transit-preservation clash.
struct SignRecord {
    bool rep_admissible = false;
    bool endpoints_track = false;
    bool sections_found = false;
    double H_p = 0.0, H_q = 0.0; // section-crossing offsets
    bool transit_preserved = false;
    bool premise_p = false, premise_q = false;
    double gap_p = 0.0, gap_q = 0.0; // angle gaps against +pi/2 / -pi/2
    double p4_x_p = 0.0, p4_x_q = 0.0;
    bool contradiction = false;
    std::string mode; // short outcome label
};

SignRecord sign_obstruction(const Model& model, const PseudoTraj& g_counter,
                            const ManifoldState& x0, const Reparam& h,
                            double d, double eps);

struct CandidateOutcome {
    double sup_dist = 0.0;
    SignRecord sign;
    std::string failure; // "tracking" / "sign" / "" (none would mean a shadow)
};

struct RefutationReport {
    double eps = 0.0, d = 0.0;
    int searched = 0;
    double min_sup = 0.0;          // best constrained sup distance found
    int endpoint_admissible = 0;   // candidates passing the endpoint screen
    int premise_failures = 0;      // tracking broken at the planar level
    int sign_contradictions = 0;   // both premises held, signs clash
    bool all_obstructed = false;   // no candidate survived both prongs
    CandidateOutcome best;         // record for the min-sup candidate
    double oriented_sup = 0.0;     // contrast: oriented certificate on same g
    std::string oriented_case;
};

// Two-pronged desk-scale refutation of standard shadowing on the
// counterexample pseudotrajectory: a seeded candidate sweep (empirical lower
// bound on the constrained sup distance) plus the analytic sign obstruction
// applied to every candidate. A failed refutation is a meaningful report,
// not an error.
RefutationReport standard_refute(const Model& model, double d, double eps,
                                 int budget, unsigned long long seed);

} // namespace shadowlab
