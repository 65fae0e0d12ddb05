#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shadowlab/field4d.hpp"

namespace shadowlab {

// Canonical three-piece form a pseudotrajectory reduces to: the forward
// orbit of x_p past the p-side section, the backward orbit of x_q before the
// q-side section, the heteroclinic trajectory in between.
struct PsForm {
    double T_p = 0.0;         // trajectory time of the p-side section crossing
    double T_q = 0.0;         // trajectory time of the q-side section crossing
    double c_p = 1.0;         // section levels: {x1 = c_p} in ChartP,
    double c_q = 1.0;         //                 {x1 = -c_q} in ChartQ
    double delta = 0.0;
    ManifoldState x_p;        // state on the p-side section
    ManifoldState x_q;        // state on the q-side section
    double alpha_offset = 0.0; // middle piece evaluates alpha(t + alpha_offset)
};

// Uniformly sampled map from a time window into the model, plus the claimed
// defect bound and provenance.
struct PseudoTraj {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<ManifoldState> states;
    double d_claimed = 0.0;
    std::string provenance;
    std::optional<PsForm> ps_meta;

    std::size_t size() const { return states.size(); }
    double time_at(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
    double t_min() const { return t0; }
    double t_max() const { return time_at(states.empty() ? 0 : states.size() - 1); }
};

struct DefectReport {
    bool pass = false;
    double worst = 0.0;
    double t_at = 0.0;
    double tau_at = 0.0;
    // Whether the grid resolves the queried bound (dt * sup|X| < d/10), i.e.
    // whether the grid verdict certifies the continuous defect inequality.
    bool grid_sound = false;
};

// Grid evaluation of the defect inequality over every grid time t and every
// nonzero grid multiple tau in (-1, 1); reports the worst defect, its
// location, and whether the grid is fine enough for the verdict to transfer
// off the grid.
DefectReport check_pseudo(const Model& model, const PseudoTraj& g, double d);

// Bound on the field speed over the modelled region, used for grid-soundness
// checks.
double field_speed_bound(const Model& model);

// Three-piece pseudotrajectory through perturbed section states. T_p and T_q
// are alpha-times (so the section levels are e^{-T_p} and e^{T_q + T_a});
// x_p and x_q must lie within delta of alpha(T_p), alpha(T_q).
PseudoTraj make_ps_delta(const Model& model, double T_p, double T_q,
                         const ManifoldState& x_p, const ManifoldState& x_q,
                         double delta, double dt, double pad = 2.0);

// The standard-shadowing counterexample: jumps of size d off the heteroclinic
// trajectory at the two section crossings, fourth coordinate bumped up on the
// p side and down on the q side.
PseudoTraj make_counterexample(const Model& model, double d, double dt,
                               double pad = 2.0);

struct ReduceResult {
    enum class Kind { PsDelta, AlreadyShadowable };
    Kind kind = Kind::PsDelta;
    PsForm form;              // valid when kind == PsDelta
    double sup_to_g = 0.0;    // certified sup distance between g and its reduction
    ManifoldState x0;         // valid when kind == AlreadyShadowable
};

// Reduction of a supported-family pseudotrajectory to Ps(delta) form at the
// prescribed anchor times (alpha-times of the target sections), or the
// recognition that it is an exact orbit already. Throws UnsupportedInput for
// anything outside the declared family.
ReduceResult reduce_to_ps(const Model& model, const PseudoTraj& g, double delta,
                          double T_p_anchor, double T_q_anchor);

// (Re)samples the three-piece map described by a PsForm on a grid.
PseudoTraj sample_ps_form(const Model& model, const PsForm& form, double dt,
                          double pad = 2.0);

// Piecewise evaluation of the PsForm map at an arbitrary time.
ManifoldState ps_form_eval(const Model& model, const PsForm& form, double t);

} // namespace shadowlab
