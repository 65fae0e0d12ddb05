#include <algorithm>
#include <cmath>
#include <sstream>

#include "shadowlab/errors.hpp"
#include "shadowlab/rng.hpp"
#include "shadowlab/shadowing.hpp"

namespace shadowlab {

namespace {

// h with all values shifted down by c (time origin moved on the orbit side).
Reparam shift_values(const Reparam& h, double c) {
    auto knots = h.knots();
    if (knots.empty()) return Reparam::from_knots({{0.0, -c}});
    for (auto& [t, v] : knots) v -= c;
    return Reparam::from_knots(std::move(knots));
}

// The backward-side reparametrization: s >= 0 measures time before the
// pivot, and the result maps it to orbit time before `offset`, increasing.
Reparam reflect_about(const Reparam& h, double pivot, double offset) {
    auto knots = h.knots();
    std::vector<std::pair<double, double>> out;
    if (knots.empty()) {
        out.emplace_back(0.0, offset - h(pivot));
        return Reparam::from_knots(std::move(out));
    }
    out.reserve(knots.size());
    for (auto it = knots.rbegin(); it != knots.rend(); ++it)
        out.emplace_back(pivot - it->first, offset - it->second);
    return Reparam::from_knots(std::move(out));
}

// Boundary representations at the sections: a transit state at either tube
// end denotes the same point as the chart section state.
ManifoldState as_section_p(const ManifoldState& s) {
    if (s.region == Region::Transit)
        return ManifoldState::chart_p({1.0, s.off[0], s.off[1], s.off[2]});
    return s;
}
ManifoldState as_section_q(const ManifoldState& s) {
    if (s.region == Region::Transit)
        return ManifoldState::chart_q({-1.0, s.off[0], s.off[1], s.off[2]});
    return s;
}

} // namespace

SignRecord sign_obstruction(const Model& model, const PseudoTraj& g_counter,
                            const ManifoldState& x0, const Reparam& h,
                            double d, double eps) {
    const Params& P = model.params();
    const WindingProfile& prof = model.profile();
    SignRecord r;

    r.rep_admissible = in_rep_class(h, eps);
    if (!r.rep_admissible) {
        r.mode = "rep_violation";
        return r;
    }
    if (!g_counter.ps_meta)
        throw PreconditionError("sign_obstruction: counterexample lacks metadata");
    const PsForm& form = *g_counter.ps_meta;

    // Endpoint screen at the two jump instants.
    const ManifoldState z0 = model.flow(h(0.0), x0);
    const ManifoldState z1 = model.flow(h(-P.T_a), x0);
    const double d0 = model.distance(z0, ps_form_eval(model, form, 0.0));
    const double d1 = model.distance(z1, ps_form_eval(model, form, -P.T_a));
    r.endpoints_track = d0 < eps && d1 < eps;
    if (!r.endpoints_track) {
        r.mode = "endpoint_fail";
        return r;
    }

    // Section crossings near the two tracked instants. The window constant
    // is measured, not assumed; 4*eps comfortably covers the corridor shift
    // a point can accumulate while staying eps-close to the section states.
    const double window = 4.0 * eps;
    auto crossing_p = [&](const ManifoldState& s) -> double {
        if (s.region == Region::ChartP && s.c[0] > 0.0) return std::log(s.c[0]);
        if (s.region == Region::Transit) return P.T_a - s.elapsed;
        throw NoSectionCrossing("candidate is not corridor-adjacent at t=0");
    };
    auto crossing_q = [&](const ManifoldState& s) -> double {
        if (s.region == Region::ChartQ && s.c[0] < 0.0) return std::log(-s.c[0]);
        if (s.region == Region::Transit) return -s.elapsed;
        throw NoSectionCrossing("candidate is not corridor-adjacent at t=-T_a");
    };
    r.H_p = crossing_p(z0);
    r.H_q = crossing_q(z1);
    if (std::abs(r.H_p) > window || std::abs(r.H_q) > window)
        throw NoSectionCrossing("section crossing outside the admissible window");
    const ManifoldState x_p = as_section_p(model.flow(r.H_p, z0));
    const ManifoldState x_q = as_section_q(model.flow(r.H_q, z1));
    r.sections_found = true;
    r.p4_x_p = x_p.c[3];
    r.p4_x_q = x_q.c[3];
    r.transit_preserved = std::abs(r.p4_x_p - r.p4_x_q) <= 1e-9;

    const double horizon = std::log(1.0 / d) / P.a + 1.0;
    const double quarter = kTwoPi / 8.0; // pi/4

    // p side: the orbit planar block against the reference spiral from (0,d).
    const PlanarPoint planar_p{x_p.c[2], x_p.c[3]};
    if (planar_p.norm() < 10.0 * P.tol) {
        r.premise_p = false;
        r.mode = "zero_planar_p";
    } else {
        try {
            const Reparam hp = shift_values(h, h(0.0) + r.H_p);
            const AngleGapResult ap =
                angle_gap_check(prof, {0.0, d}, planar_p, hp, horizon);
            r.premise_p = ap.premise_holds;
            r.gap_p = ap.gap;
        } catch (const PreconditionError&) {
            r.premise_p = false;
            r.mode = "planar_out_of_range_p";
        }
    }

    // q side: reversed time, reference spiral from (0,-d).
    const PlanarPoint planar_q{x_q.c[1], x_q.c[3]};
    if (planar_q.norm() < 10.0 * P.tol) {
        r.premise_q = false;
        if (r.mode.empty()) r.mode = "zero_planar_q";
    } else {
        try {
            const Reparam hq =
                reflect_about(h, -P.T_a, h(-P.T_a) + r.H_q);
            const AngleGapResult aq =
                angle_gap_check(prof, {0.0, -d}, planar_q, hq, horizon);
            r.premise_q = aq.premise_holds;
            r.gap_q = aq.gap;
        } catch (const PreconditionError&) {
            r.premise_q = false;
            if (r.mode.empty()) r.mode = "planar_out_of_range_q";
        }
    }

    r.contradiction = r.premise_p && r.premise_q && r.transit_preserved &&
                      r.gap_p < quarter && r.gap_q < quarter;
    if (r.mode.empty()) {
        if (r.contradiction)
            r.mode = "sign_contradiction";
        else if (!r.premise_p || !r.premise_q)
            r.mode = "premise_violation";
        else
            r.mode = "inconclusive";
    }
    return r;
}

RefutationReport standard_refute(const Model& model, double d, double eps,
                                 int budget, unsigned long long seed) {
    const Params& P = model.params();
    if (!(eps < std::min(P.l, P.delta_cap / 2.0)))
        throw PreconditionError(
            "standard_refute: requires eps < min(l, delta_cap/2)");
    if (!(d > 0.0 && d < eps / 2.0))
        throw PreconditionError("standard_refute: requires 0 < d < eps/2");
    if (budget < 8)
        throw PreconditionError("standard_refute: budget too small");

    RefutationReport rep;
    rep.eps = eps;
    rep.d = d;

    PseudoTraj g = make_counterexample(model, d, P.grid_dt);

    // Candidate family: the corridor lift of a seeded sample of the ball
    // around the perturbed anchor, plus a few deterministic special points.
    std::mt19937_64 rng(seed);
    auto lift = [&](double u1, double u2, double u3, double u4) {
        if (u1 <= 0.0)
            return ManifoldState::chart_p({1.0 + u1, u2, u3, d + u4});
        return ManifoldState::transit({u2, u3, d + u4},
                                      P.T_a * (1.0 - 0.5 * u1));
    };
    std::vector<ManifoldState> candidates;
    candidates.push_back(lift(0.0, 0.0, 0.0, 0.0));        // the anchor itself
    candidates.push_back(lift(0.0, 0.0, 0.0, -d));         // back on alpha
    candidates.push_back(lift(0.0, 0.0, 0.0, -2.0 * d));   // mirrored bump
    candidates.push_back(lift(-0.5 * eps, 0.0, 0.0, 0.0));
    candidates.push_back(lift(0.5 * eps, 0.0, 0.0, 0.0));
    while (static_cast<int>(candidates.size()) < budget) {
        double u[4];
        double nrm = 0.0;
        for (double& ui : u) {
            ui = 2.0 * rand_u01(rng) - 1.0;
            nrm += ui * ui;
        }
        nrm = std::sqrt(nrm);
        if (nrm < 1e-12) continue;
        const double r = 0.98 * eps * std::pow(rand_u01(rng), 0.25) / nrm;
        candidates.push_back(lift(u[0] * r, u[1] * r, u[2] * r, u[3] * r));
    }

    const Regime regime = Regime::standard(eps);
    rep.min_sup = Model::far_distance();
    bool any_survivor = false;

    for (const ManifoldState& x0 : candidates) {
        ++rep.searched;
        CandidateOutcome oc;
        try {
            const BestReparam br = best_reparam(model, g, x0, regime);
            oc.sup_dist = br.sup_dist;
            oc.sign = sign_obstruction(model, g, x0, br.h, d, eps);
        } catch (const NoSectionCrossing&) {
            oc.sign.mode = "no_section";
        } catch (const Error& e) {
            oc.sign.mode = std::string("error: ") + e.what();
            oc.sup_dist = Model::far_distance();
        }
        if (oc.sup_dist < rep.min_sup) {
            rep.min_sup = oc.sup_dist;
            rep.best = oc;
        }
        if (oc.sign.endpoints_track) ++rep.endpoint_admissible;
        if (oc.sign.mode == "premise_violation" ||
            oc.sign.mode == "zero_planar_p" || oc.sign.mode == "zero_planar_q" ||
            oc.sign.mode == "planar_out_of_range_p" ||
            oc.sign.mode == "planar_out_of_range_q")
            ++rep.premise_failures;
        if (oc.sign.contradiction) ++rep.sign_contradictions;

        const bool admissible = oc.sup_dist <= eps;
        const bool obstructed = oc.sign.contradiction || !oc.sign.premise_p ||
                                !oc.sign.premise_q || oc.sup_dist > eps;
        oc.failure = admissible ? (obstructed ? "sign" : "") : "tracking";
        if (admissible && !obstructed) any_survivor = true;
    }
    rep.all_obstructed = !any_survivor;

    // Oriented contrast on the same pseudotrajectory, through the reduction.
    PseudoTraj g2 = g;
    try {
        const ReduceResult red =
            reduce_to_ps(model, g, 2.0 * d + 1e-12, 0.0, -P.T_a);
        if (red.kind == ReduceResult::Kind::PsDelta) g2.ps_meta = red.form;
    } catch (const Error&) {
        // fall back to the generator's own form
    }
    const ShadowCertificate cert = oriented_shadow_construct(model, g2, eps, eps);
    rep.oriented_sup = cert.sup_dist;
    rep.oriented_case = cert.case_tag;
    return rep;
}

} // namespace shadowlab
