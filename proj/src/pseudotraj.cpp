#include "shadowlab/pseudotraj.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shadowlab/errors.hpp"

namespace shadowlab {

double field_speed_bound(const Model& model) {
    const Params& P = model.params();
    const double planar = model.profile().speed_bound_unit_ball();
    const double chart = std::sqrt(1.0 + 4.0 + planar * planar);
    return std::max(chart, 2.0 / P.T_a);
}

DefectReport check_pseudo(const Model& model, const PseudoTraj& g, double d) {
    if (g.size() < 2) throw PreconditionError("check_pseudo: empty trajectory");

    DefectReport rep;
    rep.grid_sound = g.dt * field_speed_bound(model) < d / 10.0;
    rep.pass = true;
    const long n = static_cast<long>(g.size());
    const long kmax = static_cast<long>(std::ceil(1.0 / g.dt)) - 1;
    for (long i = 0; i < n; ++i) {
        for (long k = -kmax; k <= kmax; ++k) {
            if (k == 0) continue;
            const long j = i + k;
            if (j < 0 || j >= n) continue;
            const double tau = static_cast<double>(k) * g.dt;
            if (std::abs(tau) >= 1.0) continue;
            const ManifoldState moved = model.flow(tau, g.states[static_cast<std::size_t>(i)]);
            const double dd = model.distance(g.states[static_cast<std::size_t>(j)], moved);
            if (dd > rep.worst) {
                rep.worst = dd;
                rep.t_at = g.time_at(static_cast<std::size_t>(i));
                rep.tau_at = tau;
            }
        }
    }
    rep.pass = rep.worst < d;
    return rep;
}

ManifoldState ps_form_eval(const Model& model, const PsForm& form, double t) {
    // boundary instants belong to the perturbed pieces
    if (t >= form.T_p) return model.flow(t - form.T_p, form.x_p);
    if (t <= form.T_q) return model.flow(t - form.T_q, form.x_q);
    return model.alpha(t + form.alpha_offset);
}

PseudoTraj sample_ps_form(const Model& model, const PsForm& form, double dt,
                          double pad) {
    PseudoTraj g;
    g.dt = dt;
    g.t0 = form.T_q - 1.0 - pad;
    const double t_end = form.T_p + 1.0 + pad;
    const std::size_t n =
        static_cast<std::size_t>(std::ceil((t_end - g.t0) / dt)) + 1;
    g.states.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        g.states.push_back(ps_form_eval(model, form, g.time_at(i)));
    g.ps_meta = form;
    return g;
}

PseudoTraj make_ps_delta(const Model& model, double T_p, double T_q,
                         const ManifoldState& x_p, const ManifoldState& x_q,
                         double delta, double dt, double pad) {
    if (!(T_p > T_q))
        throw PreconditionError("make_ps_delta: requires T_p > T_q");
    if (!(delta >= 0.0))
        throw PreconditionError("make_ps_delta: negative delta");
    const ManifoldState y_p = model.alpha(T_p);
    const ManifoldState y_q = model.alpha(T_q);
    if (y_p.region != Region::ChartP || y_q.region != Region::ChartQ)
        throw PreconditionError(
            "make_ps_delta: anchors must lie inside the two charts");
    if (x_p.region != Region::ChartP || x_q.region != Region::ChartQ)
        throw PreconditionError("make_ps_delta: x_p/x_q in the wrong charts");
    const double slack = 1e-12 + 1e-9 * delta;
    if (model.distance(x_p, y_p) > delta + slack)
        throw PreconditionError("make_ps_delta: x_p outside B(delta, y_p)");
    if (model.distance(x_q, y_q) > delta + slack)
        throw PreconditionError("make_ps_delta: x_q outside B(delta, y_q)");

    PsForm form;
    form.T_p = T_p;
    form.T_q = T_q;
    form.c_p = std::exp(-T_p);
    form.c_q = std::exp(T_q + model.params().T_a);
    form.delta = delta;
    form.x_p = x_p;
    form.x_q = x_q;
    form.alpha_offset = 0.0;

    PseudoTraj g = sample_ps_form(model, form, dt, pad);
    g.d_claimed = 8.0 * delta + 1e-12;
    std::ostringstream os;
    os << "ps-delta(T_p=" << T_p << ",T_q=" << T_q << ",delta=" << delta << ")";
    g.provenance = os.str();
    return g;
}

PseudoTraj make_counterexample(const Model& model, double d, double dt,
                               double pad) {
    const Params& P = model.params();
    if (!(d >= 0.0 && d < P.delta_cap))
        throw PreconditionError(
            "make_counterexample: jump size must lie in [0, delta_cap)");

    PsForm form;
    form.T_p = 0.0;
    form.T_q = -P.T_a;
    form.c_p = 1.0;
    form.c_q = 1.0;
    form.delta = d;
    form.x_p = ManifoldState::chart_p({1.0, 0.0, 0.0, d});
    form.x_q = ManifoldState::chart_q({-1.0, 0.0, 0.0, -d});
    form.alpha_offset = 0.0;

    const double tail =
        d > 0.0 ? std::log(P.chart_radius / d) / P.a + 2.0 : 10.0;
    PseudoTraj g = sample_ps_form(model, form, dt, pad + std::max(0.0, tail - 1.0));
    g.d_claimed = 4.0 * d + 1e-12;
    std::ostringstream os;
    os << "counterexample(d=" << d << ")";
    g.provenance = os.str();
    return g;
}

// ---------------------------------------------------------------------------
// Reduction
// ---------------------------------------------------------------------------

namespace {

// Jump indicator between consecutive samples; near zero along exact orbits.
// Crossings of the absorbing boundary can land on either side by a rounding
// whisker, which would register as a spurious far-vs-chart spike; such cells
// are treated as clean.
std::vector<double> jump_profile(const Model& model, const PseudoTraj& g) {
    const double R = model.params().chart_radius;
    auto near_absorb = [&](const ManifoldState& s) {
        if (s.region == Region::FarS || s.region == Region::FarU) return true;
        if (s.region == Region::Transit) return false;
        return s.planar().norm() > 0.9 * R;
    };
    std::vector<double> J(g.size() > 0 ? g.size() - 1 : 0, 0.0);
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        const ManifoldState moved = model.flow(g.dt, g.states[i]);
        const bool far_a = g.states[i + 1].region == Region::FarS ||
                           g.states[i + 1].region == Region::FarU;
        const bool far_b = moved.region == Region::FarS ||
                           moved.region == Region::FarU;
        if (far_a != far_b && near_absorb(g.states[i + 1]) && near_absorb(moved))
            continue;
        J[i] = model.distance(g.states[i + 1], moved);
    }
    return J;
}

} // namespace

ReduceResult reduce_to_ps(const Model& model, const PseudoTraj& g, double delta,
                          double T_p_anchor, double T_q_anchor) {
    if (g.size() < 4) throw UnsupportedInput("reduce_to_ps: trajectory too short");
    const Params& P = model.params();
    const double c_p = std::exp(-T_p_anchor);
    const double c_q = std::exp(T_q_anchor + P.T_a);
    if (!(c_p > 0.0 && c_p <= 1.0 && c_q > 0.0 && c_q <= 1.0))
        throw PreconditionError("reduce_to_ps: anchors off the heteroclinic arc");

    const std::vector<double> J = jump_profile(model, g);
    const double floor = delta / 100.0 + 1e-11;
    std::vector<std::size_t> spikes;
    for (std::size_t i = 0; i < J.size(); ++i)
        if (J[i] > floor) spikes.push_back(i);

    if (spikes.empty()) {
        // Exact-orbit fit: certify directly against the flow of the first state.
        ReduceResult res;
        res.kind = ReduceResult::Kind::AlreadyShadowable;
        res.x0 = g.states.front();
        double worst = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const ManifoldState s =
                model.flow(g.time_at(i) - g.t0, g.states.front());
            worst = std::max(worst, model.distance(g.states[i], s));
        }
        res.sup_to_g = worst;
        return res;
    }
    if (spikes.size() != 2)
        throw UnsupportedInput(
            "reduce_to_ps: input is outside the declared family (expected two "
            "jump cells)");

    const std::size_t jq = spikes[0]; // q-side boundary cell
    const std::size_t jp = spikes[1]; // p-side boundary cell

    // q side: last sample before the first jump lies on the x_q orbit.
    const ManifoldState sq = g.states[jq];
    if (sq.region != Region::ChartQ)
        throw UnsupportedInput("reduce_to_ps: q-side piece not in ChartQ");
    if (sq.c[0] == 0.0)
        throw UnsupportedInput("reduce_to_ps: q-side piece off the corridor");
    const double tau_q = std::log(c_q / std::abs(sq.c[0]));
    const ManifoldState x_q_hat = model.as_q_section(model.flow(tau_q, sq));
    const double That_q = g.time_at(jq) + tau_q;

    // p side: first sample after the second jump lies on the x_p orbit.
    const ManifoldState sp = g.states[jp + 1];
    if (sp.region != Region::ChartP)
        throw UnsupportedInput("reduce_to_ps: p-side piece not in ChartP");
    if (sp.c[0] <= 0.0)
        throw UnsupportedInput("reduce_to_ps: p-side piece off the corridor");
    const double tau_p = std::log(sp.c[0] / c_p);
    const ManifoldState x_p_hat = model.as_p_section(model.flow(tau_p, sp));
    const double That_p = g.time_at(jp + 1) + tau_p;

    const ManifoldState y_p = model.alpha(-std::log(c_p));
    const ManifoldState y_q = model.alpha(std::log(c_q) - P.T_a);
    if (model.distance(x_p_hat, y_p) > delta)
        throw UnsupportedInput("reduce_to_ps: p-side crossing outside B(delta, y_p)");
    if (model.distance(x_q_hat, y_q) > delta)
        throw UnsupportedInput("reduce_to_ps: q-side crossing outside B(delta, y_q)");

    // The middle must take alpha-time T to run between the two sections.
    const double T_alpha = -std::log(c_p) - std::log(c_q) + P.T_a;
    const double slack =
        20.0 * delta / std::min(c_p, c_q) + 4.0 * g.dt;
    if (std::abs((That_p - That_q) - T_alpha) > slack)
        throw UnsupportedInput(
            "reduce_to_ps: section crossings inconsistent with the corridor time");

    PsForm form;
    form.T_p = That_p;
    form.T_q = That_q;
    form.c_p = c_p;
    form.c_q = c_q;
    form.delta = delta;
    form.x_p = x_p_hat;
    form.x_q = x_q_hat;
    form.alpha_offset = -std::log(c_p) - That_p;

    ReduceResult res;
    res.kind = ReduceResult::Kind::PsDelta;
    res.form = form;
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const ManifoldState s = ps_form_eval(model, form, g.time_at(i));
        worst = std::max(worst, model.distance(g.states[i], s));
    }
    res.sup_to_g = worst;
    return res;
}

} // namespace shadowlab
