#include "shadowlab/field4d.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "shadowlab/errors.hpp"

namespace shadowlab {

namespace {
constexpr double kNoExit = std::numeric_limits<double>::infinity();
}

std::string region_name(Region r) {
    switch (r) {
        case Region::ChartP: return "P";
        case Region::ChartQ: return "Q";
        case Region::Transit: return "T";
        case Region::FarS: return "S";
        case Region::FarU: return "U";
    }
    return "?";
}

ManifoldState ManifoldState::chart_p(const Vec4& coords) {
    ManifoldState s;
    s.region = Region::ChartP;
    s.c = coords;
    return s;
}

ManifoldState ManifoldState::chart_q(const Vec4& coords) {
    ManifoldState s;
    s.region = Region::ChartQ;
    s.c = coords;
    return s;
}

ManifoldState ManifoldState::transit(const Vec3& offsets, double elapsed) {
    ManifoldState s;
    s.region = Region::Transit;
    s.off = offsets;
    s.elapsed = elapsed;
    return s;
}

PlanarPoint ManifoldState::planar() const {
    if (region == Region::ChartP) return {c[2], c[3]};
    if (region == Region::ChartQ) return {c[1], c[3]};
    throw ChartError("planar block defined only in chart coordinates");
}

Vec3 SectionMap::apply_linear(const Vec3& w) const {
    Vec3 out{};
    for (int i = 0; i < 3; ++i)
        out[i] = linear[i][0] * w[0] + linear[i][1] * w[1] + linear[i][2] * w[2];
    return out;
}

Model::Model(const ValidatedParams& vp) : P_(vp), prof_(vp) {}

// ---------------------------------------------------------------------------
// Vector field
// ---------------------------------------------------------------------------

Vec4 Model::field(const ManifoldState& s) const {
    const double a = P_->a;
    if (s.region == Region::ChartP) {
        const double b = prof_.value(std::hypot(s.c[2], s.c[3]));
        return {-s.c[0], -2.0 * s.c[1], a * s.c[2] - b * s.c[3],
                b * s.c[2] + a * s.c[3]};
    }
    if (s.region == Region::ChartQ) {
        const double b = prof_.value(std::hypot(s.c[1], s.c[3]));
        return {s.c[0], -a * s.c[1] + b * s.c[3], 2.0 * s.c[2],
                -b * s.c[1] - a * s.c[3]};
    }
    throw ChartError("vector field evaluated outside the charts");
}

// ---------------------------------------------------------------------------
// Chart-local closed-form flows
// ---------------------------------------------------------------------------

ManifoldState Model::flow_chart_p_raw(double t, const ManifoldState& s) const {
    Vec4 c;
    c[0] = s.c[0] * std::exp(-t);
    c[1] = s.c[1] * std::exp(-2.0 * t);
    const PlanarPoint pl = planar_flow(prof_, t, {s.c[2], s.c[3]});
    c[2] = pl.x1;
    c[3] = pl.x2;
    return ManifoldState::chart_p(c);
}

ManifoldState Model::flow_chart_q_raw(double t, const ManifoldState& s) const {
    Vec4 c;
    c[0] = s.c[0] * std::exp(t);
    c[2] = s.c[2] * std::exp(2.0 * t);
    // The spiral block of this chart runs the planar flow in reversed time.
    const PlanarPoint pl = planar_flow(prof_, -t, {s.c[1], s.c[3]});
    c[1] = pl.x1;
    c[3] = pl.x2;
    return ManifoldState::chart_q(c);
}

namespace {

// First boundary crossing of the ChartP flow in the given time direction.
// Returns the signed crossing time, +inf magnitude when none.
struct Crossing {
    double t = kNoExit;
    enum Kind { None, Absorb, TubeEntry, Boundary } kind = None;
};

} // namespace

ManifoldState Model::flow_chart(double t, const ManifoldState& s) const {
    if (s.region == Region::ChartP) {
        const double R = P_->chart_radius;
        if (t >= 0.0) {
            const double rho = std::hypot(s.c[2], s.c[3]);
            if (rho > 0.0) {
                const double t_abs = std::log(R / rho) / P_->a;
                if (t > t_abs)
                    throw ChartExitError("forward flow leaves the chart", t_abs);
            }
            return flow_chart_p_raw(t, s);
        }
        double t_exit = -kNoExit;
        if (s.c[0] != 0.0) t_exit = std::max(t_exit, std::log(std::abs(s.c[0])));
        if (s.c[1] != 0.0) t_exit = std::max(t_exit, 0.5 * std::log(std::abs(s.c[1])));
        if (t < t_exit)
            throw ChartExitError("backward flow leaves the chart", t_exit);
        return flow_chart_p_raw(t, s);
    }
    if (s.region == Region::ChartQ) {
        const double R = P_->chart_radius;
        if (t >= 0.0) {
            double t_exit = kNoExit;
            if (s.c[0] != 0.0) t_exit = std::min(t_exit, -std::log(std::abs(s.c[0])));
            if (s.c[2] != 0.0) t_exit = std::min(t_exit, -0.5 * std::log(std::abs(s.c[2])));
            if (t > t_exit)
                throw ChartExitError("forward flow leaves the chart", t_exit);
            return flow_chart_q_raw(t, s);
        }
        const double rho = std::hypot(s.c[1], s.c[3]);
        if (rho > 0.0) {
            const double t_abs = -std::log(R / rho) / P_->a;
            if (t < t_abs)
                throw ChartExitError("backward flow leaves the chart", t_abs);
        }
        return flow_chart_q_raw(t, s);
    }
    throw ChartError("flow_chart requires a chart state");
}

// ---------------------------------------------------------------------------
// Transit
// ---------------------------------------------------------------------------

ManifoldState Model::transit_map(const ManifoldState& s) const {
    if (s.region != Region::ChartQ)
        throw PreconditionError("transit: expects a ChartQ section state");
    if (std::abs(s.c[0] + 1.0) > 1e-9)
        throw PreconditionError("transit: state must sit on the section x1 = -1");
    const double cap = P_->delta_cap;
    if (!(std::abs(s.c[1]) < cap && std::abs(s.c[2]) < cap && std::abs(s.c[3]) < cap))
        throw TubeExitError("transit: section offsets reach the tube half-width");
    return ManifoldState::chart_p({1.0, s.c[1], s.c[2], s.c[3]});
}

// ---------------------------------------------------------------------------
// Global flow
// ---------------------------------------------------------------------------

ManifoldState Model::flow(double t, const ManifoldState& s0) const {
    ManifoldState s = s0;
    double remaining = t;
    const double cap = P_->delta_cap;
    const double R = P_->chart_radius;

    for (int guard = 0; guard < 64; ++guard) {
        if (remaining == 0.0) return s;

        switch (s.region) {
            case Region::ChartP: {
                if (remaining > 0.0) {
                    const double rho = std::hypot(s.c[2], s.c[3]);
                    double t_abs = kNoExit;
                    if (rho > 0.0) t_abs = std::log(R / rho) / P_->a;
                    if (remaining <= t_abs) return flow_chart_p_raw(remaining, s);
                    ManifoldState at = flow_chart_p_raw(t_abs, s);
                    ManifoldState far;
                    far.region = Region::FarS;
                    far.c = at.c;
                    far.beyond = remaining - t_abs;
                    return far;
                }
                double t_x1 = -kNoExit, t_x2 = -kNoExit;
                if (s.c[0] != 0.0) t_x1 = std::log(std::abs(s.c[0]));
                if (s.c[1] != 0.0) t_x2 = 0.5 * std::log(std::abs(s.c[1]));
                const double t_exit = std::max(t_x1, t_x2);
                if (remaining >= t_exit || t_exit == -kNoExit)
                    return flow_chart_p_raw(remaining, s);
                ManifoldState at = flow_chart_p_raw(t_exit, s);
                if (t_x1 > t_x2 && s.c[0] > 0.0 && std::abs(at.c[1]) < cap &&
                    std::abs(at.c[2]) < cap && std::abs(at.c[3]) < cap) {
                    s = ManifoldState::transit({at.c[1], at.c[2], at.c[3]}, P_->T_a);
                    remaining -= t_exit;
                    break;
                }
                throw ModelBoundaryError(
                    "backward history leaves the modelled neighbourhood of p");
            }
            case Region::ChartQ: {
                if (remaining > 0.0) {
                    double t_x1 = kNoExit, t_x3 = kNoExit;
                    if (s.c[0] != 0.0) t_x1 = -std::log(std::abs(s.c[0]));
                    if (s.c[2] != 0.0) t_x3 = -0.5 * std::log(std::abs(s.c[2]));
                    const double t_exit = std::min(t_x1, t_x3);
                    if (remaining <= t_exit) return flow_chart_q_raw(remaining, s);
                    ManifoldState at = flow_chart_q_raw(t_exit, s);
                    if (t_x1 < t_x3 && s.c[0] < 0.0 && std::abs(at.c[1]) < cap &&
                        std::abs(at.c[2]) < cap && std::abs(at.c[3]) < cap) {
                        s = ManifoldState::transit({at.c[1], at.c[2], at.c[3]}, 0.0);
                        remaining -= t_exit;
                        break;
                    }
                    throw ModelBoundaryError(
                        "forward history leaves the modelled neighbourhood of q");
                }
                const double rho = std::hypot(s.c[1], s.c[3]);
                double t_abs = -kNoExit;
                if (rho > 0.0) t_abs = -std::log(R / rho) / P_->a;
                if (remaining >= t_abs || t_abs == -kNoExit)
                    return flow_chart_q_raw(remaining, s);
                ManifoldState at = flow_chart_q_raw(t_abs, s);
                ManifoldState far;
                far.region = Region::FarU;
                far.c = at.c;
                far.beyond = -(remaining - t_abs);
                return far;
            }
            case Region::Transit: {
                if (remaining > 0.0) {
                    const double room = P_->T_a - s.elapsed;
                    if (remaining <= room) {
                        s.elapsed += remaining;
                        return s;
                    }
                    remaining -= room;
                    s = ManifoldState::chart_p({1.0, s.off[0], s.off[1], s.off[2]});
                    break;
                }
                const double room = -s.elapsed;
                if (remaining >= room) {
                    s.elapsed += remaining;
                    return s;
                }
                remaining -= room;
                s = ManifoldState::chart_q({-1.0, s.off[0], s.off[1], s.off[2]});
                break;
            }
            case Region::FarS: {
                if (s.beyond + remaining >= 0.0) {
                    s.beyond += remaining;
                    return s;
                }
                remaining += s.beyond;
                ManifoldState back = ManifoldState::chart_p(s.c);
                s = back;
                break;
            }
            case Region::FarU: {
                if (s.beyond - remaining >= 0.0) {
                    s.beyond -= remaining;
                    return s;
                }
                remaining -= s.beyond;
                ManifoldState back = ManifoldState::chart_q(s.c);
                s = back;
                break;
            }
        }
    }
    throw ModelBoundaryError("global flow: region chain failed to terminate");
}

// ---------------------------------------------------------------------------
// Heteroclinic trajectory
// ---------------------------------------------------------------------------

ManifoldState Model::alpha(double t) const {
    if (t >= 0.0) return ManifoldState::chart_p({std::exp(-t), 0.0, 0.0, 0.0});
    if (t > -P_->T_a) return ManifoldState::transit({0.0, 0.0, 0.0}, P_->T_a + t);
    return ManifoldState::chart_q({-std::exp(t + P_->T_a), 0.0, 0.0, 0.0});
}

// ---------------------------------------------------------------------------
// Metric
// ---------------------------------------------------------------------------

double Model::corridor_coordinate(const ManifoldState& s) const {
    switch (s.region) {
        case Region::ChartQ: return -3.0 - s.c[0];
        case Region::Transit: return -2.0 + 2.0 * s.elapsed / P_->T_a;
        case Region::ChartP: return 1.0 - s.c[0];
        default:
            throw ChartError("corridor coordinate undefined for far states");
    }
}

namespace {
Vec3 offsets_of(const ManifoldState& s) {
    if (s.region == Region::Transit) return s.off;
    return {s.c[1], s.c[2], s.c[3]};
}
} // namespace

double Model::distance(const ManifoldState& s1, const ManifoldState& s2) const {
    const bool far1 = s1.region == Region::FarS || s1.region == Region::FarU;
    const bool far2 = s2.region == Region::FarS || s2.region == Region::FarU;
    if (far1 && far2) return s1.region == s2.region ? 0.0 : far_distance();
    if (far1 || far2) {
        // A chart state within a rounding whisker of the absorbing boundary
        // is the same point as the far state it is about to become; without
        // this identification a crossing landing exactly on a grid point
        // would register a spurious far-vs-chart gap.
        const ManifoldState& far = far1 ? s1 : s2;
        const ManifoldState& near = far1 ? s2 : s1;
        const double R = P_->chart_radius;
        if (near.region == Region::ChartP && far.region == Region::FarS &&
            std::hypot(near.c[2], near.c[3]) >= R * (1.0 - 1e-9))
            return 0.0;
        if (near.region == Region::ChartQ && far.region == Region::FarU &&
            std::hypot(near.c[1], near.c[3]) >= R * (1.0 - 1e-9))
            return 0.0;
        return far_distance();
    }
    const double dxi = corridor_coordinate(s1) - corridor_coordinate(s2);
    const Vec3 o1 = offsets_of(s1), o2 = offsets_of(s2);
    double acc = dxi * dxi;
    for (int i = 0; i < 3; ++i) acc += (o1[i] - o2[i]) * (o1[i] - o2[i]);
    return std::sqrt(acc);
}

// ---------------------------------------------------------------------------
// Section-to-section data
// ---------------------------------------------------------------------------

ManifoldState Model::as_p_section(const ManifoldState& s) const {
    if (s.region == Region::Transit && s.elapsed >= P_->T_a - 1e-9)
        return ManifoldState::chart_p({1.0, s.off[0], s.off[1], s.off[2]});
    return s;
}

ManifoldState Model::as_q_section(const ManifoldState& s) const {
    if (s.region == Region::Transit && s.elapsed <= 1e-9)
        return ManifoldState::chart_q({-1.0, s.off[0], s.off[1], s.off[2]});
    return s;
}

SectionMap Model::section_map(double c_p, double c_q) const {
    if (!(c_p > 0.0 && c_p <= 1.0 && c_q > 0.0 && c_q <= 1.0))
        throw PreconditionError("section_map: levels must lie in (0, 1]");
    SectionMap sm;
    sm.c_p = c_p;
    sm.c_q = c_q;
    sm.t_q = -std::log(c_q);
    sm.t_p = -std::log(c_p);
    sm.total_time = sm.t_q + P_->T_a + sm.t_p;
    const double a = P_->a;
    const double d2 = c_p * c_p * std::pow(c_q, a);
    const double d3 = std::pow(c_p, -a) / (c_q * c_q);
    const double d4 = std::pow(c_q, a) * std::pow(c_p, -a);
    sm.linear = {{{d2, 0.0, 0.0}, {0.0, d3, 0.0}, {0.0, 0.0, d4}}};
    return sm;
}

Vec3 Model::section_map_apply_true(const SectionMap& sm, const Vec3& w) const {
    const double cap = P_->delta_cap;
    // ChartQ leg: spiral block contracts (reversed planar time), the x3
    // coordinate expands toward the tube.
    const PlanarPoint q_in{w[0], w[2]};
    PlanarPoint q_out = planar_flow(prof_, -sm.t_q, q_in);
    const double x3_t = w[1] / (sm.c_q * sm.c_q);
    if (!(std::abs(q_out.x1) < cap && std::abs(x3_t) < cap && std::abs(q_out.x2) < cap))
        throw TubeExitError("section map: passage leaves the transit tube");
    // ChartP leg: x2 contracts, spiral block expands with winding.
    const double x2_p = q_out.x1 * sm.c_p * sm.c_p;
    const PlanarPoint p_out = planar_flow(prof_, sm.t_p, {x3_t, q_out.x2});
    return {x2_p, p_out.x1, p_out.x2};
}

} // namespace shadowlab
