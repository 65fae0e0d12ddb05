#pragma once

// Independent flow oracle: high-order adaptive integration of the planar
// vector field, used to cross-check the closed-form flow. Deliberately
// avoids every closed-form shortcut of the implementation.

#include <array>
#include <boost/numeric/odeint.hpp>

#include "shadowlab/planar.hpp"

namespace shadowlab::testutil {

using OdeState = std::array<double, 2>;

inline PlanarPoint integrate_planar(const WindingProfile& prof, double t,
                                    PlanarPoint x0, double tol = 1e-14) {
    namespace ode = boost::numeric::odeint;
    auto rhs = [&prof](const OdeState& y, OdeState& dydt, double) {
        const PlanarPoint v = planar_field(prof, {y[0], y[1]});
        dydt[0] = v.x1;
        dydt[1] = v.x2;
    };
    OdeState y{x0.x1, x0.x2};
    if (t == 0.0) return x0;
    // extrapolation stepper: near machine-level global error, needed to
    // resolve the 1e-8 agreement bar at radii far above one
    ode::bulirsch_stoer<OdeState> stepper(tol, tol);
    ode::integrate_adaptive(stepper, rhs, y, 0.0, t, t > 0.0 ? 1e-2 : -1e-2);
    return {y[0], y[1]};
}

} // namespace shadowlab::testutil
