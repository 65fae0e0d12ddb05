#include "shadowlab/shadowing.hpp"

#include <algorithm>
#include <cmath>

#include "shadowlab/errors.hpp"

namespace shadowlab {

double sup_dist_given(const Model& model, const PseudoTraj& g,
                      const ManifoldState& x0, const Reparam& h) {
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double t = g.time_at(i);
        const ManifoldState orbit = model.flow(h(t), x0);
        worst = std::max(worst, model.distance(g.states[i], orbit));
    }
    return worst;
}

BestReparam best_reparam(const Model& model, const PseudoTraj& g,
                         const ManifoldState& x0, const Regime& regime) {
    const int n = static_cast<int>(g.size());
    if (n < 2) throw PreconditionError("best_reparam: trajectory too short");
    const double dt = g.dt;

    // Both regimes search monotone lattice paths with free endpoints over a
    // drift band around the diagonal. The oriented step set and band contain
    // the chord-bounded ones, so the grid optima themselves satisfy the
    // regime-dominance inequality.
    AlignOptions opt;
    opt.fixed_endpoints = false;
    const double window = g.t_max() - g.t_min();
    int drift = 0;
    if (regime.kind == Regime::Kind::Oriented) {
        opt.free_jump = true;
        drift = static_cast<int>(std::ceil(0.2 * window / dt)) + 8;
    } else {
        const double a = regime.a;
        if (!(a > 0.0))
            throw PreconditionError("best_reparam: Standard regime needs a > 0");
        opt.steps = {{1, 1}};
        if (a <= 1.0) {
            const int M = static_cast<int>(std::floor(1.0 / a)) + 2;
            opt.steps.push_back({M, M - 1});
            opt.steps.push_back({M - 1, M});
        } else {
            opt.steps.push_back({1, 0});
            opt.steps.push_back({2, 1});
            opt.steps.push_back({1, 2});
        }
        drift = static_cast<int>(
                    std::ceil(std::min(1.0, regime.a) * window / dt)) + 4;
    }
    const int extend = drift;
    opt.band = [drift, extend](int i) {
        return std::make_pair(i + extend - drift, i + extend + drift);
    };

    // Orbit grid: sigma_j = t0 + (j - extend) * dt. The candidate family is
    // responsible for time-slid starting points; the path itself may drift
    // within the band.
    const int m = n + 2 * extend;
    std::vector<ManifoldState> orbit;
    orbit.reserve(static_cast<std::size_t>(m));
    bool boundary_hit = false;
    for (int j = 0; j < m; ++j) {
        const double sigma = g.t0 + (j - extend) * dt;
        try {
            orbit.push_back(model.flow(sigma, x0));
        } catch (const ModelBoundaryError&) {
            boundary_hit = true;
            // unreachable orbit times price out through the far distance
            ManifoldState far;
            far.region = Region::FarU;
            far.beyond = 1.0;
            orbit.push_back(far);
        }
    }
    (void)boundary_hit;

    auto cost = [&](int i, int j) {
        return model.distance(g.states[static_cast<std::size_t>(i)],
                              orbit[static_cast<std::size_t>(j)]);
    };
    const AlignResult res = bottleneck_align(n, m, cost, opt);
    if (!res.feasible)
        throw NotFoundError("best_reparam: no admissible alignment path");

    std::vector<std::pair<double, double>> knots;
    auto sigma_of = [&](int cj) { return g.t0 + (cj - extend) * dt; };
    if (regime.kind == Regime::Kind::Oriented) {
        // One knot per trajectory sample: the map passes exactly through the
        // evaluated lattice cells, so the certified supremum coincides with
        // the bottleneck cost up to the strictness repair of flat spans.
        knots.reserve(static_cast<std::size_t>(n));
        for (const auto& [ci, cj] : res.cells)
            knots.emplace_back(g.time_at(static_cast<std::size_t>(ci)),
                               sigma_of(cj));
        for (std::size_t k = 1; k < knots.size(); ++k)
            knots[k].second =
                std::max(knots[k].second, knots[k - 1].second + 0x1.0p-40 * dt);
    } else {
        // Knots at step boundaries only, keeping every segment slope at its
        // step ratio so the chord certificate holds. Between boundaries the
        // map evaluates within half a grid cell of the costed lattice cells.
        knots.reserve(res.moves.size() + 1);
        int i = 0, j = res.cells.front().second;
        knots.emplace_back(g.time_at(0), sigma_of(j));
        for (int mv : res.moves) {
            const AlignStep st = opt.steps[static_cast<std::size_t>(mv)];
            i += st.di;
            j += st.dj;
            knots.emplace_back(g.time_at(static_cast<std::size_t>(i)),
                               sigma_of(j));
        }
        for (std::size_t k = 1; k < knots.size(); ++k)
            knots[k].second =
                std::max(knots[k].second, knots[k - 1].second + 0x1.0p-40 * dt);
    }

    BestReparam out;
    out.h = Reparam::from_knots(std::move(knots));
    out.sup_dist = sup_dist_given(model, g, x0, out.h);
    out.rep_certified = regime.kind == Regime::Kind::Standard
                            ? in_rep_class(out.h, regime.a)
                            : true;
    return out;
}

} // namespace shadowlab
