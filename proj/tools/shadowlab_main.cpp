#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "shadowlab/config.hpp"
#include "shadowlab/csv.hpp"
#include "shadowlab/errors.hpp"
#include "shadowlab/json_io.hpp"
#include "shadowlab/rng.hpp"
#include "shadowlab/scenario.hpp"
#include "shadowlab/shadowing.hpp"

using namespace shadowlab;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::string out_dir = ".";
    unsigned long long seed = 1;
    Params params;
};

void add_param_flags(CLI::App& app, Params& p) {
    app.add_option("--a", p.a, "radial expansion rate");
    app.add_option("--l", p.l, "winding profile length scale");
    app.add_option("--K", p.K, "outer cutoff multiplier");
    app.add_option("--delta_cap", p.delta_cap, "transit tube half-width");
    app.add_option("--T_a", p.T_a, "transit time");
    app.add_option("--chart_radius", p.chart_radius, "chart absorbing radius");
    app.add_option("--grid_dt", p.grid_dt, "sampling step");
    app.add_option("--tol", p.tol, "numerical tolerance");
}

PlanarPoint parse_polar(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        throw PreconditionError("expected '<r>,<phi>'");
    const double r = std::stod(s.substr(0, comma));
    const double phi = std::stod(s.substr(comma + 1));
    return {r * std::cos(phi), r * std::sin(phi)};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"shadowlab: reparametrized shadowing on a two-chart model"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    GlobalOpts g;
    app.add_option("--config", g.config_path, "INI config path")->envname("SHADOWLAB_CONFIG");
    app.add_option("--out", g.out_dir, "output directory");
    app.add_option("--seed", g.seed, "random seed");

    // flow2d
    auto* c_flow = app.add_subcommand("flow2d", "evaluate the planar flow");
    double fl_t = 1.0;
    std::string fl_x = "0.01,0";
    bool fl_trace = false;
    c_flow->add_option("--t", fl_t, "flow time");
    c_flow->add_option("--x", fl_x, "start point as r,phi");
    c_flow->add_flag("--trace", fl_trace, "emit CSV orbit trace");
    add_param_flags(*c_flow, g.params);

    // winding
    auto* c_wind = app.add_subcommand("winding", "backward winding-time solve");
    double w_theta = 0.0, w_t0 = 0.0;
    std::string w_x = "0.01,0";
    c_wind->add_option("--theta", w_theta, "target angle (rad)");
    c_wind->add_option("--t0", w_t0, "upper bound on the returned time");
    c_wind->add_option("--x", w_x, "start point as r,phi");
    add_param_flags(*c_wind, g.params);

    // cyl
    auto* c_cyl = app.add_subcommand("cyl", "cylinder intersection demo");
    bool cyl_demo = false;
    c_cyl->add_flag("--demo", cyl_demo, "run a randomized instance");
    add_param_flags(*c_cyl, g.params);

    // orbit
    auto* c_orbit = app.add_subcommand("orbit", "emit a model trajectory");
    std::string o_from = "P:1,0,0,0";
    double o_t0 = 0.0, o_t1 = 5.0, o_dt = 0.0;
    c_orbit->add_option("--from", o_from, "start state chart:coords");
    c_orbit->add_option("--t-begin", o_t0, "window start");
    c_orbit->add_option("--t-end", o_t1, "window end");
    c_orbit->add_option("--dt", o_dt, "sample step (default grid_dt)");
    add_param_flags(*c_orbit, g.params);

    // pseudo gen
    auto* c_pseudo = app.add_subcommand("pseudo", "pseudotrajectory tools");
    auto* c_gen = c_pseudo->add_subcommand("gen", "generate a pseudotrajectory");
    std::string kind = "counterexample";
    double p_d = 1e-4, p_delta = 1e-4, p_Tp = 6.0, p_Tq = -7.0;
    c_gen->add_option("--kind", kind, "ps-delta | counterexample");
    c_gen->add_option("--d", p_d, "counterexample jump size");
    c_gen->add_option("--delta", p_delta, "ps-delta perturbation");
    c_gen->add_option("--T_p", p_Tp, "p-side anchor time");
    c_gen->add_option("--T_q", p_Tq, "q-side anchor time");
    add_param_flags(*c_gen, g.params);

    // shadow
    auto* c_shadow = app.add_subcommand("shadow", "shadowing query on a stored trajectory");
    std::string sh_regime = "oriented", sh_in;
    double sh_eps = 0.0;
    c_shadow->add_option("--regime", sh_regime, "standard | oriented");
    c_shadow->add_option("--eps", sh_eps, "tracking tolerance");
    c_shadow->add_option("--in", sh_in, "pseudotrajectory CSV")->required();
    add_param_flags(*c_shadow, g.params);

    // refute
    auto* c_ref = app.add_subcommand("refute", "standard-shadowing refutation");
    double r_d = 0.0, r_eps = 0.0;
    int r_budget = 1000;
    c_ref->add_option("--d", r_d, "jump size (default eps/100)");
    c_ref->add_option("--eps", r_eps, "tolerance (default min(l,delta_cap/2)/2)");
    c_ref->add_option("--budget", r_budget, "candidate count");
    add_param_flags(*c_ref, g.params);

    // scenario
    auto* c_scn = app.add_subcommand("scenario", "run a named scenario");
    std::string scn_name;
    int scn_budget = 1000, scn_trials = 1000;
    c_scn->add_option("--name", scn_name, "scenario name")->required();
    c_scn->add_option("--budget", scn_budget, "candidate budget");
    c_scn->add_option("--trials", scn_trials, "trial count");
    add_param_flags(*c_scn, g.params);

    CLI11_PARSE(app, argc, argv);

    try {
        // file config first, then re-apply explicit CLI flags
        if (!g.config_path.empty()) {
            Params file = params_from_ini(g.config_path);
            Params flags = g.params;
            Params defaults;
            auto pick = [](double file_v, double flag_v, double def_v) {
                return flag_v != def_v ? flag_v : file_v;
            };
            g.params.a = pick(file.a, flags.a, defaults.a);
            g.params.l = pick(file.l, flags.l, defaults.l);
            g.params.K = pick(file.K, flags.K, defaults.K);
            g.params.delta_cap = pick(file.delta_cap, flags.delta_cap, defaults.delta_cap);
            g.params.T_a = pick(file.T_a, flags.T_a, defaults.T_a);
            g.params.chart_radius = pick(file.chart_radius, flags.chart_radius, defaults.chart_radius);
            g.params.grid_dt = pick(file.grid_dt, flags.grid_dt, defaults.grid_dt);
            g.params.tol = pick(file.tol, flags.tol, defaults.tol);
        }
        const ValidatedParams vp = validate(g.params);
        const Model model(vp);
        const WindingProfile& prof = model.profile();

        if (*c_flow) {
            const PlanarPoint x = parse_polar(fl_x);
            const PlanarPoint y = planar_flow(prof, fl_t, x);
            json out{{"t", fl_t},
                     {"x", {x.x1, x.x2}},
                     {"result", {y.x1, y.x2}},
                     {"radius", y.norm()}};
            std::cout << out.dump(2) << "\n";
            if (fl_trace) {
                CsvTable tr;
                tr.header = {"t", "x1", "x2", "r", "phi_unwrapped"};
                const LogPolar z0 = LogPolar::from(x);
                const int n = 400;
                for (int i = 0; i <= n; ++i) {
                    const double t = fl_t * i / n;
                    const LogPolar z = planar_flow_log(prof, t, z0);
                    const PlanarPoint p = z.cartesian();
                    tr.rows.push_back({t, p.x1, p.x2, z.radius(), z.phi});
                }
                tr.write(g.out_dir + "/flow2d_trace.csv");
            }
            return 0;
        }
        if (*c_wind) {
            const PlanarPoint x = parse_polar(w_x);
            const double t = winding_time(prof, x, w_theta, w_t0);
            const LogPolar z = planar_flow_log(prof, t, LogPolar::from(x));
            json out{{"theta", w_theta},
                     {"t0", w_t0},
                     {"t", t},
                     {"angle_at_t", principal_angle(z.phi)},
                     {"log_radius_at_t", z.log_r}};
            std::cout << out.dump(2) << "\n";
            return 0;
        }
        if (*c_cyl) {
            std::mt19937_64 rng(g.seed);
            LinearMap3 Q;
            Q.m = {{{0.2 + rand_u01(rng), rand_u01(rng) - 0.5, rand_u01(rng) - 0.5},
                    {rand_u01(rng) - 0.5, 1.0 + rand_u01(rng), rand_u01(rng) - 0.5},
                    {rand_u01(rng) - 0.5, rand_u01(rng) - 0.5, 1.0 + rand_u01(rng)}}};
            const double D = 0.5 + rand_u01(rng);
            const double R = radius_for(Q, D);
            auto spiral = [&](double scale) {
                Spiral sp;
                for (int i = 0; i <= 4000; ++i) {
                    const double th = 2.6 * kTwoPi * i / 4000.0;
                    const double r = scale * std::exp(-0.35 * th);
                    sp.pts.push_back({r * std::cos(th), r * std::sin(th)});
                    sp.params.push_back(th);
                }
                return sp;
            };
            const CylinderIntersection ci =
                intersect_cylinders(Q, D, spiral(0.95 * R), spiral(0.9 * R));
            json out{{"D", D},
                     {"R", R},
                     {"z", {ci.z[0], ci.z[1], ci.z[2]}},
                     {"axial1", ci.axial1},
                     {"axial2", ci.axial2}};
            std::cout << out.dump(2) << "\n";
            return 0;
        }
        if (*c_orbit) {
            // parse chart:coords
            const auto colon = o_from.find(':');
            if (colon == std::string::npos)
                throw PreconditionError("orbit --from expects chart:c1,c2,c3,c4");
            const std::string chart = o_from.substr(0, colon);
            Vec4 c{};
            std::stringstream ss(o_from.substr(colon + 1));
            std::string cell;
            for (int i = 0; i < 4 && std::getline(ss, cell, ','); ++i)
                c[static_cast<std::size_t>(i)] = std::stod(cell);
            ManifoldState s0 = chart == "Q" ? ManifoldState::chart_q(c)
                                            : ManifoldState::chart_p(c);
            const double dt = o_dt > 0.0 ? o_dt : g.params.grid_dt;
            CsvTable tr;
            tr.header = {"t", "region", "xi", "off1", "off2", "off3"};
            for (double t = o_t0; t <= o_t1 + 1e-12; t += dt) {
                const ManifoldState s = model.flow(t, s0);
                double xi = 0.0;
                Vec3 off{};
                if (s.region == Region::ChartP || s.region == Region::ChartQ ||
                    s.region == Region::Transit) {
                    xi = model.corridor_coordinate(s);
                    off = s.region == Region::Transit
                              ? s.off
                              : Vec3{s.c[1], s.c[2], s.c[3]};
                }
                tr.rows.push_back({t, static_cast<double>(static_cast<int>(s.region)),
                                   xi, off[0], off[1], off[2]});
            }
            const std::string path = g.out_dir + "/orbit.csv";
            tr.write(path);
            std::cout << "wrote " << path << "\n";
            return 0;
        }
        if (*c_pseudo) {
            PseudoTraj out_g;
            if (kind == "counterexample") {
                out_g = make_counterexample(model, p_d, g.params.grid_dt);
            } else if (kind == "ps-delta") {
                std::mt19937_64 rng(g.seed);
                const ManifoldState y_p = model.alpha(p_Tp);
                const ManifoldState y_q = model.alpha(p_Tq);
                Vec4 cp = y_p.c, cq = y_q.c;
                cp[2] += 0.5 * p_delta;
                cq[1] += 0.5 * p_delta;
                out_g = make_ps_delta(model, p_Tp, p_Tq, ManifoldState::chart_p(cp),
                                      ManifoldState::chart_q(cq), p_delta,
                                      g.params.grid_dt);
            } else {
                throw PreconditionError("unknown pseudotrajectory kind '" + kind + "'");
            }
            const std::string path = g.out_dir + "/pseudotraj.csv";
            write_pseudotraj_csv(out_g, path);
            std::cout << "wrote " << path << " (" << out_g.size() << " samples)\n";
            return 0;
        }
        if (*c_shadow) {
            PseudoTraj gg = read_pseudotraj_csv(sh_in);
            const double eps = sh_eps > 0.0
                                   ? sh_eps
                                   : std::min(g.params.l, g.params.delta_cap / 2.0) / 2.0;
            json out;
            if (sh_regime == "oriented") {
                const ShadowCertificate cert =
                    oriented_shadow_construct(model, gg, eps, eps);
                out = json{{"regime", "oriented"}, {"eps", eps},
                           {"certificate", to_json(cert)},
                           {"pass", cert.sup_dist <= eps}};
            } else if (sh_regime == "standard") {
                if (!gg.ps_meta)
                    throw PreconditionError("standard query needs form metadata");
                const ManifoldState x0 = gg.ps_meta->x_p;
                const BestReparam br =
                    best_reparam(model, gg, x0, Regime::standard(eps));
                out = json{{"regime", "standard"},
                           {"eps", eps},
                           {"sup_dist", br.sup_dist},
                           {"rep_certified", br.rep_certified},
                           {"reparam_knots", to_json(br.h)}};
            } else {
                throw PreconditionError("unknown regime '" + sh_regime + "'");
            }
            const std::string path = g.out_dir + "/shadow_result.json";
            std::ofstream f(path);
            f << out.dump(2) << "\n";
            std::cout << out.dump(2) << "\n";
            return 0;
        }
        if (*c_ref) {
            const double eps = r_eps > 0.0
                                   ? r_eps
                                   : std::min(g.params.l, g.params.delta_cap / 2.0) / 2.0;
            const double d = r_d > 0.0 ? r_d : eps / 100.0;
            const RefutationReport rep =
                standard_refute(model, d, eps, r_budget, g.seed);
            const json out = to_json(rep);
            std::ofstream f(g.out_dir + "/refutation.json");
            f << out.dump(2) << "\n";
            std::cout << out.dump(2) << "\n";
            return rep.all_obstructed ? 0 : 1;
        }
        if (*c_scn) {
            ScenarioConfig cfg;
            cfg.params = g.params;
            cfg.name = scn_name;
            cfg.budget = scn_budget;
            cfg.trials = scn_trials;
            cfg.seed = g.seed;
            cfg.out_dir = g.out_dir;
            return run_scenario(cfg);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
