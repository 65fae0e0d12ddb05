#include "shadowlab/json_io.hpp"

#include "shadowlab/errors.hpp"

namespace shadowlab {

json to_json(const Params& p) {
    return json{{"a", p.a},
                {"l", p.l},
                {"K", p.K},
                {"delta_cap", p.delta_cap},
                {"T_a", p.T_a},
                {"chart_radius", p.chart_radius},
                {"grid_dt", p.grid_dt},
                {"tol", p.tol}};
}

json to_json(const ManifoldState& s) {
    json j;
    j["region"] = region_name(s.region);
    switch (s.region) {
        case Region::ChartP:
        case Region::ChartQ:
            j["coords"] = s.c;
            break;
        case Region::Transit:
            j["offsets"] = s.off;
            j["elapsed"] = s.elapsed;
            break;
        case Region::FarS:
        case Region::FarU:
            j["exit_coords"] = s.c;
            j["beyond"] = s.beyond;
            break;
    }
    return j;
}

json to_json(const Reparam& h) {
    json arr = json::array();
    for (const auto& [t, v] : h.knots()) arr.push_back(json::array({t, v}));
    return arr;
}

json to_json(const ShadowCertificate& c) {
    return json{{"x0", to_json(c.x0)},
                {"reparam_knots", to_json(c.h)},
                {"sup_dist", c.sup_dist},
                {"case", c.case_tag},
                {"locals", c.locals},
                {"piece_residuals", c.piece_residuals}};
}

json to_json(const SignRecord& r) {
    return json{{"rep_admissible", r.rep_admissible},
                {"endpoints_track", r.endpoints_track},
                {"sections_found", r.sections_found},
                {"H_p", r.H_p},
                {"H_q", r.H_q},
                {"transit_preserved", r.transit_preserved},
                {"premise_p", r.premise_p},
                {"premise_q", r.premise_q},
                {"gap_p", r.gap_p},
                {"gap_q", r.gap_q},
                {"p4_x_p", r.p4_x_p},
                {"p4_x_q", r.p4_x_q},
                {"contradiction", r.contradiction},
                {"mode", r.mode}};
}

json to_json(const RefutationReport& r) {
    return json{{"eps", r.eps},
                {"d", r.d},
                {"searched", r.searched},
                {"min_sup", r.min_sup},
                {"endpoint_admissible", r.endpoint_admissible},
                {"premise_failures", r.premise_failures},
                {"sign_contradictions", r.sign_contradictions},
                {"all_obstructed", r.all_obstructed},
                {"best_candidate",
                 json{{"sup_dist", r.best.sup_dist},
                      {"failure", r.best.failure},
                      {"sign", to_json(r.best.sign)}}},
                {"oriented_sup", r.oriented_sup},
                {"oriented_case", r.oriented_case}};
}

json to_json(const DefectReport& r) {
    return json{{"pass", r.pass},
                {"worst", r.worst},
                {"t_at", r.t_at},
                {"tau_at", r.tau_at}};
}

ManifoldState state_from_json(const json& j) {
    const std::string reg = j.at("region").get<std::string>();
    ManifoldState s;
    if (reg == "P" || reg == "Q") {
        Vec4 c = j.at("coords").get<Vec4>();
        return reg == "P" ? ManifoldState::chart_p(c) : ManifoldState::chart_q(c);
    }
    if (reg == "T") {
        return ManifoldState::transit(j.at("offsets").get<Vec3>(),
                                      j.at("elapsed").get<double>());
    }
    if (reg == "S" || reg == "U") {
        s.region = reg == "S" ? Region::FarS : Region::FarU;
        s.c = j.at("exit_coords").get<Vec4>();
        s.beyond = j.at("beyond").get<double>();
        return s;
    }
    throw PreconditionError("state_from_json: unknown region tag '" + reg + "'");
}

Reparam reparam_from_json(const json& j) {
    std::vector<std::pair<double, double>> knots;
    for (const auto& kv : j)
        knots.emplace_back(kv.at(0).get<double>(), kv.at(1).get<double>());
    return Reparam::from_knots(std::move(knots));
}

} // namespace shadowlab
