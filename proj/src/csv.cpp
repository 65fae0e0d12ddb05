#include "shadowlab/csv.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "shadowlab/errors.hpp"

namespace shadowlab {

void CsvTable::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw PreconditionError("csv: cannot open '" + path + "' for writing");
    out << std::setprecision(17);
    for (std::size_t i = 0; i < header.size(); ++i)
        out << header[i] << (i + 1 < header.size() ? "," : "");
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 < row.size() ? "," : "");
        out << "\n";
    }
}

namespace {

std::vector<double> state_cells(const ManifoldState& s) {
    switch (s.region) {
        case Region::ChartP:
        case Region::ChartQ:
            return {s.c[0], s.c[1], s.c[2], s.c[3], 0.0};
        case Region::Transit:
            return {s.elapsed, s.off[0], s.off[1], s.off[2], 0.0};
        case Region::FarS:
        case Region::FarU:
            return {s.beyond, s.c[0], s.c[1], s.c[2], s.c[3]};
    }
    return {};
}

ManifoldState state_from_cells(const std::string& region,
                               const std::vector<double>& v) {
    if (region == "P") return ManifoldState::chart_p({v[0], v[1], v[2], v[3]});
    if (region == "Q") return ManifoldState::chart_q({v[0], v[1], v[2], v[3]});
    if (region == "T") return ManifoldState::transit({v[1], v[2], v[3]}, v[0]);
    if (region == "S" || region == "U") {
        ManifoldState s;
        s.region = region == "S" ? Region::FarS : Region::FarU;
        s.beyond = v[0];
        s.c = {v[1], v[2], v[3], v[4]};
        return s;
    }
    throw PreconditionError("pseudotrajectory csv: unknown region '" + region + "'");
}

} // namespace

void write_pseudotraj_csv(const PseudoTraj& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw PreconditionError("csv: cannot open '" + path + "' for writing");
    out << std::setprecision(17);
    out << "t,region,v1,v2,v3,v4,v5\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto cells = state_cells(g.states[i]);
        out << g.time_at(i) << "," << region_name(g.states[i].region);
        for (double c : cells) out << "," << c;
        out << "\n";
    }

    nlohmann::json side{{"d", g.d_claimed},
                        {"provenance", g.provenance},
                        {"t0", g.t0},
                        {"dt", g.dt},
                        {"samples", g.size()}};
    if (g.ps_meta) {
        side["ps_form"] = {{"T_p", g.ps_meta->T_p},
                           {"T_q", g.ps_meta->T_q},
                           {"c_p", g.ps_meta->c_p},
                           {"c_q", g.ps_meta->c_q},
                           {"delta", g.ps_meta->delta},
                           {"alpha_offset", g.ps_meta->alpha_offset},
                           {"x_p", std::vector<double>(g.ps_meta->x_p.c.begin(),
                                                       g.ps_meta->x_p.c.end())},
                           {"x_q", std::vector<double>(g.ps_meta->x_q.c.begin(),
                                                       g.ps_meta->x_q.c.end())}};
    }
    std::ofstream sidecar(path + ".json");
    sidecar << side.dump(2) << "\n";
}

PseudoTraj read_pseudotraj_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("csv: cannot open '" + path + "'");
    PseudoTraj g;
    std::string line;
    std::getline(in, line); // header
    std::vector<double> times;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');
        times.push_back(std::stod(cell));
        std::getline(ss, cell, ',');
        const std::string region = cell;
        std::vector<double> v;
        while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
        if (v.size() < 5)
            throw PreconditionError("pseudotrajectory csv: short row");
        g.states.push_back(state_from_cells(region, v));
    }
    if (times.size() < 2)
        throw PreconditionError("pseudotrajectory csv: too few samples");
    g.t0 = times.front();
    g.dt = times[1] - times[0];

    std::ifstream sidecar(path + ".json");
    if (sidecar) {
        nlohmann::json side;
        sidecar >> side;
        g.d_claimed = side.value("d", 0.0);
        g.provenance = side.value("provenance", std::string("file"));
        if (side.contains("ps_form")) {
            const auto& pf = side["ps_form"];
            PsForm form;
            form.T_p = pf.at("T_p").get<double>();
            form.T_q = pf.at("T_q").get<double>();
            form.c_p = pf.at("c_p").get<double>();
            form.c_q = pf.at("c_q").get<double>();
            form.delta = pf.at("delta").get<double>();
            form.alpha_offset = pf.at("alpha_offset").get<double>();
            const auto xp = pf.at("x_p").get<std::vector<double>>();
            const auto xq = pf.at("x_q").get<std::vector<double>>();
            form.x_p = ManifoldState::chart_p({xp[0], xp[1], xp[2], xp[3]});
            form.x_q = ManifoldState::chart_q({xq[0], xq[1], xq[2], xq[3]});
            g.ps_meta = form;
        }
    } else {
        g.provenance = "file";
    }
    return g;
}

} // namespace shadowlab
