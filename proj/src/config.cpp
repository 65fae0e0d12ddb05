#include "shadowlab/config.hpp"

#include <fstream>
#include <sstream>

#include "shadowlab/errors.hpp"

namespace shadowlab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument("trailing junk");
        return d;
    } catch (const std::exception&) {
        throw PreconditionError("config: cannot parse '" + value +
                                "' as a number for key '" + key + "'");
    }
}

} // namespace

std::map<std::string, std::string> read_ini(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("config: cannot open '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line, section;
    while (std::getline(in, line)) {
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw PreconditionError("config: malformed line '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        kv[section.empty() ? key : section + "." + key] = value;
    }
    return kv;
}

void apply_override(Params& p, const std::string& key, const std::string& value) {
    if (key == "a") p.a = parse_double(key, value);
    else if (key == "l") p.l = parse_double(key, value);
    else if (key == "K") p.K = parse_double(key, value);
    else if (key == "delta_cap") p.delta_cap = parse_double(key, value);
    else if (key == "T_a") p.T_a = parse_double(key, value);
    else if (key == "chart_radius") p.chart_radius = parse_double(key, value);
    else if (key == "grid_dt") p.grid_dt = parse_double(key, value);
    else if (key == "tol") p.tol = parse_double(key, value);
    else throw PreconditionError("config: unknown parameter key '" + key + "'");
}

Params params_from_ini(const std::string& path) {
    Params p;
    for (const auto& [skey, value] : read_ini(path)) {
        const auto dot = skey.find('.');
        const std::string section = dot == std::string::npos ? "" : skey.substr(0, dot);
        const std::string key = dot == std::string::npos ? skey : skey.substr(dot + 1);
        if (section != "field" && section != "numerics")
            throw PreconditionError("config: unknown section '" + section + "'");
        apply_override(p, key, value);
    }
    return p;
}

std::string params_to_ini(const Params& p) {
    std::ostringstream os;
    os.precision(17);
    os << "[field]\n"
       << "a = " << p.a << "\n"
       << "l = " << p.l << "\n"
       << "K = " << p.K << "\n"
       << "delta_cap = " << p.delta_cap << "\n"
       << "T_a = " << p.T_a << "\n"
       << "chart_radius = " << p.chart_radius << "\n"
       << "\n[numerics]\n"
       << "grid_dt = " << p.grid_dt << "\n"
       << "tol = " << p.tol << "\n";
    return os.str();
}

} // namespace shadowlab
