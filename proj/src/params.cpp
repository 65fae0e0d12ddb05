#include "shadowlab/params.hpp"

#include <sstream>

#include "shadowlab/errors.hpp"

namespace shadowlab {

std::vector<std::string> constraint_violations(const Params& p) {
    std::vector<std::string> v;
    auto fail = [&](const std::string& msg) { v.push_back(msg); };

    if (!(p.a > 0.0)) fail("a > 0");
    if (!(p.l > 0.0)) fail("l > 0");
    if (!(p.K > 3.0)) fail("K > 3");
    if (!(p.K * p.l < 1.0)) fail("K*l < 1");
    if (!(2.0 * p.l < 1.0)) fail("2*l < 1");
    if (!(p.delta_cap > 0.0 && p.delta_cap < 1.0)) fail("delta_cap in (0,1)");
    if (!(p.T_a > 0.0)) fail("T_a > 0");
    if (!(p.chart_radius > 0.0)) fail("chart_radius > 0");
    if (!((p.K - 1.0) * p.l < p.chart_radius)) fail("(K-1)*l < chart_radius");
    if (!(p.grid_dt > 0.0)) fail("grid_dt > 0");
    if (!(p.tol > 0.0)) fail("tol > 0");
    return v;
}

ValidatedParams validate(const Params& p) {
    auto v = constraint_violations(p);
    if (!v.empty()) {
        std::ostringstream os;
        os << "parameter constraints violated:";
        for (const auto& s : v) os << " {" << s << "}";
        throw ConstraintViolation(os.str());
    }
    return ValidatedParams(p);
}

} // namespace shadowlab
