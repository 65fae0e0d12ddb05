#pragma once

#include <json.hpp>

#include "shadowlab/params.hpp"
#include "shadowlab/pseudotraj.hpp"
#include "shadowlab/shadowing.hpp"

namespace shadowlab {

using json = nlohmann::json;

json to_json(const Params& p);
json to_json(const ManifoldState& s);
json to_json(const Reparam& h);
json to_json(const ShadowCertificate& c);
json to_json(const SignRecord& r);
json to_json(const RefutationReport& r);
json to_json(const DefectReport& r);

ManifoldState state_from_json(const json& j);
Reparam reparam_from_json(const json& j);

} // namespace shadowlab
