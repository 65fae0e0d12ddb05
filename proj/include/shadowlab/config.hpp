#pragma once

#include <map>
#include <string>

#include "shadowlab/params.hpp"

namespace shadowlab {

// Minimal INI reader: [section] headers, key = value lines, '#' or ';'
// comments. Returned keys are "section.key".
std::map<std::string, std::string> read_ini(const std::string& path);

// Parses a parameter record from an INI file with [field] and [numerics]
// sections. Unknown keys are rejected so typos do not silently fall back to
// defaults. Missing keys keep their default values.
Params params_from_ini(const std::string& path);

// Applies "key=value" overrides (keys as in the config file, without the
// section prefix) on top of an existing record.
void apply_override(Params& p, const std::string& key, const std::string& value);

std::string params_to_ini(const Params& p);

} // namespace shadowlab
