#pragma once

#include "shadowlab/field4d.hpp"
#include "shadowlab/params.hpp"

namespace shadowlab::testutil {

inline Params default_params() { return Params{}; }

inline ValidatedParams default_validated() { return validate(default_params()); }

inline const Model& default_model() {
    static Model model(default_validated());
    return model;
}

} // namespace shadowlab::testutil
