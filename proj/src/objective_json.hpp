#pragma once

// Shared (file-format) encoding of the objective families, used by the
// instance and network loaders.

#include "json.hpp"
#include "pdfw/problems.hpp"

namespace pdfw::problems::detail {

inline nlohmann::json objective_to_json(const Objective& f) {
    if (f.family.empty())
        throw load_error("save: objective has no serializable family");
    nlohmann::json j;
    j["kind"] = f.family;
    if (f.family == "quadratic") {
        j["target"] = f.params.at(0);
    } else if (f.family == "linear") {
        j["coefficients"] = f.params.at(0);
        j["offset"] = f.offset;
    } else if (f.family == "sigmoidal") {
        j["amplitude"] = f.params.at(0);
        j["steepness"] = f.params.at(1);
        j["threshold"] = f.params.at(2);
    } else {
        throw load_error("save: unknown objective family '" + f.family + "'");
    }
    return j;
}

inline Objective objective_from_json(const nlohmann::json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "quadratic") return quadratic_objective(j.at("target").get<Vec>());
    if (kind == "linear")
        return linear_objective(j.at("coefficients").get<Vec>(), j.value("offset", 0.0));
    if (kind == "sigmoidal")
        return sigmoidal_objective(j.at("amplitude").get<Vec>(), j.at("steepness").get<Vec>(),
                                   j.at("threshold").get<Vec>());
    throw load_error("instance file: unknown objective kind '" + kind + "'");
}

}  // namespace pdfw::problems::detail
