#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "otelbaev/errors.hpp"
#include "otelbaev/measure.hpp"

namespace otelbaev {

inline nlohmann::json measure_to_json(const Measure& m) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& a : m.atoms()) atoms.push_back({{"x", a.position}, {"mass", a.mass}});
  nlohmann::json density = nlohmann::json::array();
  for (const auto& s : m.density()) density.push_back({{"from", s.left}, {"to", s.right}, {"value", s.value}});
  return {{"atoms", std::move(atoms)}, {"density", std::move(density)}};
}

namespace detail {

inline double json_number(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw InvalidInput(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw InvalidInput(where + ": missing field \"" + key + "\"");
  if (!it->is_number()) throw InvalidInput(where + "." + key + ": expected a number");
  return it->get<double>();
}

}  // namespace detail

inline Measure measure_from_json(const nlohmann::json& j, const std::string& where = "measure") {
  if (!j.is_object()) throw InvalidInput(where + ": expected an object with \"atoms\" and \"density\"");
  std::vector<Atom> atoms;
  std::vector<DensitySegment> density;
  if (auto it = j.find("atoms"); it != j.end()) {
    if (!it->is_array()) throw InvalidInput(where + ".atoms: expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string w = where + ".atoms[" + std::to_string(i) + "]";
      atoms.push_back({detail::json_number((*it)[i], "x", w), detail::json_number((*it)[i], "mass", w)});
    }
  }
  if (auto it = j.find("density"); it != j.end()) {
    if (!it->is_array()) throw InvalidInput(where + ".density: expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string w = where + ".density[" + std::to_string(i) + "]";
      density.push_back({detail::json_number((*it)[i], "from", w), detail::json_number((*it)[i], "to", w),
                         detail::json_number((*it)[i], "value", w)});
    }
  }
  try {
    return Measure::build(std::move(atoms), std::move(density));
  } catch (const InvalidInput& e) {
    throw InvalidInput(where + ": " + e.what());
  }
}

}  // namespace otelbaev
