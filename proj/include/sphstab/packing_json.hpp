#pragma once

// Packing JSON: {"dimension": d, "points": [[...], ...], "phi": x, "eps": y, "meta": {...}}.

#include <string>

#include <json.hpp>

#include "sphstab/sphgeo.hpp"

namespace sphstab {

struct Packing {
  int dimension = 0;
  PointSet points;
  double phi = 0.0;
  double eps = 0.0;
  nlohmann::json meta = nlohmann::json::object();
};

nlohmann::json to_json(const Packing& p);
/// Validates the schema; throws InputError on anything malformed.
Packing packing_from_json(const nlohmann::json& j);

Packing read_packing(const std::string& path);
void write_packing(const Packing& p, const std::string& path);

}  // namespace sphstab
