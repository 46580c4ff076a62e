#include "sphstab/packing_json.hpp"

#include <fstream>

#include "sphstab/errors.hpp"

namespace sphstab {

using nlohmann::json;

json to_json(const Packing& p) {
  json pts = json::array();
  for (const auto& x : p.points) pts.push_back(std::vector<double>(x.vec().begin(), x.vec().end()));
  return {{"dimension", p.dimension}, {"points", pts}, {"phi", p.phi}, {"eps", p.eps}, {"meta", p.meta}};
}

Packing packing_from_json(const json& j) {
  if (!j.is_object()) throw InputError("packing: top level must be an object");
  for (const char* key : {"dimension", "points", "phi", "eps"})
    if (!j.contains(key)) throw InputError(std::string("packing: missing field '") + key + "'");
  if (!j["dimension"].is_number_integer()) throw InputError("packing: 'dimension' must be an integer");
  if (!j["phi"].is_number() || !j["eps"].is_number()) throw InputError("packing: 'phi' and 'eps' must be numbers");
  if (!j["points"].is_array()) throw InputError("packing: 'points' must be an array");

  Packing p;
  p.dimension = j["dimension"].get<int>();
  if (p.dimension < kMinDim || p.dimension > kMaxDim) throw InputError("packing: 'dimension' must lie in 2..5");
  p.phi = j["phi"].get<double>();
  p.eps = j["eps"].get<double>();
  if (p.eps < 0.0) throw InputError("packing: 'eps' must be nonnegative");
  if (j.contains("meta")) {
    if (!j["meta"].is_object()) throw InputError("packing: 'meta' must be an object");
    p.meta = j["meta"];
  }
  int index = 0;
  for (const auto& row : j["points"]) {
    if (!row.is_array() || static_cast<int>(row.size()) != p.dimension)
      throw InputError("packing: point " + std::to_string(index) + " does not have 'dimension' coordinates");
    Vec v(p.dimension);
    for (int k = 0; k < p.dimension; ++k) {
      if (!row[k].is_number()) throw InputError("packing: non-numeric coordinate in point " + std::to_string(index));
      v[k] = row[k].get<double>();
    }
    try {
      p.points.emplace_back(v);
    } catch (const DomainError& e) {
      throw InputError("packing: point " + std::to_string(index) + ": " + e.what());
    }
    ++index;
  }
  return p;
}

Packing read_packing(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InputError("'" + path + "': " + e.what());
  }
  return packing_from_json(j);
}

void write_packing(const Packing& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << to_json(p).dump(2) << '\n';
}

}  // namespace sphstab
