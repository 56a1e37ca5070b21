#include "stochcuts/cut_io.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace stochcuts {

using nlohmann::json;

CutKind ParseCutKind(const std::string& name) {
  for (CutKind k : {CutKind::kBenders, CutKind::kPbBenC, CutKind::kLagrangian,
                    CutKind::kPbLagC, CutKind::kFeasibility}) {
    if (name == ToString(k)) return k;
  }
  throw std::invalid_argument("unknown cut kind '" + name + "'");
}

void WriteCutPool(std::ostream& out, const CutPool& pool) {
  json doc;
  doc["schema"] = kCutPoolSchema;
  doc["instance"] = pool.instance;
  doc["cuts"] = json::array();
  for (const Cut& c : pool.cuts) {
    json theta = json::array();
    for (const auto& [s, w] : c.theta_coeffs) theta.push_back({s, w});
    doc["cuts"].push_back({{"kind", ToString(c.kind)},
                           {"x", c.x_coeffs},
                           {"theta", theta},
                           {"rhs", c.rhs},
                           {"origin", c.origin},
                           {"dual", c.generating_dual}});
  }
  out << doc.dump(1) << "\n";
}

CutPool ReadCutPool(std::istream& in) {
  try {
    const json doc = json::parse(in);
    if (doc.at("schema") != kCutPoolSchema) {
      throw std::runtime_error("cut pool schema is not " +
                               std::string(kCutPoolSchema));
    }
    CutPool pool;
    pool.instance = doc.at("instance").get<std::string>();
    for (const json& j : doc.at("cuts")) {
      Cut c;
      c.kind = ParseCutKind(j.at("kind").get<std::string>());
      c.x_coeffs = j.at("x").get<std::vector<double>>();
      for (const json& t : j.at("theta")) {
        c.theta_coeffs.emplace_back(t.at(0).get<int>(), t.at(1).get<double>());
      }
      c.rhs = j.at("rhs").get<double>();
      if (j.contains("origin")) c.origin = j["origin"].get<std::vector<int>>();
      if (j.contains("dual")) c.generating_dual = j["dual"].get<std::vector<double>>();
      pool.cuts.push_back(std::move(c));
    }
    return pool;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed cut pool: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("malformed cut pool: ") + e.what());
  }
}

}  // namespace stochcuts
