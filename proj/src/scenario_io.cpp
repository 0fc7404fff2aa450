#include "conntraj/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "conntraj/error.hpp"

namespace conntraj {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) {
  throw Error(ErrorCode::InvalidInput, "scenario: " + message);
}

const json& field(const json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) fail(std::string("missing key '") + key + "'");
  return *it;
}

double number(const json& value, const std::string& where) {
  if (!value.is_number()) fail("field '" + where + "' must be a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) fail("field '" + where + "' is not finite");
  return v;
}

Vec2 point(const json& value, const std::string& where) {
  if (!value.is_array() || value.size() != 2) fail("field '" + where + "' must be [x, y]");
  return {number(value[0], where + "[0]"), number(value[1], where + "[1]")};
}

}  // namespace

Scenario parse_scenario(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    // e.byte is 1-based; count newlines before it for the line number.
    std::size_t line = 1;
    const std::size_t end = std::min<std::size_t>(e.byte, json_text.size());
    for (std::size_t i = 0; i + 1 < end; ++i)
      if (json_text[i] == '\n') ++line;
    fail("syntax error at line " + std::to_string(line) + ": " + e.what());
  } catch (const json::exception& e) {
    fail(std::string("unreadable value: ") + e.what());
  }
  if (!doc.is_object()) fail("top level must be an object");

  ScenarioParams p;
  const json& gbs = field(doc, "gbs");
  if (!gbs.is_array()) fail("field 'gbs' must be an array of [x, y]");
  for (std::size_t i = 0; i < gbs.size(); ++i)
    p.gbs.push_back(point(gbs[i], "gbs[" + std::to_string(i) + "]"));
  p.u0 = point(field(doc, "u0"), "u0");
  p.uf = point(field(doc, "uF"), "uF");
  p.uav_altitude = number(field(doc, "H"), "H");
  p.gbs_altitude = number(field(doc, "HG"), "HG");
  p.vmax = number(field(doc, "vmax"), "vmax");
  p.gamma0_db = number(field(doc, "gamma0_db"), "gamma0_db");
  return Scenario(std::move(p));
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

std::string scenario_to_json(const Scenario& s) {
  json doc;
  doc["gbs"] = json::array();
  for (const Vec2 g : s.gbs()) doc["gbs"].push_back({g.x, g.y});
  doc["u0"] = {s.u0().x, s.u0().y};
  doc["uF"] = {s.uf().x, s.uf().y};
  doc["H"] = s.uav_altitude();
  doc["HG"] = s.gbs_altitude();
  doc["vmax"] = s.vmax();
  doc["gamma0_db"] = s.gamma0_db();
  return doc.dump(2);
}

}  // namespace conntraj
