#include "deltaspec/config_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "deltaspec/errors.hpp"

namespace deltaspec {

namespace {

using nlohmann::json;

double finite_number(const json& v, const std::string& pointer) {
  if (!v.is_number()) throw ConfigError(pointer, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(pointer, "number is not finite");
  return x;
}

const json& array_field(const json& doc, const char* key) {
  const std::string pointer = std::string("/") + key;
  if (!doc.contains(key)) throw ConfigError(pointer, std::string("missing key \"") + key + "\"");
  const json& v = doc.at(key);
  if (!v.is_array()) throw ConfigError(pointer, "expected an array");
  return v;
}

}  // namespace

PointConfig parse_config_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("", "configuration must be a JSON object");

  const json& alpha_json = array_field(doc, "alpha");
  const json& points_json = array_field(doc, "points");

  std::vector<double> alpha;
  for (std::size_t j = 0; j < alpha_json.size(); ++j)
    alpha.push_back(finite_number(alpha_json[j], "/alpha/" + std::to_string(j)));

  std::vector<Vec3> points;
  for (std::size_t j = 0; j < points_json.size(); ++j) {
    const std::string pointer = "/points/" + std::to_string(j);
    const json& p = points_json[j];
    if (!p.is_array() || p.size() != 3) throw ConfigError(pointer, "expected [x, y, z]");
    Vec3 y{};
    for (std::size_t c = 0; c < 3; ++c) y[c] = finite_number(p[c], pointer + "/" + std::to_string(c));
    points.push_back(y);
  }
  return PointConfig(std::move(alpha), std::move(points));
}

PointConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open configuration file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

}  // namespace deltaspec
