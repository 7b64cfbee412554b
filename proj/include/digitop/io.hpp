#pragma once

// JSON file formats: image specs (with optional metric), map tables, weight
// tables and closed-form functions. Rationals travel as "p/q" strings.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "digitop/classifiers.hpp"
#include "digitop/closed_form.hpp"
#include "digitop/lattice.hpp"
#include "digitop/maps.hpp"
#include "digitop/metrics.hpp"
#include "digitop/rational.hpp"

namespace digitop::io {

using json = nlohmann::json;

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw ParseError("expected a rational string \"p/q\", got " + j.dump());
}

inline json rational_to_json(const Rational& r) { return format_rational(r); }

inline json distance_to_json(const Distance& d) {
  if (!d.euclidean()) return std::to_string(d.raw());
  return json{{"sq", d.raw()}, {"approx", d.value()}};
}

inline json modulus_to_json(const Modulus& m) {
  if (!m.squared) return format_rational(m.value);
  return json{{"sq", format_rational(m.value)}, {"approx", m.approx()}};
}

inline Point point_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("point must be a nonempty array of integers: " + j.dump());
  std::vector<std::int64_t> c;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw ParseError("point coordinates must be integers: " + j.dump());
    c.push_back(v.get<std::int64_t>());
  }
  return Point(std::move(c));
}

inline json point_to_json(const Point& p) { return json(p.coords); }

inline MetricSpec metric_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ParseError("metric must be an object with \"kind\"");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "shortest_path") return MetricSpec::shortest_path();
  if (kind != "lp") throw ParseError("unknown metric kind \"" + kind + "\"");
  if (!j.contains("p")) throw ParseError("lp metric needs \"p\"");
  const auto& p = j.at("p");
  if (p.is_string() && (p == "inf" || p == "infinity")) return MetricSpec::linf();
  if (p.is_number_integer() && p.get<int>() == 1) return MetricSpec::l1();
  if (p.is_number_integer() && p.get<int>() == 2) return MetricSpec::l2();
  throw ParseError("lp metric supports p in {1, 2, \"inf\"}, got " + p.dump());
}

inline json metric_to_json(const MetricSpec& m) {
  switch (m.kind) {
    case MetricKind::L1: return {{"kind", "lp"}, {"p", 1}};
    case MetricKind::L2: return {{"kind", "lp"}, {"p", 2}};
    case MetricKind::LInf: return {{"kind", "lp"}, {"p", "inf"}};
    case MetricKind::ShortestPath: return {{"kind", "shortest_path"}};
  }
  return {};
}

struct ImageSpec {
  ImagePtr image;
  std::optional<MetricSpec> metric;
};

// {"dim": n, "points": [[...],...], "adjacency": {"family":"cu","u":k}, "metric": {...}}
inline ImageSpec image_from_json(const json& j) {
  try {
    if (!j.is_object()) throw ParseError("image spec must be a JSON object");
    for (const char* key : {"dim", "points", "adjacency"})
      if (!j.contains(key)) throw ParseError(std::string("image spec is missing \"") + key + "\"");
    if (!j.at("dim").is_number_integer() || j.at("dim").get<std::int64_t>() < 1)
      throw ParseError("\"dim\" must be a positive integer");
    const auto dim = j.at("dim").get<std::size_t>();
    const auto& adj = j.at("adjacency");
    if (!adj.is_object() || adj.value("family", "") != "cu" || !adj.contains("u") || !adj.at("u").is_number_integer())
      throw ParseError("adjacency must be {\"family\":\"cu\",\"u\":k}");
    if (!j.at("points").is_array()) throw ParseError("\"points\" must be an array");
    std::vector<Point> pts;
    for (const auto& p : j.at("points")) pts.push_back(point_from_json(p));
    ImageSpec spec;
    spec.image = std::make_shared<const DigitalImage>(dim, std::move(pts), AdjacencySpec{adj.at("u").get<int>()});
    if (j.contains("metric")) spec.metric = metric_from_json(j.at("metric"));
    return spec;
  } catch (const json::exception& e) {
    throw ParseError(std::string("image spec: ") + e.what());
  }
}

inline json image_to_json(const DigitalImage& image, std::optional<MetricSpec> metric = std::nullopt) {
  json pts = json::array();
  for (const auto& p : image.points()) pts.push_back(point_to_json(p));
  json j{{"dim", image.dimension()}, {"points", pts}, {"adjacency", {{"family", "cu"}, {"u", image.adjacency().u}}}};
  if (metric) j["metric"] = metric_to_json(*metric);
  return j;
}

// {"map": [[arg, value], ...]}
inline SelfMap map_from_json(const json& j, const ImagePtr& image) {
  try {
    if (!j.is_object() || !j.contains("map") || !j.at("map").is_array())
      throw ParseError("map spec must be {\"map\": [[arg, value], ...]}");
    std::vector<std::pair<Point, Point>> pairs;
    for (const auto& entry : j.at("map")) {
      if (!entry.is_array() || entry.size() != 2) throw ParseError("map entry must be [arg, value]: " + entry.dump());
      pairs.emplace_back(point_from_json(entry[0]), point_from_json(entry[1]));
    }
    return SelfMap::from_pairs(image, pairs);
  } catch (const json::exception& e) {
    throw ParseError(std::string("map spec: ") + e.what());
  }
}

inline json map_to_json(const SelfMap& f) {
  json entries = json::array();
  for (std::size_t i = 0; i < f.size(); ++i)
    entries.push_back(json::array({point_to_json(f.image().point(i)), point_to_json(f.image().point(f[i]))}));
  return json{{"map", entries}};
}

// {"weights": [[x, y, "p/q"], ...]} over every ordered pair.
inline WeightFunction weights_from_json(const json& j, const ImagePtr& image) {
  try {
    if (!j.is_object() || !j.contains("weights") || !j.at("weights").is_array())
      throw ParseError("weight spec must be {\"weights\": [[x, y, value], ...]}");
    const std::size_t n = image->size();
    std::vector<Rational> table(n * n);
    std::vector<bool> seen(n * n, false);
    for (const auto& e : j.at("weights")) {
      if (!e.is_array() || e.size() != 3) throw ParseError("weight entry must be [x, y, value]: " + e.dump());
      const auto x = image->index_of(point_from_json(e[0]));
      const auto y = image->index_of(point_from_json(e[1]));
      if (!x || !y) throw ParseError("weight entry refers to a point outside the image: " + e.dump());
      if (seen[*x * n + *y]) throw ParseError("weight entry given twice: " + e.dump());
      seen[*x * n + *y] = true;
      table[*x * n + *y] = rational_from_json(e[2]);
    }
    for (bool s : seen)
      if (!s) throw ParseError("weight table is not total over ordered pairs");
    return WeightFunction(image, std::move(table));
  } catch (const json::exception& e) {
    throw ParseError(std::string("weight spec: ") + e.what());
  }
}

// {"form":"linear","k":"1/2"} | {"form":"power","c":"1","e":2} |
// {"form":"constant","c":"0"} | {"form":"step","breakpoints":[["1","1"], ...]}
inline ClosedFormFn closed_form_from_json(const json& j) {
  try {
    if (!j.is_object() || !j.contains("form")) throw ParseError("closed form must be an object with \"form\"");
    const auto form = j.at("form").get<std::string>();
    if (form == "linear") return ClosedFormFn::linear(rational_from_json(j.at("k")));
    if (form == "constant") return ClosedFormFn::constant(rational_from_json(j.at("c")));
    if (form == "power") {
      const auto& e = j.at("e");
      if (!e.is_number_integer() || e.get<std::int64_t>() < 0) throw ParseError("power exponent must be a nonnegative integer");
      return ClosedFormFn::power(rational_from_json(j.at("c")), e.get<unsigned>());
    }
    if (form == "step") {
      std::vector<std::pair<Rational, Rational>> bp;
      for (const auto& e : j.at("breakpoints")) {
        if (!e.is_array() || e.size() != 2) throw ParseError("breakpoint must be [t, value]");
        bp.emplace_back(rational_from_json(e[0]), rational_from_json(e[1]));
      }
      return ClosedFormFn::step(std::move(bp));
    }
    throw ParseError("unknown closed form \"" + form + "\"");
  } catch (const json::exception& e) {
    throw ParseError(std::string("closed form: ") + e.what());
  }
}

inline json closed_form_to_json(const ClosedFormFn& f) {
  switch (f.form()) {
    case ClosedFormFn::Form::Linear: return {{"form", "linear"}, {"k", format_rational(f.coefficient())}};
    case ClosedFormFn::Form::Constant: return {{"form", "constant"}, {"c", format_rational(f.coefficient())}};
    case ClosedFormFn::Form::Power:
      return {{"form", "power"}, {"c", format_rational(f.coefficient())}, {"e", f.exponent()}};
    case ClosedFormFn::Form::Step: {
      json bp = json::array();
      for (const auto& [t, v] : f.breakpoints()) bp.push_back({format_rational(t), format_rational(v)});
      return {{"form", "step"}, {"breakpoints", bp}};
    }
  }
  return {};
}

}  // namespace digitop::io
