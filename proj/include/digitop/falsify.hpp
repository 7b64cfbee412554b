#pragma once

// Brute-force falsifier for assertions of the form "hypotheses imply
// conclusion" over catalog images, metrics, constant grids and one or two
// self-maps.
//
// Schema:
//   {"arity": 1|2,
//    "images": ["path3", ...]            (optional, default: whole catalog),
//    "metrics": ["l1","l2","linf","shortest_path"]  (optional, default: all applicable),
//    "constants": {"alpha": ["1/4", "49/100"]}      (optional),
//    "hypotheses": [{"pred": "shukla31", "alpha": "$alpha"}, ...],
//    "conclusion": {"pred": "unique_common_fixed_point"}}
// Predicates take "on": "S"|"T" when unary and "negate": true to flip.
// Constant arguments are rational strings or "$name" references to a grid.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "digitop/catalog.hpp"
#include "digitop/classifiers.hpp"
#include "digitop/compatibility.hpp"
#include "digitop/io.hpp"
#include "digitop/maps.hpp"
#include "digitop/parallel.hpp"

namespace digitop {

using json = nlohmann::json;

enum class PredicateKind {
  True, False,
  // unary
  Continuous, Contraction, Geraghty, Wus, Expansive, Constant, Bijective, HasFixedPoint, UniqueFixedPoint,
  // binary
  Compatible, CompatibleK, CompatibleR, ChauhanCompatible, GeraghtyPair, Commute, CommonFixedPoint,
  UniqueCommonFixedPoint, Shukla31, Shukla32, RangeSubset,
};

struct PredicateSpec {
  PredicateKind kind = PredicateKind::True;
  std::string name;
  bool on_t = false;
  bool negate = false;
  // Either a literal or a grid reference.
  std::optional<Rational> alpha;
  std::optional<std::string> alpha_ref;
};

struct AssertionSchema {
  int arity = 1;
  std::vector<std::string> images;
  std::vector<MetricSpec> metrics;  // empty: every applicable metric
  std::vector<std::pair<std::string, std::vector<Rational>>> constants;
  std::vector<PredicateSpec> hypotheses;
  PredicateSpec conclusion;
};

namespace detail {

inline bool is_binary(PredicateKind k) { return k >= PredicateKind::Compatible; }

inline const std::map<std::string, PredicateKind>& predicate_names() {
  static const std::map<std::string, PredicateKind> names = {
      {"true", PredicateKind::True},
      {"false", PredicateKind::False},
      {"continuous", PredicateKind::Continuous},
      {"contraction", PredicateKind::Contraction},
      {"geraghty", PredicateKind::Geraghty},
      {"wus", PredicateKind::Wus},
      {"expansive", PredicateKind::Expansive},
      {"constant", PredicateKind::Constant},
      {"bijective", PredicateKind::Bijective},
      {"has_fixed_point", PredicateKind::HasFixedPoint},
      {"unique_fixed_point", PredicateKind::UniqueFixedPoint},
      {"compatible", PredicateKind::Compatible},
      {"compatible_k", PredicateKind::CompatibleK},
      {"compatible_r", PredicateKind::CompatibleR},
      {"chauhan_compatible", PredicateKind::ChauhanCompatible},
      {"geraghty_pair", PredicateKind::GeraghtyPair},
      {"commute", PredicateKind::Commute},
      {"common_fixed_point", PredicateKind::CommonFixedPoint},
      {"unique_common_fixed_point", PredicateKind::UniqueCommonFixedPoint},
      {"shukla31", PredicateKind::Shukla31},
      {"shukla32", PredicateKind::Shukla32},
      {"range_subset", PredicateKind::RangeSubset},
  };
  return names;
}

inline PredicateSpec predicate_from_json(const json& j, int arity) {
  if (!j.is_object() || !j.contains("pred") || !j.at("pred").is_string())
    throw ParseError("predicate must be an object with a \"pred\" name: " + j.dump());
  PredicateSpec p;
  p.name = j.at("pred").get<std::string>();
  const auto it = predicate_names().find(p.name);
  if (it == predicate_names().end()) throw ParseError("unknown predicate \"" + p.name + "\"");
  p.kind = it->second;
  if (is_binary(p.kind) && arity != 2) throw ParseError("predicate \"" + p.name + "\" needs arity 2");
  if (j.contains("on")) {
    const auto on = j.at("on").get<std::string>();
    if (on != "S" && on != "T") throw ParseError("\"on\" must be \"S\" or \"T\"");
    if (on == "T" && arity != 2) throw ParseError("\"on\": \"T\" needs arity 2");
    p.on_t = on == "T";
  }
  p.negate = j.value("negate", false);
  if (p.kind == PredicateKind::Shukla31 || p.kind == PredicateKind::Shukla32) {
    if (!j.contains("alpha")) throw ParseError("predicate \"" + p.name + "\" needs \"alpha\"");
    const auto& a = j.at("alpha");
    if (a.is_string() && a.get<std::string>().starts_with("$")) p.alpha_ref = a.get<std::string>().substr(1);
    else p.alpha = io::rational_from_json(a);
  }
  return p;
}

}  // namespace detail

inline AssertionSchema schema_from_json(const json& j) {
  try {
    if (!j.is_object()) throw ParseError("schema must be a JSON object");
    AssertionSchema s;
    s.arity = j.value("arity", 1);
    if (s.arity != 1 && s.arity != 2) throw ParseError("arity must be 1 or 2");
    if (j.contains("images")) {
      for (const auto& id : j.at("images")) {
        const auto name = id.get<std::string>();
        if (!find_catalog_entry(name)) throw ParseError("unknown catalog image \"" + name + "\"");
        s.images.push_back(name);
      }
    } else {
      for (const auto& e : builtin_catalog()) s.images.push_back(e.id);
    }
    if (j.contains("metrics"))
      for (const auto& m : j.at("metrics")) {
        const auto spec = metric_from_name(m.get<std::string>());
        if (!spec) throw ParseError("unknown metric " + m.dump());
        s.metrics.push_back(*spec);
      }
    if (j.contains("constants")) {
      if (!j.at("constants").is_object()) throw ParseError("\"constants\" must map names to grids");
      for (const auto& [name, grid] : j.at("constants").items()) {
        std::vector<Rational> values;
        for (const auto& v : grid) values.push_back(io::rational_from_json(v));
        if (values.empty()) throw ParseError("constant grid \"" + name + "\" is empty");
        s.constants.emplace_back(name, std::move(values));
      }
    }
    if (!j.contains("conclusion")) throw ParseError("schema needs a \"conclusion\"");
    for (const auto& h : j.value("hypotheses", json::array())) s.hypotheses.push_back(detail::predicate_from_json(h, s.arity));
    s.conclusion = detail::predicate_from_json(j.at("conclusion"), s.arity);
    auto check_ref = [&](const PredicateSpec& p) {
      if (!p.alpha_ref) return;
      const bool found = std::any_of(s.constants.begin(), s.constants.end(),
                                     [&](const auto& c) { return c.first == *p.alpha_ref; });
      if (!found) throw ParseError("predicate \"" + p.name + "\" refers to undeclared constant $" + *p.alpha_ref);
    };
    for (const auto& h : s.hypotheses) check_ref(h);
    check_ref(s.conclusion);
    return s;
  } catch (const json::exception& e) {
    throw ParseError(std::string("schema: ") + e.what());
  }
}

namespace detail {

// a(xy) <= alpha b + c with a, b, c distances of one metric.
inline bool linear_bound_holds(const Distance& a, const Rational& alpha, const Distance& b, const Distance& c,
                               double tau) {
  const auto ea = a.exact_value(), eb = b.exact_value(), ec = c.exact_value();
  if (eb && ec) {
    const Rational rhs = alpha * *eb + *ec;
    return ea ? *ea <= rhs : Rational(a.raw()) <= rhs * rhs;
  }
  return a.value() <= to_double(alpha) * b.value() + c.value() + tau;
}

struct Candidate {
  const MetricSpace& space;
  const SelfMap& S;
  const SelfMap* T;
  const std::vector<Rational>& constants;
};

inline Rational alpha_of(const PredicateSpec& p, const AssertionSchema& schema, const std::vector<Rational>& values) {
  if (p.alpha) return *p.alpha;
  for (std::size_t i = 0; i < schema.constants.size(); ++i)
    if (schema.constants[i].first == *p.alpha_ref) return values[i];
  throw ContractError("unbound constant $" + *p.alpha_ref);
}

inline bool evaluate_raw(const PredicateSpec& p, const AssertionSchema& schema, const Candidate& c) {
  const auto& space = c.space;
  const SelfMap& f = p.on_t ? *c.T : c.S;
  switch (p.kind) {
    case PredicateKind::True: return true;
    case PredicateKind::False: return false;
    case PredicateKind::Continuous: return is_continuous_adjacency(space.image(), f);
    case PredicateKind::Contraction: return contraction_modulus(f, space).is_contraction;
    case PredicateKind::Geraghty: return is_geraghty(f, space).holds;
    case PredicateKind::Wus: return is_wus_contraction(f, space).holds;
    case PredicateKind::Expansive: return is_expansive(f, space).holds;
    case PredicateKind::Constant: return is_constant(f);
    case PredicateKind::Bijective: return is_bijective(f);
    case PredicateKind::HasFixedPoint: return !fixed_points(f).empty();
    case PredicateKind::UniqueFixedPoint: return fixed_points(f).size() == 1;
    default: break;
  }
  const SelfMap& S = c.S;
  const SelfMap& T = *c.T;
  const std::size_t n = S.size();
  auto common = [&] {
    std::size_t k = 0;
    for (std::size_t x = 0; x < n; ++x) k += S[x] == x && T[x] == x;
    return k;
  };
  switch (p.kind) {
    case PredicateKind::Compatible: return is_compatible(MapPair(S, T), space);
    case PredicateKind::CompatibleK: return is_compatible_type_k(MapPair(S, T), space);
    case PredicateKind::CompatibleR: return is_compatible_type_r(MapPair(S, T), space);
    case PredicateKind::ChauhanCompatible: return is_pointwise_compatible_chauhan(MapPair(S, T), space);
    case PredicateKind::GeraghtyPair: return is_geraghty_pair(S, T, space).holds;
    case PredicateKind::Commute:
      for (std::size_t x = 0; x < n; ++x)
        if (S[T[x]] != T[S[x]]) return false;
      return true;
    case PredicateKind::CommonFixedPoint: return common() >= 1;
    case PredicateKind::UniqueCommonFixedPoint: return common() == 1;
    case PredicateKind::Shukla31:
    case PredicateKind::Shukla32: {
      const Rational alpha = alpha_of(p, schema, c.constants);
      if (!(alpha > 0 && alpha < Rational(1, 2))) return false;
      const bool first = p.kind == PredicateKind::Shukla31;
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
          // shukla31: d(Sx,Ty) <= a d(x,Sx) + d(y,Ty); shukla32: d(Sx,Ty) <= a d(x,Ty) + d(y,Sx).
          const auto& b = first ? space.d(x, S[x]) : space.d(x, T[y]);
          const auto& e = first ? space.d(y, T[y]) : space.d(y, S[x]);
          if (!linear_bound_holds(space.d(S[x], T[y]), alpha, b, e, space.tau())) return false;
        }
      return true;
    }
    case PredicateKind::RangeSubset: {
      std::vector<bool> in_t(n, false);
      for (std::size_t x = 0; x < n; ++x) in_t[T[x]] = true;
      for (std::size_t x = 0; x < n; ++x)
        if (!in_t[S[x]]) return false;
      return true;
    }
    default: break;
  }
  throw ContractError("predicate \"" + p.name + "\" not evaluable");
}

inline bool evaluate(const PredicateSpec& p, const AssertionSchema& schema, const Candidate& c) {
  return evaluate_raw(p, schema, c) != p.negate;
}

// One (image, metric, constants) cell of the search space; its maps follow in
// MapSpace order (pairs: S index major).
struct Block {
  std::string image_id;
  std::shared_ptr<const MetricSpace> space;
  std::shared_ptr<const MapSpace> maps;
  std::vector<Rational> constants;
  std::uint64_t offset = 0;
  std::uint64_t count = 0;
};

}  // namespace detail

struct FalsifyWitness {
  std::uint64_t index = 0;
  std::string image;
  MetricSpec metric;
  std::vector<std::pair<std::string, Rational>> constants;
  SelfMap S;
  std::optional<SelfMap> T;
};

struct FalsifyResult {
  std::uint64_t candidates = 0;  // size of the search space
  std::uint64_t checked = 0;     // candidates examined in scan order up to the witness
  std::optional<FalsifyWitness> witness;
  bool exhausted() const { return !witness; }
};

struct FalsifyOptions {
  std::uint64_t budget = default_budget();
  unsigned parallelism = 1;
  double tau = kDefaultTau;
};

inline FalsifyResult falsify(const AssertionSchema& schema, const FalsifyOptions& opt = {}) {
  std::vector<const CatalogEntry*> images;
  for (const auto& id : schema.images) images.push_back(find_catalog_entry(id));
  std::stable_sort(images.begin(), images.end(),
                   [](const CatalogEntry* a, const CatalogEntry* b) { return a->image->size() < b->image->size(); });

  // Cartesian product of the constant grids, first grid most significant.
  std::vector<std::vector<Rational>> assignments = {{}};
  for (const auto& [name, grid] : schema.constants) {
    std::vector<std::vector<Rational>> next;
    for (const auto& a : assignments)
      for (const auto& v : grid) {
        next.push_back(a);
        next.back().push_back(v);
      }
    assignments = std::move(next);
  }

  std::vector<detail::Block> blocks;
  std::uint64_t total = 0;
  for (const auto* entry : images) {
    const auto applicable = applicable_metrics(*entry->image);
    std::vector<MetricSpec> metrics;
    for (const auto& m : schema.metrics.empty() ? applicable : schema.metrics)
      if (std::find(applicable.begin(), applicable.end(), m) != applicable.end()) metrics.push_back(m);
    auto maps = std::make_shared<const MapSpace>(entry->image, opt.budget);
    const std::uint64_t per = schema.arity == 2 ? maps->size() * maps->size() : maps->size();
    if (schema.arity == 2 && maps->size() > opt.budget / maps->size())
      throw BudgetExceeded("map pairs on " + entry->id + " exceed the budget of " + std::to_string(opt.budget));
    for (const auto& m : metrics) {
      auto space = std::make_shared<const MetricSpace>(entry->image, m, opt.tau);
      for (const auto& a : assignments) {
        if (total + per > opt.budget)
          throw BudgetExceeded("search space exceeds the budget of " + std::to_string(opt.budget) + " candidates");
        blocks.push_back({entry->id, space, maps, a, total, per});
        total += per;
      }
    }
  }

  const unsigned workers = std::max(1u, opt.parallelism);
  std::atomic<std::uint64_t> best{total};
  parallel_ranges(total, workers, [&](std::uint64_t begin, std::uint64_t end, unsigned) {
    auto bi = std::upper_bound(blocks.begin(), blocks.end(), begin,
                               [](std::uint64_t v, const detail::Block& b) { return v < b.offset; }) -
              1;
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      // A lower witness elsewhere makes the rest of this range irrelevant.
      if ((idx & 1023) == 0 && idx > best.load(std::memory_order_relaxed)) return;
      while (idx >= bi->offset + bi->count) ++bi;
      const auto local = idx - bi->offset;
      const auto m = bi->maps->size();
      const SelfMap S = bi->maps->at(schema.arity == 2 ? local / m : local);
      std::optional<SelfMap> T;
      if (schema.arity == 2) T = bi->maps->at(local % m);
      const detail::Candidate c{*bi->space, S, T ? &*T : nullptr, bi->constants};
      bool hyp = true;
      for (const auto& h : schema.hypotheses)
        if (!detail::evaluate(h, schema, c)) {
          hyp = false;
          break;
        }
      if (!hyp || detail::evaluate(schema.conclusion, schema, c)) continue;
      std::uint64_t cur = best.load();
      while (idx < cur && !best.compare_exchange_weak(cur, idx)) {
      }
      return;
    }
  });

  FalsifyResult r;
  r.candidates = total;
  const std::uint64_t w = best.load();
  if (w == total) {
    r.checked = total;
    return r;
  }
  r.checked = w + 1;
  const auto bi = std::upper_bound(blocks.begin(), blocks.end(), w,
                                   [](std::uint64_t v, const detail::Block& b) { return v < b.offset; }) -
                  1;
  const auto local = w - bi->offset;
  const auto m = bi->maps->size();
  FalsifyWitness wit{w, bi->image_id, bi->space->metric(), {}, bi->maps->at(schema.arity == 2 ? local / m : local),
                     std::nullopt};
  if (schema.arity == 2) wit.T = bi->maps->at(local % m);
  for (std::size_t i = 0; i < schema.constants.size(); ++i)
    wit.constants.emplace_back(schema.constants[i].first, bi->constants[i]);
  r.witness = std::move(wit);
  return r;
}

inline json falsify_result_to_json(const FalsifyResult& r) {
  json j{{"candidates", r.candidates}, {"checked", r.checked}, {"exhausted", r.exhausted()}};
  if (r.witness) {
    const auto& w = *r.witness;
    json consts = json::object();
    for (const auto& [k, v] : w.constants) consts[k] = io::rational_to_json(v);
    j["witness"] = {{"index", w.index},
                    {"image", w.image},
                    {"metric", to_string(w.metric)},
                    {"constants", consts},
                    {"S", io::map_to_json(w.S)["map"]}};
    if (w.T) j["witness"]["T"] = io::map_to_json(*w.T)["map"];
  }
  return j;
}

}  // namespace digitop
