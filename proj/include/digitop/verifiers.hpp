#pragma once

// Machine checks behind the claims registry. Each verifier reconstructs the
// relevant instance (or sweeps the catalog) and returns CONFIRMED, FAILED or
// SKIPPED together with a JSON witness payload.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "digitop/catalog.hpp"
#include "digitop/classifiers.hpp"
#include "digitop/compatibility.hpp"
#include "digitop/io.hpp"
#include "digitop/maps.hpp"
#include "digitop/metrics.hpp"
#include "digitop/parallel.hpp"

namespace digitop {

using json = nlohmann::json;

enum class Verdict { Confirmed, Failed, Skipped };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Confirmed: return "CONFIRMED";
    case Verdict::Failed: return "FAILED";
    case Verdict::Skipped: return "SKIPPED";
  }
  return "?";
}

inline std::optional<Verdict> verdict_from_string(std::string_view s) {
  if (s == "CONFIRMED") return Verdict::Confirmed;
  if (s == "FAILED") return Verdict::Failed;
  if (s == "SKIPPED") return Verdict::Skipped;
  return std::nullopt;
}

struct VerifierResult {
  Verdict verdict = Verdict::Failed;
  json witness = json::object();
  std::string detail;
};

struct AuditContext {
  std::uint64_t budget = default_budget();
  double tau = kDefaultTau;
  unsigned parallelism = 1;
};

namespace detail {

inline Verdict confirmed_if(bool ok) { return ok ? Verdict::Confirmed : Verdict::Failed; }

inline json pair_json(const DigitalImage& image, std::size_t i, std::size_t j) {
  return json::array({io::point_to_json(image.point(i)), io::point_to_json(image.point(j))});
}

inline json points_json(const DigitalImage& image, const std::vector<std::size_t>& idx) {
  json out = json::array();
  for (auto i : idx) out.push_back(io::point_to_json(image.point(i)));
  return out;
}

inline json table_json(const SelfMap& f) {
  json out = json::array();
  for (std::size_t i = 0; i < f.size(); ++i) out.push_back(io::point_to_json(f.image().point(f[i])));
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Single-instance refutations

// Diamond D with c_2 and l_2, S = id, T(x) = -x.
inline SelfMap diamond_negation(const ImagePtr& diamond) {
  return SelfMap::from_function(diamond, [](const Point& p) { return Point{-p[0], -p[1]}; });
}

// Hypothesis d(Sx,Ty) <= alpha d(x,Sx) + d(y,Ty) over all 16 ordered pairs, and
// Fix(S) and Fix(T) disjoint. T defaults to x -> -x.
inline VerifierResult verify_shukla31_refutation(const Rational& alpha = Rational(49, 100),
                                                 std::optional<SelfMap> t_override = std::nullopt,
                                                 double tau = kDefaultTau) {
  const auto diamond = diamond_image();
  const MetricSpace space(diamond, MetricSpec::l2(), tau);
  const SelfMap S = SelfMap::identity(diamond);
  const SelfMap T = t_override ? *t_override : diamond_negation(diamond);
  require_same_image(S, T);

  VerifierResult r;
  json rows = json::array();
  bool hypothesis = alpha > 0 && alpha < Rational(1, 2);
  for (std::size_t x = 0; x < space.size(); ++x)
    for (std::size_t y = 0; y < space.size(); ++y) {
      const auto& lhs = space.d(S[x], T[y]);
      const auto& dxs = space.d(x, S[x]);
      const auto& dyt = space.d(y, T[y]);
      json rhs;
      bool holds;
      const auto e_lhs = lhs.exact_value();
      const auto e_xs = dxs.exact_value();
      const auto e_yt = dyt.exact_value();
      if (e_xs && e_yt) {
        const Rational exact_rhs = alpha * *e_xs + *e_yt;
        rhs = io::rational_to_json(exact_rhs);
        // lhs^2 <= rhs^2 with rhs >= 0 decides lhs <= rhs exactly.
        holds = e_lhs ? *e_lhs <= exact_rhs : Rational(lhs.raw()) <= exact_rhs * exact_rhs;
      } else {
        const double v = to_double(alpha) * dxs.value() + dyt.value();
        rhs = json{{"approx", v}};
        holds = lhs.value() <= v + space.tau();
      }
      hypothesis = hypothesis && holds;
      rows.push_back({{"x", io::point_to_json(diamond->point(x))},
                      {"y", io::point_to_json(diamond->point(y))},
                      {"lhs", io::distance_to_json(lhs)},
                      {"rhs", rhs},
                      {"holds", holds}});
    }
  const auto fix_s = fixed_points(S);
  const auto fix_t = fixed_points(T);
  std::vector<std::size_t> common;
  for (auto i : fix_s.indices)
    if (T[i] == i) common.push_back(i);

  r.verdict = detail::confirmed_if(hypothesis && common.empty());
  r.witness = {{"alpha", io::rational_to_json(alpha)},
               {"rows", rows},
               {"hypothesis_holds", hypothesis},
               {"fix_S", detail::points_json(*diamond, fix_s.indices)},
               {"fix_T", detail::points_json(*diamond, fix_t.indices)},
               {"common_fixed_points", detail::points_json(*diamond, common)}};
  r.detail = hypothesis ? (common.empty() ? "hypothesis holds on all 16 pairs; no common fixed point"
                                          : "hypothesis holds but S and T share a fixed point")
                        : "hypothesis fails";
  return r;
}

// {0,1} in Z with l_1, S = id: psi(d(Sx,Sy)) >= alpha d(x,y) must fail.
inline VerifierResult verify_jk_remark32_refutation(const ClosedFormFn& psi = ClosedFormFn::linear(Rational(1, 2)),
                                                    const Rational& alpha_value = Rational(1)) {
  const auto image = path_image(2);
  const MetricSpace space(image, MetricSpec::l1());
  const SelfMap S = SelfMap::identity(image);
  const auto alpha = WeightFunction::constant(image, alpha_value);
  const bool expansive = is_expansive(S, space).holds;
  const bool psi_ok = psi_class_check(psi, {0, Rational(1, 2), 1, 2});
  const auto ap = is_alpha_psi_expansive(S, alpha, psi, space);

  VerifierResult r;
  r.verdict = detail::confirmed_if(expansive && psi_ok && !ap.holds);
  r.witness = {{"psi", psi.name()},
               {"alpha", io::rational_to_json(alpha_value)},
               {"S_expansive", expansive},
               {"psi_in_Psi", psi_ok},
               {"alpha_psi_expansive", ap.holds}};
  if (ap.failing_pair) r.witness["failing_pair"] = detail::pair_json(*image, ap.failing_pair->first, ap.failing_pair->second);
  r.detail = ap.holds ? "inequality holds; not a refutation instance" : "expansive map that is not alpha-psi expansive";
  return r;
}

// S(x) = a x + b on Z with alpha = 1 and psi(t) = t: all hypotheses hold, yet
// S must have no fixed point for the instance to refute.
inline VerifierResult verify_jk34_35_refutation(const AffineIntMap& m = {1, 1}) {
  const bool bijective = m.bijective();
  const bool expansive = is_expansive(m);
  // d(Sx,Sy) = |a| d(x,y) and psi = id, alpha = 1: psi(d(Sx,Sy)) >= d(x,y) iff |a| >= 1.
  const bool alpha_psi = expansive && psi_class_check(ClosedFormFn::linear(1), {0, 1, 2});
  const bool inverse_admissible = bijective;  // alpha = 1 at every pair, so alpha(S^-1 x, S^-1 y) = 1
  const bool base_point = bijective;          // alpha(x0, S^-1 x0) = 1 >= 1
  const bool continuous = m.c1_continuous();
  const auto fix = affine_fixed_points(m);

  VerifierResult r;
  const bool hypotheses = bijective && expansive && alpha_psi && inverse_admissible && base_point;
  const bool no_fixed = fix.kind == AffineFixedPoints::Kind::Empty;
  // One variant also assumes c_1-continuity; the other replaces it by the
  // sequence condition, which alpha = 1 satisfies.
  r.verdict = detail::confirmed_if(hypotheses && continuous && no_fixed);
  std::string fixed;
  switch (fix.kind) {
    case AffineFixedPoints::Kind::AllOfZ: fixed = "all-of-Z"; break;
    case AffineFixedPoints::Kind::Empty: fixed = "empty"; break;
    case AffineFixedPoints::Kind::Single: fixed = std::to_string(fix.point); break;
  }
  r.witness = {{"a", m.a},
               {"b", m.b},
               {"bijective", bijective},
               {"expansive", expansive},
               {"alpha_psi_expansive", alpha_psi},
               {"inverse_alpha_admissible", inverse_admissible},
               {"base_point_condition", base_point},
               {"c1_continuous", continuous},
               {"sequence_condition", true},
               {"fixed_points", fixed}};
  r.detail = no_fixed ? "hypotheses hold, no fixed point" : "map has fixed points; not a counterexample";
  return r;
}

// S(1) = s_at_one, S(n) = 1 otherwise, on the window {0,...,N} with c_1, l_1.
inline VerifierResult verify_nonconverge_example(std::int64_t N, std::int64_t s_at_one = 0) {
  if (N < 3) throw ContractError("nonconverge window needs N >= 3");
  const auto image = path_image(N + 1);
  const MetricSpace space(image, MetricSpec::l1());
  const auto S = SelfMap::from_function(image, [&](const Point& p) { return Point{p[0] == 1 ? s_at_one : 1}; });
  const bool continuous = is_continuous_adjacency(*image, S);
  const auto fix = fixed_points(S);
  bool even_tail = true, odd_tail = true;
  json tail = json::array();
  for (std::int64_t k = 2; k <= N; ++k) {
    const auto v = S(Point{k})[0];
    if (k % 2 == 0) even_tail = even_tail && v == 1;
    else odd_tail = odd_tail && v == 1;
    tail.push_back({{"n", k}, {"S", v}});
  }
  const bool limit_not_fixed = S(Point{1})[0] != 1;

  VerifierResult r;
  r.verdict = detail::confirmed_if(continuous && fix.empty() && even_tail && odd_tail && limit_not_fixed);
  r.witness = {{"window", N},
               {"c1_continuous", continuous},
               {"fixed_points", detail::points_json(*image, fix.indices)},
               {"S_even_tail_is_1", even_tail},
               {"T_odd_tail_is_1", odd_tail},
               {"S_of_limit", S(Point{1})[0]},
               {"tail", tail}};
  r.detail = r.verdict == Verdict::Confirmed ? "continuous, fixed-point free, subsequence limit 1 with S(1) != 1"
                                             : "instance does not exhibit the failure";
  return r;
}

// ---------------------------------------------------------------------------
// Exhaustive sweeps on one space

// Every Geraghty self-map is constant, on spaces whose carrier is c_1-connected.
inline VerifierResult verify_geraghty_triviality(const MetricSpace& space, std::uint64_t budget = default_budget()) {
  VerifierResult r;
  if (!carrier_c1_connected(space.image())) {
    r.verdict = Verdict::Skipped;
    r.detail = "precondition: carrier is not c_1-connected";
    return r;
  }
  const MapSpace maps(space.image_ptr(), budget);
  std::uint64_t geraghty = 0;
  std::optional<SelfMap> counterexample;
  maps.for_each([&](const SelfMap& f) {
    if (!is_geraghty(f, space).holds) return;
    ++geraghty;
    if (!is_constant(f) && !counterexample) counterexample = f;
  });
  r.verdict = detail::confirmed_if(!counterexample);
  r.witness = {{"maps_checked", maps.size()}, {"geraghty_maps", geraghty}};
  if (counterexample) r.witness["counterexample"] = detail::table_json(*counterexample);
  return r;
}

namespace detail {

// Precomputed per-map facts for pair sweeps.
struct MapFacts {
  std::vector<SelfMap> maps;
  std::vector<bool> c1_continuous;
  std::vector<bool> constant;
};

inline MapFacts map_facts(const MetricSpace& space, std::uint64_t budget) {
  const MapSpace ms(space.image_ptr(), budget);
  MapFacts facts;
  facts.maps = ms.all();
  const auto c1 = space.image().with_adjacency(AdjacencySpec{1});
  for (const auto& f : facts.maps) {
    facts.c1_continuous.push_back(is_continuous_adjacency(c1, f));
    facts.constant.push_back(is_constant(f));
  }
  return facts;
}

inline void require_pair_budget(std::uint64_t maps, std::uint64_t budget) {
  if (maps != 0 && maps > budget / maps)
    throw BudgetExceeded(std::to_string(maps) + "^2 map pairs exceed the enumeration budget of " +
                         std::to_string(budget));
}

}  // namespace detail

// For a Geraghty pair (T, S) with T c_1-continuous, S is constant.
inline VerifierResult verify_gconst(const MetricSpace& space, std::uint64_t budget = default_budget(),
                                    unsigned parallelism = 1) {
  VerifierResult r;
  if (!carrier_c1_connected(space.image())) {
    r.verdict = Verdict::Skipped;
    r.detail = "precondition: (X, c_1) is not connected";
    return r;
  }
  const auto facts = detail::map_facts(space, budget);
  const std::uint64_t m = facts.maps.size();
  detail::require_pair_budget(m, budget);
  std::vector<std::uint64_t> qualifying(std::max(1u, parallelism), 0);
  std::vector<std::optional<std::uint64_t>> bad(std::max(1u, parallelism));
  parallel_ranges(m, parallelism, [&](std::uint64_t begin, std::uint64_t end, unsigned w) {
    for (std::uint64_t ti = begin; ti < end; ++ti) {
      if (!facts.c1_continuous[ti]) continue;
      for (std::uint64_t si = 0; si < m; ++si) {
        if (!is_geraghty_pair(facts.maps[si], facts.maps[ti], space).holds) continue;
        ++qualifying[w];
        if (!facts.constant[si] && !bad[w]) bad[w] = ti * m + si;
      }
    }
  });
  std::uint64_t total = 0;
  std::optional<std::uint64_t> first;
  for (std::size_t w = 0; w < bad.size(); ++w) {
    total += qualifying[w];
    if (bad[w] && !first) first = bad[w];
  }
  r.verdict = detail::confirmed_if(!first);
  r.witness = {{"pairs_checked", m * m}, {"qualifying_pairs", total}};
  if (first) {
    r.witness["counterexample"] = {{"T", detail::table_json(facts.maps[*first / m])},
                                   {"S", detail::table_json(facts.maps[*first % m])}};
  }
  return r;
}

// Geraghty pair, T c_1-continuous, S T = T S: S is constant at some x0 with T x0 = x0.
inline VerifierResult verify_krishna_special_case(const MetricSpace& space, std::uint64_t budget = default_budget()) {
  VerifierResult r;
  if (!carrier_c1_connected(space.image())) {
    r.verdict = Verdict::Skipped;
    r.detail = "precondition: (X, c_1) is not connected";
    return r;
  }
  const auto facts = detail::map_facts(space, budget);
  const std::uint64_t m = facts.maps.size();
  detail::require_pair_budget(m, budget);
  std::uint64_t qualifying = 0;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> bad;
  for (std::uint64_t ti = 0; ti < m && !bad; ++ti) {
    if (!facts.c1_continuous[ti]) continue;
    const auto& T = facts.maps[ti];
    for (std::uint64_t si = 0; si < m; ++si) {
      const auto& S = facts.maps[si];
      if (compose(S, T) != compose(T, S)) continue;
      if (!is_geraghty_pair(S, T, space).holds) continue;
      ++qualifying;
      const std::size_t x0 = S[0];
      if (!facts.constant[si] || T[x0] != x0) {
        bad = {ti, si};
        break;
      }
    }
  }
  r.verdict = detail::confirmed_if(!bad);
  r.witness = {{"pairs_checked", m * m}, {"commuting_geraghty_pairs", qualifying}};
  if (bad) r.witness["counterexample"] = {{"T", detail::table_json(facts.maps[bad->first])},
                                          {"S", detail::table_json(facts.maps[bad->second])}};
  return r;
}

// wus(f) <=> geraghty(f) <=> k*(f) < 1 for every self-map.
inline VerifierResult verify_wus_collapse(const MetricSpace& space, std::uint64_t budget = default_budget()) {
  const MapSpace maps(space.image_ptr(), budget);
  std::uint64_t wus = 0;
  std::optional<Modulus> max_k;
  std::optional<SelfMap> disagreement;
  maps.for_each([&](const SelfMap& f) {
    const bool w = is_wus_contraction(f, space).holds;
    const bool g = is_geraghty(f, space).holds;
    const auto c = contraction_modulus(f, space);
    if (w) {
      ++wus;
      if (!max_k || *max_k < c.modulus) max_k = c.modulus;
    }
    if ((w != g || g != c.is_contraction) && !disagreement) disagreement = f;
  });
  VerifierResult r;
  r.verdict = detail::confirmed_if(!disagreement);
  r.witness = {{"maps_checked", maps.size()}, {"wus_maps", wus}};
  if (max_k) r.witness["max_wus_modulus"] = io::modulus_to_json(*max_k);
  if (disagreement) r.witness["disagreement"] = detail::table_json(*disagreement);
  return r;
}

// Every Geraghty map: iteration from every start reaches the same fixed point
// within (number of distinct positive distances + 1) steps, and it is unique.
inline VerifierResult verify_kandt(const MetricSpace& space, std::uint64_t budget = default_budget()) {
  const MapSpace maps(space.image_ptr(), budget);
  const std::size_t bound = realized_distances(space).size() + 1;
  std::uint64_t geraghty = 0;
  std::size_t max_steps = 0;
  std::optional<SelfMap> bad;
  std::string why;
  maps.for_each([&](const SelfMap& f) {
    if (bad || !is_geraghty(f, space).holds) return;
    ++geraghty;
    std::optional<std::size_t> target;
    for (std::size_t s = 0; s < f.size(); ++s) {
      const auto o = orbit_from(f, s, bound);
      if (!o.reached_fixed_point || o.steps_to_fixed > bound) {
        bad = f;
        why = "orbit did not reach a fixed point within the bound";
        return;
      }
      max_steps = std::max(max_steps, o.steps_to_fixed);
      if (target && *target != *o.fixed_point) {
        bad = f;
        why = "orbits reach different fixed points";
        return;
      }
      target = o.fixed_point;
    }
    const auto fix = fixed_points(f);
    if (fix.size() != 1) {
      bad = f;
      why = "fixed point is not unique";
      return;
    }
  });
  VerifierResult r;
  r.verdict = detail::confirmed_if(!bad);
  r.witness = {{"maps_checked", maps.size()},
               {"geraghty_maps", geraghty},
               {"step_bound", bound},
               {"max_steps_observed", max_steps}};
  if (bad) {
    r.witness["counterexample"] = detail::table_json(*bad);
    r.detail = why;
  }
  return r;
}

// Adjacency criterion agrees with the subset definition for every self-map.
inline VerifierResult verify_continuity_criterion(const ImagePtr& image, std::uint64_t budget = default_budget()) {
  const MapSpace maps(image, budget);
  std::uint64_t continuous = 0;
  std::optional<SelfMap> bad;
  maps.for_each([&](const SelfMap& f) {
    const bool a = is_continuous_adjacency(*image, f);
    const bool s = is_continuous_subsets(*image, f);
    continuous += a ? 1 : 0;
    if (a != s && !bad) bad = f;
  });
  VerifierResult r;
  r.verdict = detail::confirmed_if(!bad);
  r.witness = {{"maps_checked", maps.size()}, {"continuous_maps", continuous}};
  if (bad) r.witness["disagreement"] = detail::table_json(*bad);
  return r;
}

// is_cauchy <=> is_eventually_constant over all sequences with preamble length
// <= 1 and cycle length <= 3.
inline VerifierResult verify_eventually_constant(const MetricSpace& space) {
  const auto& pts = space.image().points();
  const std::size_t n = pts.size();
  std::uint64_t checked = 0;
  std::optional<json> bad;
  std::vector<std::vector<Point>> prefixes = {{}};
  for (const auto& p : pts) prefixes.push_back({p});
  for (const auto& pre : prefixes)
    for (std::size_t len = 1; len <= 3 && !bad; ++len) {
      std::uint64_t count = 1;
      for (std::size_t k = 0; k < len; ++k) count *= n;
      for (std::uint64_t code = 0; code < count; ++code) {
        std::vector<Point> cycle;
        for (std::uint64_t c = code, k = 0; k < len; ++k, c /= n) cycle.push_back(pts[c % n]);
        const EventuallyPeriodicSequence s(pre, cycle);
        ++checked;
        if (is_cauchy(space, s) != is_eventually_constant(s)) {
          json cyc = json::array();
          for (const auto& p : cycle) cyc.push_back(io::point_to_json(p));
          bad = json{{"cycle", cyc}};
          break;
        }
      }
    }
  VerifierResult r;
  r.verdict = detail::confirmed_if(!bad);
  r.witness = {{"sequences_checked", checked}};
  if (bad) r.witness["disagreement"] = *bad;
  return r;
}

// ---------------------------------------------------------------------------
// Compatibility sweep over all pairs of self-maps

struct CompatSweep {
  std::uint64_t pairs = 0;
  std::uint64_t compatible = 0, type_k = 0, type_r = 0;
  std::uint64_t equivalence_violations = 0, oracle_mismatches = 0;
  std::uint64_t compat_not_k = 0, k_not_compat = 0, r_not_compat = 0;
  std::uint64_t jainr32_failures = 0, jainr33_failures = 0;
  std::optional<std::uint64_t> first_equivalence_violation, first_oracle_mismatch;
  std::optional<std::uint64_t> first_jainr32_failure, first_jainr33_failure;

  void merge(const CompatSweep& o) {
    pairs += o.pairs;
    compatible += o.compatible;
    type_k += o.type_k;
    type_r += o.type_r;
    equivalence_violations += o.equivalence_violations;
    oracle_mismatches += o.oracle_mismatches;
    compat_not_k += o.compat_not_k;
    k_not_compat += o.k_not_compat;
    r_not_compat += o.r_not_compat;
    jainr32_failures += o.jainr32_failures;
    jainr33_failures += o.jainr33_failures;
    auto first = [](auto& mine, const auto& theirs) {
      if (!mine) mine = theirs;
    };
    first(first_equivalence_violation, o.first_equivalence_violation);
    first(first_oracle_mismatch, o.first_oracle_mismatch);
    first(first_jainr32_failure, o.first_jainr32_failure);
    first(first_jainr33_failure, o.first_jainr33_failure);
  }
};

inline CompatSweep sweep_compatibility(const MetricSpace& space, std::uint64_t budget = default_budget(),
                                       unsigned parallelism = 1, bool with_oracle = true) {
  const auto maps = MapSpace(space.image_ptr(), budget).all();
  const std::uint64_t m = maps.size();
  detail::require_pair_budget(m, budget);
  const unsigned workers = std::max(1u, parallelism);
  std::vector<CompatSweep> partial(workers);
  parallel_ranges(m, workers, [&](std::uint64_t begin, std::uint64_t end, unsigned w) {
    auto& acc = partial[w];
    for (std::uint64_t fi = begin; fi < end; ++fi)
      for (std::uint64_t gi = 0; gi < m; ++gi) {
        const MapPair p(maps[fi], maps[gi]);
        const std::uint64_t id = fi * m + gi;
        ++acc.pairs;
        const bool c = is_compatible(p, space);
        const bool k = is_compatible_type_k(p, space);
        const bool r = is_compatible_type_r(p, space);
        acc.compatible += c;
        acc.type_k += k;
        acc.type_r += r;
        if (!(c == k && k == r)) {
          ++acc.equivalence_violations;
          if (!acc.first_equivalence_violation) acc.first_equivalence_violation = id;
        }
        if (c && !k) ++acc.compat_not_k;
        if (k && !c) ++acc.k_not_compat;
        if (r && !c) ++acc.r_not_compat;
        if (with_oracle) {
          const bool oc = sequence_oracle_compatibility(p, space, CompatibilityKind::Plain);
          const bool ok = sequence_oracle_compatibility(p, space, CompatibilityKind::K);
          const bool orr = sequence_oracle_compatibility(p, space, CompatibilityKind::R);
          if (oc != c || ok != k || orr != r) {
            ++acc.oracle_mismatches;
            if (!acc.first_oracle_mismatch) acc.first_oracle_mismatch = id;
          }
        }
        if (r) {
          if (!check_jainr32(p, space).ok()) {
            ++acc.jainr32_failures;
            if (!acc.first_jainr32_failure) acc.first_jainr32_failure = id;
          }
          if (!check_jainr33(p, space).ok()) {
            ++acc.jainr33_failures;
            if (!acc.first_jainr33_failure) acc.first_jainr33_failure = id;
          }
        }
      }
  });
  CompatSweep total;
  for (const auto& p : partial) total.merge(p);
  return total;
}

namespace detail {
inline json pair_from_id(const MetricSpace& space, std::uint64_t id, std::uint64_t budget) {
  const MapSpace ms(space.image_ptr(), budget);
  return {{"f", table_json(ms.at(id / ms.size()))}, {"g", table_json(ms.at(id % ms.size()))}};
}
}  // namespace detail

enum class CompatClaim { Equivalence, TypeK, TypeR, JainR32, JainR33 };

// Verdict for one compatibility claim from a finished sweep.
inline VerifierResult compat_verdict(const CompatSweep& s, CompatClaim claim, const MetricSpace& space,
                                     std::uint64_t budget = default_budget()) {
  VerifierResult r;
  r.witness = {{"pairs", s.pairs}, {"compatible", s.compatible}, {"type_k", s.type_k}, {"type_r", s.type_r}};
  std::optional<std::uint64_t> bad;
  switch (claim) {
    case CompatClaim::Equivalence:
      r.witness["equivalence_violations"] = s.equivalence_violations;
      r.witness["oracle_mismatches"] = s.oracle_mismatches;
      bad = s.first_equivalence_violation ? s.first_equivalence_violation : s.first_oracle_mismatch;
      break;
    case CompatClaim::TypeK:
      r.witness["compatible_not_k"] = s.compat_not_k;
      r.witness["k_not_compatible"] = s.k_not_compat;
      if (s.compat_not_k || s.k_not_compat) bad = s.first_equivalence_violation;
      break;
    case CompatClaim::TypeR:
      r.witness["r_not_compatible"] = s.r_not_compat;
      if (s.r_not_compat) bad = s.first_equivalence_violation;
      break;
    case CompatClaim::JainR32:
      r.witness["failures"] = s.jainr32_failures;
      bad = s.first_jainr32_failure;
      break;
    case CompatClaim::JainR33:
      r.witness["failures"] = s.jainr33_failures;
      bad = s.first_jainr33_failure;
      break;
  }
  r.verdict = detail::confirmed_if(!bad);
  if (bad) r.witness["counterexample"] = detail::pair_from_id(space, *bad, budget);
  return r;
}

inline VerifierResult verify_compatibility(const MetricSpace& space, CompatClaim claim,
                                           std::uint64_t budget = default_budget(), unsigned parallelism = 1) {
  const auto s = sweep_compatibility(space, budget, parallelism, claim == CompatClaim::Equivalence);
  return compat_verdict(s, claim, space, budget);
}

// WUS maps on a c_1-connected carrier are contractions, hence constant.
inline VerifierResult verify_kalj32_triviality(const MetricSpace& space, std::uint64_t budget = default_budget()) {
  VerifierResult r;
  if (!carrier_c1_connected(space.image())) {
    r.verdict = Verdict::Skipped;
    r.detail = "precondition: carrier is not c_1-connected";
    return r;
  }
  const MapSpace maps(space.image_ptr(), budget);
  std::uint64_t wus = 0;
  std::optional<SelfMap> bad;
  maps.for_each([&](const SelfMap& f) {
    if (!is_wus_contraction(f, space).holds) return;
    ++wus;
    if (!is_constant(f) && !bad) bad = f;
  });
  r.verdict = detail::confirmed_if(!bad);
  r.witness = {{"maps_checked", maps.size()}, {"wus_maps", wus}};
  if (bad) r.witness["counterexample"] = detail::table_json(*bad);
  return r;
}

// ---------------------------------------------------------------------------
// psi harness instances

inline ClosedFormFn unit_step() { return ClosedFormFn::step({{Rational(1), Rational(1)}}); }

inline VerifierResult verify_psi_trivialities(std::size_t N = 1000) {
  using SO = PsiSeriesVerdict::Outcome;
  using IO = PsiIterateVerdict::Outcome;
  json instances = json::array();
  bool ok = true;
  auto series = [&](const std::string& id, const ClosedFormFn& psi, const Rational& t0, SO expected,
                    const Rational& min_sum) {
    const auto v = psi_summable_forces_zero_witness(psi, t0, N);
    const bool pass = v.outcome == expected && v.partial_sum >= min_sum;
    ok = ok && pass;
    instances.push_back({{"id", id},
                         {"check", "series"},
                         {"psi", psi.name()},
                         {"t0", io::rational_to_json(t0)},
                         {"N", N},
                         {"q", io::rational_to_json(v.q)},
                         {"partial_sum_at_least", io::rational_to_json(Rational(N) * v.q)},
                         {"partial_sum_is_integer", boost::multiprecision::denominator(v.partial_sum) == 1},
                         {"min_iterate", io::rational_to_json(v.min_iterate)},
                         {"step_holds", v.step_holds},
                         {"pass", pass}});
  };
  auto iterates = [&](const std::string& id, const ClosedFormFn& psi, const Rational& t0, IO expected,
                      const Rational& bound) {
    const auto v = psi_vanishing_iterates_check(psi, t0, N);
    const bool pass = v.outcome == expected && v.lower_bound == bound;
    ok = ok && pass;
    instances.push_back({{"id", id},
                         {"check", "iterates"},
                         {"psi", psi.name()},
                         {"t0", io::rational_to_json(t0)},
                         {"N", N},
                         {"lower_bound", io::rational_to_json(v.lower_bound)},
                         {"step_holds", v.step_holds},
                         {"pass", pass}});
  };
  series("linear1-series", ClosedFormFn::linear(1), 1, SO::Certified, Rational(N));
  series("zero-series", ClosedFormFn::constant(0), 1, SO::NoObstruction, 0);
  series("step-series", unit_step(), 2, SO::Certified, Rational(N));
  // The chain from 1 under t/2 drops below psi(1): the induction step psi(q) >= q fails here.
  series("half-series", ClosedFormFn::linear(Rational(1, 2)), 1, SO::BoundFails, 0);
  iterates("linear1-iterates", ClosedFormFn::linear(1), 1, IO::BoundedBelow, 1);
  iterates("linear1-iterates-t2", ClosedFormFn::linear(1), 2, IO::BoundedBelow, 2);
  iterates("zero-iterates", ClosedFormFn::constant(0), 1, IO::Vanishing, 0);
  iterates("step-iterates", unit_step(), 2, IO::BoundedBelow, 1);

  // With psi = 0 the contraction hypothesis d(Tx,Ty) <= psi(d(x,y)) leaves only constants.
  const auto image = path_image(3);
  const MetricSpace space(image, MetricSpec::l1());
  std::uint64_t dominated = 0;
  bool only_constants = true;
  MapSpace(image).for_each([&](const SelfMap& f) {
    bool holds = true;
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t j = 0; j < f.size(); ++j)
        holds = holds && space.d(f[i], f[j]).raw() == 0;
    if (holds) {
      ++dominated;
      only_constants = only_constants && is_constant(f);
    }
  });
  ok = ok && only_constants && dominated == image->size();

  VerifierResult r;
  r.verdict = detail::confirmed_if(ok);
  r.witness = {{"instances", instances}, {"zero_psi_maps", dominated}, {"zero_psi_maps_constant", only_constants}};
  return r;
}

// ---------------------------------------------------------------------------
// Catalog-wide aggregation

// Runs a per-space check across the catalog; CONFIRMED iff no run FAILED and at
// least one run CONFIRMED.
template <typename Check>
VerifierResult over_catalog(const AuditContext& ctx, Check&& check, bool metrics_matter = true) {
  json runs = json::array();
  bool any_confirmed = false, any_failed = false;
  for (const auto& entry : builtin_catalog()) {
    auto metrics = applicable_metrics(*entry.image);
    if (!metrics_matter) metrics.resize(1);
    for (const auto& metric : metrics) {
      const MetricSpace space(entry.image, metric, ctx.tau);
      auto res = check(space);
      any_confirmed = any_confirmed || res.verdict == Verdict::Confirmed;
      any_failed = any_failed || res.verdict == Verdict::Failed;
      json run = {{"image", entry.id}, {"verdict", to_string(res.verdict)}, {"witness", res.witness}};
      if (metrics_matter) run["metric"] = to_string(metric);
      if (!res.detail.empty()) run["detail"] = res.detail;
      runs.push_back(std::move(run));
    }
  }
  VerifierResult r;
  r.verdict = (!any_failed && any_confirmed) ? Verdict::Confirmed : Verdict::Failed;
  r.witness = {{"runs", runs}};
  return r;
}

}  // namespace digitop
