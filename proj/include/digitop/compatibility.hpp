#pragma once

// Compatibility of map pairs on finite (hence uniformly discrete) digital
// metric spaces.
//
// Every sequence with lim f x_n = lim g x_n = t is eventually valued in the
// class C_t = {x : f(x) = g(x) = t}, so each limit condition reduces to a
// pointwise condition on the coincidence set. Each reduction below is written
// out from its own definition; sequence_oracle_compatibility evaluates the
// definitions literally on eventually periodic sequences.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "digitop/maps.hpp"
#include "digitop/metrics.hpp"

namespace digitop {

struct MapPair {
  SelfMap f;
  SelfMap g;
  MapPair(SelfMap first, SelfMap second) : f(std::move(first)), g(std::move(second)) {
    require_same_image(f, g);
  }
};

struct CoincidenceSet {
  std::vector<std::size_t> points;                           // indices x with f(x) = g(x)
  std::map<std::size_t, std::vector<std::size_t>> classes;   // t -> C_t
  bool empty() const { return points.empty(); }
};

inline CoincidenceSet coincidence_points(const MapPair& p) {
  CoincidenceSet c;
  for (std::size_t x = 0; x < p.f.size(); ++x)
    if (p.f[x] == p.g[x]) {
      c.points.push_back(x);
      c.classes[p.f[x]].push_back(x);
    }
  return c;
}

// Pointwise condition d(PQx, QPx) <= d(Px, Qx) at every x.
inline bool is_pointwise_compatible_chauhan(const MapPair& p, const MetricSpace& space) {
  const auto& P = p.f;
  const auto& Q = p.g;
  for (std::size_t x = 0; x < P.size(); ++x)
    if (space.d(P[Q[x]], Q[P[x]]) > space.d(P[x], Q[x])) return false;
  return true;
}

// lim d(f g x_n, g f x_n) = 0: f and g commute on the coincidence set.
inline bool is_compatible(const MapPair& p, const MetricSpace& /*space*/) {
  const auto& f = p.f;
  const auto& g = p.g;
  for (std::size_t x = 0; x < f.size(); ++x)
    if (f[x] == g[x] && f[g[x]] != g[f[x]]) return false;
  return true;
}

// lim d(f f x_n, g t) = 0 and lim d(g g x_n, f t) = 0 with t = f(x) = g(x).
inline bool is_compatible_type_k(const MapPair& p, const MetricSpace& /*space*/) {
  const auto& f = p.f;
  const auto& g = p.g;
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (f[x] != g[x]) continue;
    const std::size_t t = f[x];
    if (f[f[x]] != g[t]) return false;
    if (g[g[x]] != f[t]) return false;
  }
  return true;
}

// lim d(f g x_n, g f x_n) = 0 = lim d(f f x_n, g g x_n).
inline bool is_compatible_type_r(const MapPair& p, const MetricSpace& /*space*/) {
  const auto& f = p.f;
  const auto& g = p.g;
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (f[x] != g[x]) continue;
    if (f[g[x]] != g[f[x]]) return false;
    if (f[f[x]] != g[g[x]]) return false;
  }
  return true;
}

enum class CompatibilityKind { Plain, K, R };

inline constexpr std::uint64_t kDefaultOracleBudget = 1'000'000;
inline constexpr std::size_t kOracleCycle = 2;

namespace detail {

// Limit of an eventually periodic point sequence in a uniformly discrete
// space: exists iff all cycle terms are at distance 0 from the first.
inline std::optional<std::size_t> discrete_limit(const MetricSpace& space, std::span<const std::size_t> cycle) {
  for (auto c : cycle)
    if (!space.d(c, cycle.front()).is_zero()) return std::nullopt;
  return cycle.front();
}

// lim of a real sequence d(a_n, b_n) is 0 iff it vanishes along the cycle.
template <typename A, typename B>
bool distance_limit_zero(const MetricSpace& space, std::span<const std::size_t> cycle, A a, B b) {
  for (auto c : cycle)
    if (!space.d(a(c), b(c)).is_zero()) return false;
  return true;
}

}  // namespace detail

inline std::uint64_t oracle_schema_count(std::size_t n) {
  std::uint64_t cyc = 0, pw = n;
  for (std::size_t k = 1; k <= kOracleCycle; ++k, pw *= n) cyc += pw;
  return cyc;
}

// Definition-literal oracle. Enumerates every eventually periodic sequence
// with cycle length 1..2 over X, keeps those satisfying
// lim f x_n = lim g x_n = t, and checks the limit conditions of the requested
// kind. A finite preamble never changes a limit, so sequences are enumerated
// by their cycle alone; in a uniformly discrete space limits depend only on
// the set of cycle values, so longer cycles add nothing.
inline bool sequence_oracle_compatibility(const MapPair& p, const MetricSpace& space, CompatibilityKind kind,
                                          std::uint64_t budget = kDefaultOracleBudget) {
  const std::size_t n = space.size();
  if (oracle_schema_count(n) > budget)
    throw BudgetExceeded("sequence oracle needs " + std::to_string(oracle_schema_count(n)) +
                         " schemas, budget is " + std::to_string(budget));
  const auto& f = p.f;
  const auto& g = p.g;

  std::array<std::size_t, kOracleCycle> cycle_buf{};
  std::span<const std::size_t> cycle;
  auto check_cycle = [&]() -> bool {
    std::array<std::size_t, kOracleCycle> fc{}, gc{};
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      fc[k] = f[cycle[k]];
      gc[k] = g[cycle[k]];
    }
    const auto lf = detail::discrete_limit(space, std::span(fc).first(cycle.size()));
    const auto lg = detail::discrete_limit(space, std::span(gc).first(cycle.size()));
    if (!lf || !lg || !space.d(*lf, *lg).is_zero()) return true;  // (equiconverge) fails: no constraint
    const std::size_t t = *lf;
    switch (kind) {
      case CompatibilityKind::Plain:
        return detail::distance_limit_zero(space, cycle, [&](auto x) { return f[g[x]]; },
                                           [&](auto x) { return g[f[x]]; });
      case CompatibilityKind::K:
        return detail::distance_limit_zero(space, cycle, [&](auto x) { return f[f[x]]; },
                                           [&](auto) { return g[t]; }) &&
               detail::distance_limit_zero(space, cycle, [&](auto x) { return g[g[x]]; },
                                           [&](auto) { return f[t]; });
      case CompatibilityKind::R:
        return detail::distance_limit_zero(space, cycle, [&](auto x) { return f[g[x]]; },
                                           [&](auto x) { return g[f[x]]; }) &&
               detail::distance_limit_zero(space, cycle, [&](auto x) { return f[f[x]]; },
                                           [&](auto x) { return g[g[x]]; });
    }
    return false;
  };

  for (std::size_t cyc_len = 1; cyc_len <= kOracleCycle; ++cyc_len) {
    std::uint64_t cyc_count = 1;
    for (std::size_t k = 0; k < cyc_len; ++k) cyc_count *= n;
    for (std::uint64_t code = 0; code < cyc_count; ++code) {
      for (std::uint64_t c = code, k = 0; k < cyc_len; ++k, c /= n) cycle_buf[k] = c % n;
      cycle = std::span<const std::size_t>(cycle_buf).first(cyc_len);
      if (!check_cycle()) return false;
    }
  }
  return true;
}

struct PropositionVerdict {
  enum class Outcome { Success, Violation, PreconditionFailed };
  Outcome outcome = Outcome::Success;
  std::optional<std::size_t> violating_point;
  bool ok() const { return outcome == Outcome::Success; }
};

// f t = g t implies f g t = f f t = g g t = g f t, for type-R pairs.
inline PropositionVerdict check_jainr32(const MapPair& p, const MetricSpace& space) {
  if (!is_compatible_type_r(p, space)) return {PropositionVerdict::Outcome::PreconditionFailed, std::nullopt};
  const auto& f = p.f;
  const auto& g = p.g;
  for (std::size_t t = 0; t < f.size(); ++t) {
    if (f[t] != g[t]) continue;
    const auto fgt = f[g[t]], fft = f[f[t]], ggt = g[g[t]], gft = g[f[t]];
    if (!(fgt == fft && fft == ggt && ggt == gft)) return {PropositionVerdict::Outcome::Violation, t};
  }
  return {};
}

// For type-R pairs and each nonempty C_t: f t = g t, g f x -> f t, f g x -> g t,
// and f g t = g f t.
inline PropositionVerdict check_jainr33(const MapPair& p, const MetricSpace& space) {
  if (!is_compatible_type_r(p, space)) return {PropositionVerdict::Outcome::PreconditionFailed, std::nullopt};
  const auto& f = p.f;
  const auto& g = p.g;
  for (const auto& [t, members] : coincidence_points(p).classes) {
    bool ok = f[t] == g[t];
    for (auto x : members) ok = ok && g[f[x]] == f[t] && f[g[x]] == g[t];
    ok = ok && f[g[t]] == g[f[t]];
    if (!ok) return {PropositionVerdict::Outcome::Violation, t};
  }
  return {};
}

}  // namespace digitop
