#pragma once

// Decidable map classes on finite digital metric spaces: contraction,
// Geraghty (single and pair), expansive, alpha-psi expansive, weakly uniformly
// strict, alpha- and alpha-beta-admissible; plus the psi/phi function harness.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "digitop/closed_form.hpp"
#include "digitop/maps.hpp"
#include "digitop/metrics.hpp"
#include "digitop/rational.hpp"

namespace digitop {

// alpha: X x X -> [0, inf), total over ordered pairs.
class WeightFunction {
 public:
  WeightFunction(ImagePtr image, std::vector<Rational> table) : image_(std::move(image)), table_(std::move(table)) {
    const std::size_t n = image_->size();
    if (table_.size() != n * n) throw ParseError("weight table must cover every ordered pair");
    for (const auto& v : table_)
      if (v < 0) throw ParseError("weights must be nonnegative");
  }
  static WeightFunction constant(ImagePtr image, const Rational& value) {
    const std::size_t n = image->size();
    return WeightFunction(std::move(image), std::vector<Rational>(n * n, value));
  }

  const DigitalImage& image() const { return *image_; }
  const ImagePtr& image_ptr() const { return image_; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return table_[i * image_->size() + j]; }
  void set(std::size_t i, std::size_t j, Rational v) {
    if (v < 0) throw ContractError("weights must be nonnegative");
    table_[i * image_->size() + j] = std::move(v);
  }

 private:
  ImagePtr image_;
  std::vector<Rational> table_;
};

// Ratio of two distances. For Euclidean spaces the exact square is stored.
struct Modulus {
  Rational value = 0;
  bool squared = false;

  bool below_one() const { return value < 1; }
  double approx() const { return squared ? std::sqrt(to_double(value)) : to_double(value); }
  std::string display() const {
    if (!squared) return format_rational(value);
    const BigInt num = boost::multiprecision::numerator(value), den = boost::multiprecision::denominator(value);
    const BigInt rn = boost::multiprecision::sqrt(num), rd = boost::multiprecision::sqrt(den);
    if (rn * rn == num && rd * rd == den) return format_rational(Rational(rn, rd));
    return "sqrt(" + format_rational(value) + ")";
  }
  friend bool operator<(const Modulus& a, const Modulus& b) { return a.value < b.value; }
};

struct ContractionVerdict {
  bool is_contraction = false;
  Modulus modulus;  // k* = max d(fx,fy)/d(x,y) over distinct pairs; 0 for singletons
};

using IndexPair = std::pair<std::size_t, std::size_t>;

namespace detail {
inline void require_bound(const SelfMap& f, const MetricSpace& space) {
  if (!(f.image_ptr() == space.image_ptr() || f.image() == space.image()))
    throw ContractError("map and metric space are bound to different images");
}
inline Modulus ratio(const Distance& num, const Distance& den) {
  return {Rational(num.raw(), den.raw()), den.euclidean()};
}
}  // namespace detail

inline ContractionVerdict contraction_modulus(const SelfMap& f, const MetricSpace& space) {
  detail::require_bound(f, space);
  ContractionVerdict v;
  v.modulus.squared = !space.exact();
  for (std::size_t i = 0; i < space.size(); ++i)
    for (std::size_t j = i + 1; j < space.size(); ++j) {
      auto r = detail::ratio(space.d(f[i], f[j]), space.d(i, j));
      if (v.modulus < r) v.modulus = r;
    }
  v.is_contraction = v.modulus.below_one();
  return v;
}

struct GeraghtyVerdict {
  bool holds = false;
  std::optional<IndexPair> failing_pair;
  // On success the max ratio, which serves as a constant beta' < 1.
  std::optional<Modulus> witness_modulus;
};

// On a finite space a Geraghty beta exists iff distances strictly shrink.
inline GeraghtyVerdict is_geraghty(const SelfMap& f, const MetricSpace& space) {
  detail::require_bound(f, space);
  GeraghtyVerdict v;
  Modulus worst{0, !space.exact()};
  for (std::size_t i = 0; i < space.size(); ++i)
    for (std::size_t j = i + 1; j < space.size(); ++j) {
      if (!(space.d(f[i], f[j]) < space.d(i, j))) {
        v.failing_pair = IndexPair{i, j};
        return v;
      }
      auto r = detail::ratio(space.d(f[i], f[j]), space.d(i, j));
      if (worst < r) worst = r;
    }
  v.holds = true;
  v.witness_modulus = worst;
  return v;
}

struct PairVerdict {
  bool holds = false;
  std::optional<IndexPair> failing_pair;
};

// (T, S) Geraghty pair: d(Sx,Sy) <= beta(d(Tx,Ty)) d(Tx,Ty) with beta < 1.
inline PairVerdict is_geraghty_pair(const SelfMap& s, const SelfMap& t, const MetricSpace& space) {
  require_same_image(s, t);
  detail::require_bound(s, space);
  for (std::size_t i = 0; i < space.size(); ++i)
    for (std::size_t j = i + 1; j < space.size(); ++j) {
      const auto& ds = space.d(s[i], s[j]);
      const auto& dt = space.d(t[i], t[j]);
      const bool ok = dt.is_zero() ? ds.is_zero() : ds < dt;
      if (!ok) return {false, IndexPair{i, j}};
    }
  return {true, std::nullopt};
}

inline PairVerdict is_expansive(const SelfMap& f, const MetricSpace& space) {
  detail::require_bound(f, space);
  for (std::size_t i = 0; i < space.size(); ++i)
    for (std::size_t j = i + 1; j < space.size(); ++j)
      if (space.d(f[i], f[j]) < space.d(i, j)) return {false, IndexPair{i, j}};
  return {true, std::nullopt};
}

// |a(x - y)| >= |x - y| on Z.
inline bool is_expansive(const AffineIntMap& m) { return m.a <= -1 || m.a >= 1; }

// psi(d(Sx,Sy)) >= alpha(x,y) d(x,y) over ordered pairs.
inline PairVerdict is_alpha_psi_expansive(const SelfMap& f, const WeightFunction& alpha,
                                          const ClosedFormFn& psi, const MetricSpace& space) {
  detail::require_bound(f, space);
  for (std::size_t i = 0; i < space.size(); ++i)
    for (std::size_t j = 0; j < space.size(); ++j) {
      const auto& dxy = space.d(i, j);
      const auto& dfxy = space.d(f[i], f[j]);
      const auto exact_xy = dxy.exact_value();
      const auto exact_fxy = dfxy.exact_value();
      bool ok;
      if (exact_xy && exact_fxy) {
        ok = psi(*exact_fxy) >= alpha(i, j) * *exact_xy;
      } else {
        ok = psi(dfxy.value()) >= to_double(alpha(i, j)) * dxy.value() - space.tau();
      }
      if (!ok) return {false, IndexPair{i, j}};
    }
  return {true, std::nullopt};
}

struct WusVerdict {
  bool holds = false;
  std::optional<Distance> failing_epsilon;
  std::optional<IndexPair> failing_pair;
};

// Weakly uniformly strict: for each eps > 0 some delta > 0 makes
// eps <= d(x,y) < eps + delta imply d(Tx,Ty) < eps. Only eps equal to a
// realized distance can have a nonempty window for small delta, so those are
// the cases examined; delta is taken as half the gap to the next realized
// distance (in squared units for Euclidean spaces).
inline WusVerdict is_wus_contraction(const SelfMap& f, const MetricSpace& space) {
  detail::require_bound(f, space);
  const auto realized = realized_distances(space);
  for (std::size_t k = 0; k < realized.size(); ++k) {
    // Window in doubled units: 2*lower <= 2*key < twice_upper.
    const std::int64_t twice_lower = 2 * realized[k].raw();
    const std::int64_t twice_upper = k + 1 < realized.size() ? realized[k].raw() + realized[k + 1].raw()
                                                             : 2 * (realized[k].raw() + 1);
    for (std::size_t i = 0; i < space.size(); ++i)
      for (std::size_t j = 0; j < space.size(); ++j) {
        const std::int64_t twice_key = 2 * space.d(i, j).raw();
        if (!(twice_lower <= twice_key && twice_key < twice_upper)) continue;
        if (!(space.d(f[i], f[j]) < realized[k])) return {false, realized[k], IndexPair{i, j}};
      }
  }
  return {true, std::nullopt, std::nullopt};
}

// alpha(x,y) >= 1 implies alpha(Tx,Ty) >= 1.
inline PairVerdict is_alpha_admissible(const SelfMap& f, const WeightFunction& alpha) {
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < f.size(); ++j)
      if (alpha(i, j) >= 1 && !(alpha(f[i], f[j]) >= 1)) return {false, IndexPair{i, j}};
  return {true, std::nullopt};
}

// S is alpha-beta admissible with respect to T.
inline PairVerdict is_alpha_beta_admissible_wrt(const SelfMap& s, const SelfMap& t,
                                                const WeightFunction& alpha, const WeightFunction& beta) {
  require_same_image(s, t);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) {
      const bool antecedent = alpha(t[i], t[j]) >= 1 && beta(t[i], t[j]) >= 1;
      const bool consequent = alpha(s[i], s[j]) >= 1 && beta(s[i], s[j]) >= 1;
      if (antecedent && !consequent) return {false, IndexPair{i, j}};
    }
  return {true, std::nullopt};
}

namespace detail {
inline void require_grid(const std::vector<Rational>& grid) {
  if (!std::is_sorted(grid.begin(), grid.end())) throw ContractError("grid must be sorted");
  if (grid.empty() || grid.front() != 0) throw ContractError("grid must start at 0");
}
}  // namespace detail

// Psi class: nondecreasing, psi(0) = 0.
inline bool psi_class_check(const ClosedFormFn& f, const std::vector<Rational>& grid) {
  detail::require_grid(grid);
  if (f(Rational(0)) != 0) return false;
  if (!f.nondecreasing()) return false;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (f(grid[i]) < f(grid[i - 1])) return false;
  return true;
}

// Phi class: increasing, phi(0) = 0, phi(t) < t for t > 0.
inline bool phi_class_check(const ClosedFormFn& f, const std::vector<Rational>& grid) {
  detail::require_grid(grid);
  if (f(Rational(0)) != 0) return false;
  if (f.form() == ClosedFormFn::Form::Linear && !(f.coefficient() > 0 && f.coefficient() < 1)) return false;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] == grid[i - 1]) continue;
    if (!(f(grid[i - 1]) < f(grid[i]))) return false;
  }
  for (const auto& t : grid)
    if (t > 0 && !(f(t) < t)) return false;
  return true;
}

namespace detail {

inline constexpr unsigned kMaxIterateBits = 1u << 16;

inline unsigned msb_bits(const Rational& r) {
  const BigInt num = abs(boost::multiprecision::numerator(r));
  const BigInt den = boost::multiprecision::denominator(r);
  const unsigned a = num == 0 ? 0 : static_cast<unsigned>(boost::multiprecision::msb(num)) + 1;
  const unsigned b = static_cast<unsigned>(boost::multiprecision::msb(den)) + 1;
  return std::max(a, b);
}

// psi(t0), psi^2(t0), ..., psi^N(t0). Stops growing once the chain is stationary.
struct IterateChain {
  std::vector<Rational> values;  // values[n-1] = psi^n(t0), possibly shorter than N
  std::size_t length = 0;        // N
  const Rational& at(std::size_t n) const { return n <= values.size() ? values[n - 1] : values.back(); }
};

inline IterateChain iterate_chain(const ClosedFormFn& psi, const Rational& t0, std::size_t count) {
  if (!(t0 > 0)) throw ContractError("t0 must be positive");
  if (!psi.nondecreasing()) throw ContractError(psi.name() + " is not nondecreasing");
  IterateChain chain;
  chain.length = count;
  Rational x = t0;
  for (std::size_t n = 1; n <= count; ++n) {
    Rational next = psi(x);
    if (msb_bits(next) > kMaxIterateBits)
      throw BudgetExceeded("iterate size exceeds " + std::to_string(kMaxIterateBits) + " bits");
    const bool stationary = n > 1 && next == x;
    chain.values.push_back(next);
    if (stationary) break;
    x = std::move(next);
  }
  // Nondecreasing on the chain itself: sort the chain arguments and check images.
  std::vector<std::pair<Rational, Rational>> graph;
  graph.emplace_back(t0, chain.values.front());
  for (std::size_t i = 0; i + 1 < chain.values.size(); ++i) graph.emplace_back(chain.values[i], chain.values[i + 1]);
  std::sort(graph.begin(), graph.end());
  for (std::size_t i = 1; i < graph.size(); ++i)
    if (graph[i].second < graph[i - 1].second)
      throw ContractError(psi.name() + " is not nondecreasing on the iterate chain");
  return chain;
}

}  // namespace detail

struct PsiSeriesVerdict {
  enum class Outcome { NoObstruction, Certified, BoundFails };
  Outcome outcome = Outcome::NoObstruction;
  Rational q = 0;              // psi(t0)
  Rational partial_sum = 0;    // sum_{n=1}^N psi^n(t0)
  Rational min_iterate = 0;    // min_{n<=N} psi^n(t0)
  std::size_t n = 0;           // N
  bool step_holds = false;     // psi(q) >= q
  std::optional<std::size_t> first_below_q;
};

// If psi(t0) = q > 0, certifies psi^n(t0) >= q for all n <= N and
// sum_{n<=N} psi^n(t0) >= N q, so the series diverges. The certificate comes
// from the computed chain; step_holds reports separately whether psi(q) >= q.
inline PsiSeriesVerdict psi_summable_forces_zero_witness(const ClosedFormFn& psi, const Rational& t0, std::size_t N) {
  PsiSeriesVerdict v;
  v.n = N;
  const auto chain = detail::iterate_chain(psi, t0, std::max<std::size_t>(N, 1));
  v.q = chain.at(1);
  v.step_holds = psi(v.q) >= v.q;
  if (v.q == 0) {
    v.outcome = PsiSeriesVerdict::Outcome::NoObstruction;
    return v;
  }
  v.min_iterate = v.q;
  for (std::size_t k = 1; k <= N; ++k) {
    if (k <= chain.values.size()) {
      const auto& x = chain.at(k);
      v.partial_sum += x;
      if (x < v.min_iterate) v.min_iterate = x;
      if (x < v.q && !v.first_below_q) v.first_below_q = k;
    } else {
      v.partial_sum += chain.values.back() * Rational(N - k + 1);
      break;
    }
  }
  const bool certified = !v.first_below_q && v.partial_sum >= Rational(N) * v.q;
  v.outcome = certified ? PsiSeriesVerdict::Outcome::Certified : PsiSeriesVerdict::Outcome::BoundFails;
  return v;
}

struct PsiIterateVerdict {
  enum class Outcome { BoundedBelow, Vanishing, Trajectory };
  Outcome outcome = Outcome::Trajectory;
  Rational lower_bound = 0;  // psi(t0)
  bool step_holds = false;
  std::vector<Rational> iterates;  // psi^n(t0) for n = 1..N (stationary tail collapsed)
};

// Computes psi^n(t0), n <= N. BoundedBelow: q = psi(t0) > 0, psi(q) >= q and
// every computed iterate >= q, so psi^n(t0) does not tend to 0. Vanishing: the
// chain reaches 0.
inline PsiIterateVerdict psi_vanishing_iterates_check(const ClosedFormFn& psi, const Rational& t0, std::size_t N) {
  PsiIterateVerdict v;
  const auto chain = detail::iterate_chain(psi, t0, std::max<std::size_t>(N, 1));
  v.iterates = chain.values;
  v.lower_bound = chain.at(1);
  v.step_holds = psi(v.lower_bound) >= v.lower_bound;
  if (std::any_of(v.iterates.begin(), v.iterates.end(), [](const Rational& x) { return x == 0; })) {
    v.outcome = PsiIterateVerdict::Outcome::Vanishing;
    return v;
  }
  const bool bounded = std::all_of(v.iterates.begin(), v.iterates.end(),
                                   [&](const Rational& x) { return x >= v.lower_bound; });
  v.outcome = (v.lower_bound > 0 && v.step_holds && bounded) ? PsiIterateVerdict::Outcome::BoundedBelow
                                                              : PsiIterateVerdict::Outcome::Trajectory;
  return v;
}

}  // namespace digitop
