#pragma once

// Self-maps of digital images as total tables, digital continuity, fixed
// points, orbits, exhaustive enumeration, and affine maps on all of Z.

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "digitop/lattice.hpp"

namespace digitop {

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;
inline constexpr std::size_t kDefaultSubsetCap = 12;

// Enumeration budget, honoring DIGITOP_BUDGET when set to a positive integer.
inline std::uint64_t default_budget() {
  if (const char* env = std::getenv("DIGITOP_BUDGET")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return kDefaultBudget;
}

using Index = std::uint32_t;

// A total function X -> X. Values are point indices of the bound image.
class SelfMap {
 public:
  SelfMap(ImagePtr image, std::vector<Index> table) : image_(std::move(image)), table_(std::move(table)) {
    if (!image_) throw ContractError("null image");
    if (table_.size() != image_->size())
      throw ParseError("map table has " + std::to_string(table_.size()) + " entries, image has " +
                       std::to_string(image_->size()) + " points");
    for (auto v : table_)
      if (v >= image_->size()) throw ParseError("map value index out of range");
  }

  // From (argument, value) pairs; must be total and land in the image.
  static SelfMap from_pairs(ImagePtr image, const std::vector<std::pair<Point, Point>>& pairs) {
    const std::size_t n = image->size();
    std::vector<Index> table(n, 0);
    std::vector<bool> seen(n, false);
    for (const auto& [arg, val] : pairs) {
      auto i = image->index_of(arg);
      if (!i) throw ParseError("map argument " + to_string(arg) + " is not in the image");
      auto v = image->index_of(val);
      if (!v)
        throw ParseError("map value " + to_string(val) + " for " + to_string(arg) +
                         " is not in the image");
      if (seen[*i]) throw ParseError("map argument " + to_string(arg) + " given twice");
      seen[*i] = true;
      table[*i] = static_cast<Index>(*v);
    }
    for (std::size_t i = 0; i < n; ++i)
      if (!seen[i]) throw ParseError("map is not total: no value for " + to_string(image->point(i)));
    return SelfMap(std::move(image), std::move(table));
  }

  // From a point function; rejects values outside the image.
  static SelfMap from_function(ImagePtr image, const std::function<Point(const Point&)>& fn) {
    std::vector<std::pair<Point, Point>> pairs;
    for (const auto& p : image->points()) pairs.emplace_back(p, fn(p));
    return from_pairs(std::move(image), pairs);
  }

  static SelfMap identity(ImagePtr image) {
    std::vector<Index> t(image->size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<Index>(i);
    return SelfMap(std::move(image), std::move(t));
  }

  static SelfMap constant(ImagePtr image, std::size_t value) {
    std::vector<Index> t(image->size(), static_cast<Index>(value));
    return SelfMap(std::move(image), std::move(t));
  }

  const DigitalImage& image() const { return *image_; }
  const ImagePtr& image_ptr() const { return image_; }
  std::size_t size() const { return table_.size(); }
  const std::vector<Index>& table() const { return table_; }

  std::size_t operator[](std::size_t i) const { return table_[i]; }
  Point operator()(const Point& p) const { return image_->point(table_[image_->require_index(p)]); }

  friend bool operator==(const SelfMap& a, const SelfMap& b) {
    return a.table_ == b.table_ && (a.image_ == b.image_ || *a.image_ == *b.image_);
  }

 private:
  ImagePtr image_;
  std::vector<Index> table_;
};

inline bool same_image(const SelfMap& f, const SelfMap& g) {
  return f.image_ptr() == g.image_ptr() || f.image() == g.image();
}

inline void require_same_image(const SelfMap& f, const SelfMap& g) {
  if (!same_image(f, g)) throw ContractError("maps are bound to different images");
}

// (f o g)(x) = f(g(x)).
inline SelfMap compose(const SelfMap& f, const SelfMap& g) {
  require_same_image(f, g);
  std::vector<Index> t(g.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<Index>(f[g[i]]);
  return SelfMap(f.image_ptr(), std::move(t));
}

// Adjacent points go to equal or adjacent points.
inline bool is_continuous_adjacency(const DigitalImage& image, const SelfMap& f) {
  for (std::size_t i = 0; i < image.size(); ++i)
    for (auto j : image.neighbor_indices(i))
      if (!image.adjacent_or_equal(f[i], f[j])) return false;
  return true;
}

// Subset definition: every connected subset has a connected image. Exponential;
// an oracle for the adjacency criterion.
inline bool is_continuous_subsets(const DigitalImage& image, const SelfMap& f,
                                  std::size_t size_cap = kDefaultSubsetCap) {
  const std::size_t n = image.size();
  if (n > size_cap || n > 30)
    throw BudgetExceeded("subset continuity check limited to " + std::to_string(std::min<std::size_t>(size_cap, 30)) +
                         " points, image has " + std::to_string(n));
  std::vector<std::size_t> subset, mapped;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    subset.clear();
    std::uint64_t image_mask = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) {
        subset.push_back(i);
        image_mask |= std::uint64_t{1} << f[i];
      }
    if (!is_connected_indices(image, subset)) continue;
    mapped.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (image_mask >> i & 1) mapped.push_back(i);
    if (!is_connected_indices(image, mapped)) return false;
  }
  return true;
}

struct FixedPointSet {
  std::vector<std::size_t> indices;
  std::vector<Point> points;
  bool empty() const { return indices.empty(); }
  std::size_t size() const { return indices.size(); }
};

inline FixedPointSet fixed_points(const SelfMap& f) {
  FixedPointSet out;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] == i) {
      out.indices.push_back(i);
      out.points.push_back(f.image().point(i));
    }
  return out;
}

inline bool is_constant(const SelfMap& f) {
  for (std::size_t i = 1; i < f.size(); ++i)
    if (f[i] != f[0]) return false;
  return true;
}

inline bool is_bijective(const SelfMap& f) {
  std::vector<bool> hit(f.size(), false);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (hit[f[i]]) return false;
    hit[f[i]] = true;
  }
  return true;
}

// Inverse of a bijective map.
inline SelfMap inverse(const SelfMap& f) {
  if (!is_bijective(f)) throw ContractError("map is not bijective");
  std::vector<Index> t(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) t[f[i]] = static_cast<Index>(i);
  return SelfMap(f.image_ptr(), std::move(t));
}

// x0, f(x0), f^2(x0), ... up to and including the first repeated point, or
// max_steps applications, whichever comes first.
struct Orbit {
  std::vector<std::size_t> indices;
  std::vector<Point> points;
  bool reached_fixed_point = false;
  std::optional<std::size_t> fixed_point;  // index
  std::size_t steps_to_fixed = 0;          // applications of f until the fixed point
};

inline Orbit orbit_from(const SelfMap& f, std::size_t start, std::size_t max_steps) {
  Orbit o;
  std::vector<bool> visited(f.size(), false);
  std::size_t x = start;
  o.indices.push_back(x);
  visited[x] = true;
  for (std::size_t step = 0; step < max_steps; ++step) {
    const std::size_t next = f[x];
    o.indices.push_back(next);
    if (next == x) {
      o.reached_fixed_point = true;
      o.fixed_point = x;
      o.steps_to_fixed = step;
      break;
    }
    if (visited[next]) {
      // Re-entry into a cycle of length >= 2, or into an earlier prefix that
      // is itself not fixed.
      break;
    }
    visited[next] = true;
    x = next;
  }
  for (auto i : o.indices) o.points.push_back(f.image().point(i));
  return o;
}

inline Orbit orbit(const SelfMap& f, const Point& x0, std::size_t max_steps) {
  return orbit_from(f, f.image().require_index(x0), max_steps);
}

// Every self-map of an image, as a base-|X| counter on the value tuple
// (f(p_0), ..., f(p_{n-1})) with p_0 the most significant digit, so the order
// is lexicographic on the tables.
class MapSpace {
 public:
  explicit MapSpace(ImagePtr image, std::uint64_t budget = default_budget()) : image_(std::move(image)) {
    const std::uint64_t n = image_->size();
    count_ = 1;
    for (std::uint64_t i = 0; i < n; ++i) {
      if (count_ > budget / n)
        throw BudgetExceeded(std::to_string(n) + "^" + std::to_string(n) +
                             " self-maps exceed the enumeration budget of " + std::to_string(budget));
      count_ *= n;
    }
    if (count_ > budget)
      throw BudgetExceeded("self-map count exceeds the enumeration budget of " + std::to_string(budget));
  }

  std::uint64_t size() const { return count_; }
  const ImagePtr& image_ptr() const { return image_; }

  SelfMap at(std::uint64_t index) const {
    const std::size_t n = image_->size();
    std::vector<Index> t(n);
    for (std::size_t k = n; k-- > 0;) {
      t[k] = static_cast<Index>(index % n);
      index /= n;
    }
    return SelfMap(image_, std::move(t));
  }

  std::uint64_t index_of(const SelfMap& f) const {
    std::uint64_t idx = 0;
    for (std::size_t k = 0; k < f.size(); ++k) idx = idx * f.size() + f[k];
    return idx;
  }

  template <typename Fn>
  void for_range(std::uint64_t begin, std::uint64_t end, Fn&& fn) const {
    for (std::uint64_t i = begin; i < end && i < count_; ++i) fn(at(i));
  }
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for_range(0, count_, std::forward<Fn>(fn));
  }

  std::vector<SelfMap> all() const {
    std::vector<SelfMap> out;
    out.reserve(count_);
    for_each([&](SelfMap f) { out.push_back(std::move(f)); });
    return out;
  }

 private:
  ImagePtr image_;
  std::uint64_t count_ = 0;
};

inline std::vector<SelfMap> enumerate_self_maps(const ImagePtr& image, std::uint64_t budget = default_budget()) {
  return MapSpace(image, budget).all();
}

// x -> a*x + b on all of Z.
struct AffineIntMap {
  std::int64_t a = 1;
  std::int64_t b = 0;

  std::int64_t operator()(std::int64_t x) const { return a * x + b; }
  bool bijective() const { return a == 1 || a == -1; }
  // Inverse of a bijective affine map: x -> a*x - a*b.
  AffineIntMap inverse() const {
    if (!bijective()) throw ContractError("affine map is not bijective on Z");
    return {a, -a * b};
  }
  // c_1-continuity on Z: successive integers land at distance |a| <= 1.
  bool c1_continuous() const { return a >= -1 && a <= 1; }
};

struct AffineFixedPoints {
  enum class Kind { AllOfZ, Empty, Single };
  Kind kind = Kind::Empty;
  std::int64_t point = 0;
  friend bool operator==(const AffineFixedPoints&, const AffineFixedPoints&) = default;
};

inline AffineFixedPoints affine_fixed_points(const AffineIntMap& m) {
  using K = AffineFixedPoints::Kind;
  if (m.a == 1) return m.b == 0 ? AffineFixedPoints{K::AllOfZ, 0} : AffineFixedPoints{K::Empty, 0};
  const std::int64_t denom = 1 - m.a;
  if (m.b % denom != 0) return {K::Empty, 0};
  return {K::Single, m.b / denom};
}

}  // namespace digitop
