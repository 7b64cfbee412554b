#pragma once

// l_p and shortest-path metrics on digital images.
//
// Distances on l_1, l_inf and the shortest-path metric are integers and are
// stored exactly. Euclidean distances are stored as their exact squared value;
// sqrt is only taken for display and for mixed real arithmetic, which uses the
// space's absolute tolerance tau.

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "digitop/lattice.hpp"
#include "digitop/rational.hpp"

namespace digitop {

inline constexpr double kDefaultTau = 1e-9;

enum class MetricKind { L1, L2, LInf, ShortestPath };

struct MetricSpec {
  MetricKind kind = MetricKind::L2;

  static MetricSpec l1() { return {MetricKind::L1}; }
  static MetricSpec l2() { return {MetricKind::L2}; }
  static MetricSpec linf() { return {MetricKind::LInf}; }
  static MetricSpec shortest_path() { return {MetricKind::ShortestPath}; }

  bool exact() const { return kind != MetricKind::L2; }
  friend bool operator==(const MetricSpec&, const MetricSpec&) = default;
};

inline std::string to_string(const MetricSpec& m) {
  switch (m.kind) {
    case MetricKind::L1: return "l1";
    case MetricKind::L2: return "l2";
    case MetricKind::LInf: return "linf";
    case MetricKind::ShortestPath: return "shortest_path";
  }
  return "?";
}

inline std::optional<MetricSpec> metric_from_name(std::string_view name) {
  if (name == "l1") return MetricSpec::l1();
  if (name == "l2") return MetricSpec::l2();
  if (name == "linf") return MetricSpec::linf();
  if (name == "shortest_path" || name == "sp") return MetricSpec::shortest_path();
  return std::nullopt;
}

class Distance {
 public:
  Distance() = default;
  static Distance exact(std::int64_t value) { return Distance(false, value); }
  static Distance from_squared(std::int64_t squared) { return Distance(true, squared); }

  bool euclidean() const { return euclidean_; }
  // The integer value, or the squared value for Euclidean distances.
  std::int64_t raw() const { return raw_; }
  bool is_zero() const { return raw_ == 0; }
  double value() const {
    return euclidean_ ? std::sqrt(static_cast<double>(raw_)) : static_cast<double>(raw_);
  }
  std::optional<Rational> exact_value() const {
    if (euclidean_) {
      const auto root = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(raw_))));
      if (root * root == raw_) return Rational(root);
      return std::nullopt;
    }
    return Rational(raw_);
  }

  std::string display() const {
    if (!euclidean_) return std::to_string(raw_);
    if (auto e = exact_value()) return format_rational(*e);
    return "sqrt(" + std::to_string(raw_) + ")";
  }

  // Squaring is monotone on nonnegative values, so raw order is distance order.
  friend std::strong_ordering operator<=>(const Distance& a, const Distance& b) {
    if (a.euclidean_ != b.euclidean_)
      throw ContractError("comparing distances from different metrics");
    return a.raw_ <=> b.raw_;
  }
  friend bool operator==(const Distance& a, const Distance& b) {
    return a.euclidean_ == b.euclidean_ && a.raw_ == b.raw_;
  }

 private:
  Distance(bool euclidean, std::int64_t raw) : euclidean_(euclidean), raw_(raw) {}
  bool euclidean_ = false;
  std::int64_t raw_ = 0;
};

inline Distance lp_distance(const Point& x, const Point& y, MetricKind kind) {
  if (x.dim() != y.dim()) throw ContractError("dimension mismatch");
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const std::int64_t d = std::abs(x[i] - y[i]);
    switch (kind) {
      case MetricKind::L1: acc += d; break;
      case MetricKind::L2: acc += d * d; break;
      case MetricKind::LInf: acc = std::max(acc, d); break;
      case MetricKind::ShortestPath: throw ContractError("shortest path needs an image");
    }
  }
  return kind == MetricKind::L2 ? Distance::from_squared(acc) : Distance::exact(acc);
}

// A digital metric space (X, d, kappa). All pairwise distances are tabulated at
// binding; the table is shared read-only afterwards.
class MetricSpace {
 public:
  MetricSpace(ImagePtr image, MetricSpec metric, double tau = kDefaultTau)
      : image_(std::move(image)), metric_(metric), tau_(tau) {
    if (!image_) throw ContractError("null image");
    if (!(tau_ > 0)) throw ContractError("tolerance must be positive");
    const std::size_t n = image_->size();
    table_.resize(n * n);
    if (metric_.kind == MetricKind::ShortestPath) {
      if (!is_connected(*image_))
        throw ContractError("shortest_path metric requires a connected image");
      for (std::size_t s = 0; s < n; ++s) {
        std::vector<std::int64_t> hops(n, -1);
        std::queue<std::size_t> frontier;
        hops[s] = 0;
        frontier.push(s);
        while (!frontier.empty()) {
          auto v = frontier.front();
          frontier.pop();
          for (auto w : image_->neighbor_indices(v))
            if (hops[w] < 0) {
              hops[w] = hops[v] + 1;
              frontier.push(w);
            }
        }
        for (std::size_t t = 0; t < n; ++t) table_[s * n + t] = Distance::exact(hops[t]);
      }
    } else {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          table_[i * n + j] = lp_distance(image_->point(i), image_->point(j), metric_.kind);
    }
  }

  const DigitalImage& image() const { return *image_; }
  const ImagePtr& image_ptr() const { return image_; }
  const MetricSpec& metric() const { return metric_; }
  double tau() const { return tau_; }
  bool exact() const { return metric_.exact(); }
  std::size_t size() const { return image_->size(); }

  const Distance& d(std::size_t i, std::size_t j) const { return table_[i * size() + j]; }

 private:
  ImagePtr image_;
  MetricSpec metric_;
  double tau_;
  std::vector<Distance> table_;
};

inline Distance distance(const MetricSpace& space, const Point& x, const Point& y) {
  return space.d(space.image().require_index(x), space.image().require_index(y));
}

// Sorted distinct positive distances realized by pairs of the space.
inline std::vector<Distance> realized_distances(const MetricSpace& space) {
  std::vector<Distance> out;
  for (std::size_t i = 0; i < space.size(); ++i)
    for (std::size_t j = i + 1; j < space.size(); ++j) out.push_back(space.d(i, j));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Any epsilon at or below this value witnesses uniform discreteness.
inline std::optional<Distance> min_positive_distance(const MetricSpace& space) {
  std::optional<Distance> best;
  for (std::size_t i = 0; i < space.size(); ++i)
    for (std::size_t j = i + 1; j < space.size(); ++j)
      if (!best || space.d(i, j) < *best) best = space.d(i, j);
  return best;
}

// Finite encoding of an infinite sequence: preamble then the cycle repeated forever.
struct EventuallyPeriodicSequence {
  std::vector<Point> preamble;
  std::vector<Point> cycle;

  EventuallyPeriodicSequence(std::vector<Point> pre, std::vector<Point> cyc)
      : preamble(std::move(pre)), cycle(std::move(cyc)) {
    if (cycle.empty()) throw ContractError("sequence cycle must be nonempty");
  }

  const Point& term(std::size_t k) const {
    if (k < preamble.size()) return preamble[k];
    return cycle[(k - preamble.size()) % cycle.size()];
  }
};

inline bool is_eventually_constant(const EventuallyPeriodicSequence& s) {
  for (const auto& p : s.cycle)
    if (p != s.cycle.front()) return false;
  return true;
}

// Cauchy test by the definition with epsilon = least positive distance: every
// pair of cycle points recurs arbitrarily late, so all of them must be closer
// than epsilon.
inline bool is_cauchy(const MetricSpace& space, const EventuallyPeriodicSequence& s) {
  for (const auto& p : s.preamble) space.image().require_index(p);
  std::vector<std::size_t> tail;
  for (const auto& p : s.cycle) tail.push_back(space.image().require_index(p));
  const auto eps = min_positive_distance(space);
  if (!eps) return true;
  for (auto a : tail)
    for (auto b : tail)
      if (!(space.d(a, b) < *eps)) return false;
  return true;
}

}  // namespace digitop
