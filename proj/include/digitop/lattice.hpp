#pragma once

// Lattice points, digital images with c_u adjacency, and graph connectivity.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "digitop/error.hpp"

namespace digitop {

// A point of Z^n. Ordering is lexicographic on the coordinates.
struct Point {
  std::vector<std::int64_t> coords;

  Point() = default;
  Point(std::initializer_list<std::int64_t> c) : coords(c) {}
  explicit Point(std::vector<std::int64_t> c) : coords(std::move(c)) {}

  std::size_t dim() const { return coords.size(); }
  std::int64_t operator[](std::size_t i) const { return coords[i]; }

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

inline std::string to_string(const Point& p) {
  std::string out = "(";
  for (std::size_t i = 0; i < p.dim(); ++i) {
    if (i) out += ",";
    out += std::to_string(p[i]);
  }
  return out + ")";
}

// The c_u adjacency on Z^n.
struct AdjacencySpec {
  int u = 1;
  friend bool operator==(const AdjacencySpec&, const AdjacencySpec&) = default;
};

inline std::string to_string(const AdjacencySpec& a) { return "c_" + std::to_string(a.u); }

// x <->_{c_u} y: x != y, at most u coordinates differ, each by exactly 1.
inline bool cu_adjacent(const Point& x, const Point& y, int u) {
  if (x.dim() != y.dim())
    throw ContractError("dimension mismatch: " + to_string(x) + " vs " + to_string(y));
  if (u < 1 || static_cast<std::size_t>(u) > x.dim())
    throw ContractError("adjacency c_" + std::to_string(u) + " out of range for Z^" +
                        std::to_string(x.dim()));
  int differing = 0;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const auto delta = x[i] - y[i];
    if (delta == 0) continue;
    if (delta != 1 && delta != -1) return false;
    ++differing;
  }
  return differing >= 1 && differing <= u;
}

// A finite digital image (X, c_u). Points are kept in lexicographic order and
// addressed by index; that order is the canonical order used everywhere else.
class DigitalImage {
 public:
  DigitalImage(std::size_t dimension, std::vector<Point> points, AdjacencySpec adjacency)
      : dim_(dimension), points_(std::move(points)), adjacency_(adjacency) {
    if (dim_ < 1) throw ParseError("dimension must be at least 1");
    if (points_.empty()) throw ParseError("digital image must be nonempty");
    if (adjacency_.u < 1 || static_cast<std::size_t>(adjacency_.u) > dim_)
      throw ParseError("adjacency c_" + std::to_string(adjacency_.u) + " requires 1 <= u <= " +
                       std::to_string(dim_));
    for (const auto& p : points_)
      if (p.dim() != dim_)
        throw ParseError("point " + to_string(p) + " does not have dimension " +
                         std::to_string(dim_));
    std::sort(points_.begin(), points_.end());
    auto dup = std::adjacent_find(points_.begin(), points_.end());
    if (dup != points_.end()) throw ParseError("duplicate point " + to_string(*dup));

    const std::size_t n = points_.size();
    adjacent_.assign(n * n, false);
    neighbors_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (cu_adjacent(points_[i], points_[j], adjacency_.u)) {
          adjacent_[i * n + j] = adjacent_[j * n + i] = true;
          neighbors_[i].push_back(j);
          neighbors_[j].push_back(i);
        }
  }

  std::size_t dimension() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  const AdjacencySpec& adjacency() const { return adjacency_; }
  const std::vector<Point>& points() const { return points_; }
  const Point& point(std::size_t i) const { return points_[i]; }

  std::optional<std::size_t> index_of(const Point& p) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), p);
    if (it == points_.end() || *it != p) return std::nullopt;
    return static_cast<std::size_t>(it - points_.begin());
  }
  bool contains(const Point& p) const { return index_of(p).has_value(); }

  std::size_t require_index(const Point& p) const {
    auto i = index_of(p);
    if (!i) throw ContractError("point " + to_string(p) + " is not in the image");
    return *i;
  }

  bool adjacent(std::size_t i, std::size_t j) const { return adjacent_[i * size() + j]; }
  // i == j or adjacent.
  bool adjacent_or_equal(std::size_t i, std::size_t j) const { return i == j || adjacent(i, j); }
  const std::vector<std::size_t>& neighbor_indices(std::size_t i) const { return neighbors_[i]; }

  // Same carrier with a different c_u adjacency.
  DigitalImage with_adjacency(AdjacencySpec adjacency) const {
    return DigitalImage(dim_, points_, adjacency);
  }

  friend bool operator==(const DigitalImage& a, const DigitalImage& b) {
    return a.dim_ == b.dim_ && a.adjacency_ == b.adjacency_ && a.points_ == b.points_;
  }

 private:
  std::size_t dim_;
  std::vector<Point> points_;
  AdjacencySpec adjacency_;
  std::vector<bool> adjacent_;
  std::vector<std::vector<std::size_t>> neighbors_;
};

using ImagePtr = std::shared_ptr<const DigitalImage>;

inline ImagePtr make_image(std::size_t dimension, std::vector<Point> points, int u) {
  return std::make_shared<const DigitalImage>(dimension, std::move(points), AdjacencySpec{u});
}

inline std::vector<Point> neighbors(const DigitalImage& image, const Point& x) {
  std::vector<Point> out;
  for (auto j : image.neighbor_indices(image.require_index(x))) out.push_back(image.point(j));
  return out;
}

namespace detail {

// Breadth-first search restricted to `member`; returns the component id of every
// member index (-1 for non-members) and the number of components.
inline std::pair<std::vector<int>, int> label_components(const DigitalImage& image,
                                                         const std::vector<bool>& member) {
  const std::size_t n = image.size();
  std::vector<int> label(n, -1);
  int count = 0;
  std::queue<std::size_t> frontier;
  for (std::size_t s = 0; s < n; ++s) {
    if (!member[s] || label[s] >= 0) continue;
    label[s] = count;
    frontier.push(s);
    while (!frontier.empty()) {
      const auto v = frontier.front();
      frontier.pop();
      for (auto w : image.neighbor_indices(v))
        if (member[w] && label[w] < 0) {
          label[w] = count;
          frontier.push(w);
        }
    }
    ++count;
  }
  return {std::move(label), count};
}

}  // namespace detail

// Connectivity of the induced subgraph on a set of indices. Empty set is connected.
inline bool is_connected_indices(const DigitalImage& image, std::span<const std::size_t> subset) {
  std::vector<bool> member(image.size(), false);
  for (auto i : subset) member[i] = true;
  return detail::label_components(image, member).second <= 1;
}

inline bool is_connected_subset(const DigitalImage& image, std::span<const Point> subset) {
  std::vector<std::size_t> idx;
  idx.reserve(subset.size());
  for (const auto& p : subset) idx.push_back(image.require_index(p));
  return is_connected_indices(image, idx);
}

inline bool is_connected(const DigitalImage& image) {
  return detail::label_components(image, std::vector<bool>(image.size(), true)).second == 1;
}

// Maximal connected subsets, each sorted, blocks ordered by their least point.
inline std::vector<std::vector<Point>> connected_components(const DigitalImage& image) {
  auto [label, count] = detail::label_components(image, std::vector<bool>(image.size(), true));
  std::vector<std::vector<Point>> blocks(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < image.size(); ++i)
    blocks[static_cast<std::size_t>(label[i])].push_back(image.point(i));
  return blocks;
}

}  // namespace digitop
