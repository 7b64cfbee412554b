#pragma once

// Built-in catalog of small digital images used by the exhaustive verifiers.

#include <string>
#include <vector>

#include "digitop/lattice.hpp"
#include "digitop/metrics.hpp"

namespace digitop {

struct CatalogEntry {
  std::string id;
  ImagePtr image;
};

inline ImagePtr path_image(std::int64_t length) {
  std::vector<Point> pts;
  for (std::int64_t i = 0; i < length; ++i) pts.push_back(Point{i});
  return make_image(1, std::move(pts), 1);
}

// {(1,0),(0,1),(-1,0),(0,-1)} with c_2: a c_2 simple closed curve.
inline ImagePtr diamond_image() {
  return make_image(2, {Point{1, 0}, Point{0, 1}, Point{-1, 0}, Point{0, -1}}, 2);
}

// The 2x2 block with c_2, i.e. a complete graph on four points whose carrier is
// also c_1-connected.
inline ImagePtr square_image() {
  return make_image(2, {Point{0, 0}, Point{1, 0}, Point{0, 1}, Point{1, 1}}, 2);
}

inline ImagePtr disconnected_pair_image() { return make_image(2, {Point{0, 0}, Point{5, 5}}, 1); }

// Ordered by size, ties in declaration order.
inline const std::vector<CatalogEntry>& builtin_catalog() {
  static const std::vector<CatalogEntry> catalog = {
      {"path2", path_image(2)},   {"disconnected2", disconnected_pair_image()},
      {"path3", path_image(3)},   {"path4", path_image(4)},
      {"diamond", diamond_image()}, {"square", square_image()},
  };
  return catalog;
}

inline const CatalogEntry* find_catalog_entry(const std::string& id) {
  for (const auto& e : builtin_catalog())
    if (e.id == id) return &e;
  return nullptr;
}

// l_1, l_2, l_inf, and the shortest-path metric where the image is connected.
inline std::vector<MetricSpec> applicable_metrics(const DigitalImage& image) {
  std::vector<MetricSpec> out = {MetricSpec::l1(), MetricSpec::l2(), MetricSpec::linf()};
  if (is_connected(image)) out.push_back(MetricSpec::shortest_path());
  return out;
}

// Whether the carrier is connected under c_1, whatever the image's own adjacency.
inline bool carrier_c1_connected(const DigitalImage& image) {
  return is_connected(image.with_adjacency(AdjacencySpec{1}));
}

}  // namespace digitop
