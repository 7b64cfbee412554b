#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "digitop/digitop.hpp"
#include "oracles.hpp"

using namespace digitop;

namespace {

constexpr int kTrials = 200;

Point random_point(std::mt19937& rng, std::size_t dim, std::int64_t span) {
  std::uniform_int_distribution<std::int64_t> c(-span, span);
  std::vector<std::int64_t> v(dim);
  for (auto& x : v) x = c(rng);
  return Point(v);
}

MetricSpec random_metric(std::mt19937& rng, const DigitalImage& image) {
  const auto ms = applicable_metrics(image);
  return ms[std::uniform_int_distribution<std::size_t>(0, ms.size() - 1)(rng)];
}

}  // namespace

TEST(Property, AdjacencySymmetricIrreflexiveMonotone) {
  std::mt19937 rng(oracle::kSeed);
  for (int t = 0; t < kTrials * 5; ++t) {
    const std::size_t dim = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    const auto x = random_point(rng, dim, 2), y = random_point(rng, dim, 2);
    for (int u = 1; u <= static_cast<int>(dim); ++u) {
      EXPECT_EQ(cu_adjacent(x, y, u), cu_adjacent(y, x, u));
      EXPECT_FALSE(cu_adjacent(x, x, u));
      if (u > 1 && cu_adjacent(x, y, u - 1)) EXPECT_TRUE(cu_adjacent(x, y, u));
      EXPECT_EQ(cu_adjacent(x, y, u), oracle::adjacent(x, y, u));
    }
  }
}

TEST(Property, ComponentsPartitionAndMatchUnionFind) {
  std::mt19937 rng(oracle::kSeed + 1);
  for (int t = 0; t < kTrials; ++t) {
    const auto img = oracle::random_image(rng, 2, 9, 4);
    const auto comps = connected_components(*img);
    std::size_t total = 0;
    for (const auto& c : comps) {
      total += c.size();
      EXPECT_TRUE(is_connected_subset(*img, c));
    }
    EXPECT_EQ(total, img->size());
    EXPECT_EQ(comps.size(), oracle::component_count(img->points(), img->adjacency().u));
    EXPECT_EQ(is_connected(*img), comps.size() == 1);
  }
}

TEST(Property, MetricAxioms) {
  std::mt19937 rng(oracle::kSeed + 2);
  for (int t = 0; t < kTrials; ++t) {
    const auto img = oracle::random_image(rng, 3, 7, 3);
    const MetricSpace s(img, random_metric(rng, *img));
    const std::size_t n = s.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        EXPECT_EQ(s.d(i, j).is_zero(), i == j);
        EXPECT_EQ(s.d(i, j).raw(), s.d(j, i).raw());
        for (std::size_t k = 0; k < n; ++k)
          EXPECT_LE(s.d(i, k).value(), s.d(i, j).value() + s.d(j, k).value() + 1e-9) << to_string(s.metric());
      }
  }
}

TEST(Property, ShortestPathOneIffAdjacent) {
  std::mt19937 rng(oracle::kSeed + 3);
  int connected_seen = 0;
  for (int t = 0; t < kTrials * 3 && connected_seen < kTrials / 2; ++t) {
    const auto img = oracle::random_image(rng, 2, 8, 3);
    if (!is_connected(*img)) continue;
    ++connected_seen;
    const MetricSpace s(img, MetricSpec::shortest_path());
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = 0; j < s.size(); ++j)
        EXPECT_EQ(s.d(i, j).raw() == 1, cu_adjacent(img->point(i), img->point(j), img->adjacency().u));
  }
  EXPECT_GT(connected_seen, 10);
}

TEST(Property, NormOrdering) {
  std::mt19937 rng(oracle::kSeed + 4);
  for (int t = 0; t < kTrials * 5; ++t) {
    const std::size_t dim = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    const auto x = random_point(rng, dim, 6), y = random_point(rng, dim, 6);
    const double l1 = lp_distance(x, y, MetricKind::L1).value();
    const double l2 = lp_distance(x, y, MetricKind::L2).value();
    const double li = lp_distance(x, y, MetricKind::LInf).value();
    EXPECT_LE(li, l2 + 1e-12);
    EXPECT_LE(l2, l1 + 1e-12);
  }
}

TEST(Property, FixedPointsAndComposition) {
  std::mt19937 rng(oracle::kSeed + 5);
  for (int t = 0; t < kTrials; ++t) {
    const auto img = oracle::random_image(rng, 2, 8, 4);
    const auto f = oracle::random_map(rng, img), g = oracle::random_map(rng, img), h = oracle::random_map(rng, img);
    const auto ff = compose(f, f);
    for (auto i : fixed_points(f).indices) EXPECT_EQ(ff[i], i);
    EXPECT_EQ(compose(compose(f, g), h), compose(f, compose(g, h)));
    const auto id = SelfMap::identity(img);
    EXPECT_EQ(compose(f, id), f);
    EXPECT_EQ(compose(id, f), f);
  }
}

TEST(Property, GeraghtyImpliesContractionAndWusAgrees) {
  std::mt19937 rng(oracle::kSeed + 6);
  for (int t = 0; t < kTrials; ++t) {
    const auto img = oracle::random_image(rng, 2, 6, 4);
    const MetricSpace s(img, random_metric(rng, *img));
    // Bias towards shrinking maps: half the trials use a map with a small range.
    auto f = oracle::random_map(rng, img);
    if (t % 2 == 0) {
      std::vector<Index> table(img->size());
      const Index a = f[0], b = f[img->size() - 1];
      for (std::size_t i = 0; i < table.size(); ++i) table[i] = (rng() & 1) ? a : b;
      f = SelfMap(img, table);
    }
    const bool g = is_geraghty(f, s).holds;
    const auto c = contraction_modulus(f, s);
    EXPECT_EQ(g, c.is_contraction);
    EXPECT_EQ(is_wus_contraction(f, s).holds, g);
    const auto table = oracle::distance_table(img->points(), img->adjacency().u, s.metric().kind);
    EXPECT_EQ(oracle::wus_literal(table, oracle::table_of(f)), g);
  }
}

TEST(Property, ContractionOrbitsReachFixedPointWithinBound) {
  std::mt19937 rng(oracle::kSeed + 7);
  int contractions = 0;
  for (int t = 0; t < kTrials * 5; ++t) {
    const auto img = oracle::random_image(rng, 2, 6, 4);
    const MetricSpace s(img, random_metric(rng, *img));
    const auto f = oracle::random_map(rng, img);
    if (!contraction_modulus(f, s).is_contraction) continue;
    ++contractions;
    const std::size_t bound = realized_distances(s).size() + 1;
    std::optional<std::size_t> target;
    for (std::size_t x = 0; x < f.size(); ++x) {
      const auto o = orbit_from(f, x, bound);
      ASSERT_TRUE(o.reached_fixed_point);
      if (target) EXPECT_EQ(*target, *o.fixed_point);
      target = o.fixed_point;
    }
    EXPECT_EQ(fixed_points(f).size(), 1u);
  }
  EXPECT_GT(contractions, 5);
}

TEST(Property, CoincidenceClassesPartition) {
  std::mt19937 rng(oracle::kSeed + 8);
  for (int t = 0; t < kTrials; ++t) {
    const auto img = oracle::random_image(rng, 2, 8, 3);
    const MapPair p(oracle::random_map(rng, img), oracle::random_map(rng, img));
    const auto c = coincidence_points(p);
    std::size_t total = 0;
    for (const auto& [v, members] : c.classes) {
      total += members.size();
      for (auto x : members) {
        EXPECT_EQ(p.f[x], v);
        EXPECT_EQ(p.g[x], v);
      }
    }
    EXPECT_EQ(total, c.points.size());
    for (std::size_t x = 0; x < p.f.size(); ++x)
      EXPECT_EQ(std::count(c.points.begin(), c.points.end(), x), p.f[x] == p.g[x] ? 1 : 0);
  }
}

TEST(Property, CompatibilityNotionsCoincide) {
  std::mt19937 rng(oracle::kSeed + 9);
  for (int t = 0; t < kTrials; ++t) {
    const auto img = oracle::random_image(rng, 2, 5, 3);
    const MetricSpace s(img, MetricSpec::l1());
    // Share values on a random subset so coincidences are common.
    auto f = oracle::random_map(rng, img);
    auto gt = f.table();
    for (auto& v : gt)
      if (rng() % 3 == 0) v = static_cast<Index>(rng() % img->size());
    const MapPair p(f, SelfMap(img, gt));
    const bool c = is_compatible(p, s);
    EXPECT_EQ(c, is_compatible_type_k(p, s));
    EXPECT_EQ(c, is_compatible_type_r(p, s));
    EXPECT_EQ(c, oracle::compatible_by_sequences(oracle::table_of(p.f), oracle::table_of(p.g), oracle::Kind::Plain));
  }
}

TEST(Property, ExpansiveBijectionHasNonExpandingInverse) {
  std::mt19937 rng(oracle::kSeed + 10);
  int seen = 0;
  for (int t = 0; t < kTrials * 5; ++t) {
    const auto img = oracle::random_image(rng, 2, 6, 4);
    const MetricSpace s(img, random_metric(rng, *img));
    std::vector<Index> perm(img->size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const SelfMap f(img, perm);
    if (!is_expansive(f, s).holds) continue;
    ++seen;
    EXPECT_LE(contraction_modulus(inverse(f), s).modulus.value, 1);
  }
  EXPECT_GT(seen, 10);
}

TEST(Property, UnitWeightAdmitsEverything) {
  std::mt19937 rng(oracle::kSeed + 11);
  for (int t = 0; t < kTrials; ++t) {
    const auto img = oracle::random_image(rng, 2, 7, 4);
    const auto one = WeightFunction::constant(img, 1);
    const auto f = oracle::random_map(rng, img), g = oracle::random_map(rng, img);
    EXPECT_TRUE(is_alpha_admissible(f, one).holds);
    EXPECT_TRUE(is_alpha_beta_admissible_wrt(f, g, one, one).holds);
  }
}

TEST(Property, EnumerationIndexRoundTrip) {
  std::mt19937 rng(oracle::kSeed + 12);
  for (int t = 0; t < kTrials; ++t) {
    const auto img = oracle::random_image(rng, 2, 7, 4);
    const MapSpace ms(img);
    const auto f = oracle::random_map(rng, img);
    EXPECT_EQ(ms.at(ms.index_of(f)), f);
  }
}

TEST(Property, ContinuityDefinitionsAgree) {
  std::mt19937 rng(oracle::kSeed + 13);
  for (int t = 0; t < kTrials; ++t) {
    const auto img = oracle::random_image(rng, 2, 7, 3);
    const auto f = oracle::random_map(rng, img);
    const bool a = is_continuous_adjacency(*img, f);
    EXPECT_EQ(a, is_continuous_subsets(*img, f));
    EXPECT_EQ(a, oracle::continuous_by_subsets(img->points(), img->adjacency().u, oracle::table_of(f)));
  }
}
