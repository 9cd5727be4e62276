#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "birsym/fin_ab_group.hpp"

using namespace birsym;

TEST_CASE("group construction and element arithmetic") {
  CHECK_THROWS_AS(FinAbGroup({1}), InputError);
  CHECK_THROWS_AS(FinAbGroup({4, 6}), InputError);  // 4 does not divide 6
  FinAbGroup g({2, 6});
  CHECK(g.order() == 12);
  CHECK(g.exponent() == 6);
  CHECK(g.rank() == 2);
  GroupElement a = g.reduce({1, 5});
  GroupElement b = g.reduce({1, 3});
  CHECK(g.add(a, b) == g.reduce({0, 2}));
  CHECK(g.sub(a, a) == g.zero());
  CHECK(g.neg(a) == g.reduce({1, 1}));
  CHECK(g.elementOrder(a) == 6);
  CHECK(g.scaled(a, 3) == g.reduce({1, 3}));
  CHECK_THROWS_AS(g.add(a, GroupElement{{1}}), InputError);

  FinAbGroup t;
  CHECK(t.isTrivial());
  CHECK(t.order() == 1);
  CHECK(t.allElements().size() == 1);
  CHECK(FinAbGroup::cyclic(1).isTrivial());
}

TEST_CASE("quotientByElements: frozen examples") {
  FinAbGroup c5 = FinAbGroup::cyclic(5);
  // C5 / <1> = 0
  CHECK(quotientByElements(c5, {c5.reduce({1})}).group().isTrivial());
  // C5 / <> = C5, identity projection
  QuotientMap idq = quotientByElements(c5, {});
  CHECK(idq.group() == c5);
  for (std::int64_t x = 0; x < 5; ++x) {
    GroupElement e = c5.reduce({x});
    GroupElement p = idq.project(e);
    CHECK(c5.elementOrder(e) == idq.group().elementOrder(p));
  }

  // (C5+C5) / <(4,1)> = C5 with project(1,0) a generator
  FinAbGroup c55({5, 5});
  QuotientMap q = quotientByElements(c55, {c55.reduce({4, 1})});
  CHECK(q.group() == FinAbGroup::cyclic(5));
  CHECK(q.group().elementOrder(q.project(c55.reduce({1, 0}))) == 5);
  CHECK(q.group().isZero(q.project(c55.reduce({4, 1}))));
}

TEST_CASE("quotient projection is additive, surjective, kills generators") {
  std::mt19937_64 rng(3);
  std::vector<std::vector<std::int64_t>> groups = {{2}, {4}, {2, 2}, {3, 9}, {2, 4}, {5, 5}, {12}};
  for (const auto& fs : groups) {
    FinAbGroup g(fs);
    std::vector<GroupElement> all = g.allElements();
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<GroupElement> gens;
      std::uniform_int_distribution<int> howMany(0, 2);
      int k = howMany(rng);
      for (int i = 0; i < k; ++i) gens.push_back(all[pick(rng)]);
      QuotientMap q = quotientByElements(g, gens);
      for (const GroupElement& gen : gens) CHECK(q.group().isZero(q.project(gen)));
      // additivity on random pairs
      for (int t = 0; t < 10; ++t) {
        GroupElement x = all[pick(rng)], y = all[pick(rng)];
        CHECK(q.project(g.add(x, y)) == q.group().add(q.project(x), q.project(y)));
      }
      // surjectivity + order: image set size equals quotient order
      std::set<std::vector<std::int64_t>> image;
      for (const GroupElement& x : all) image.insert(q.project(x).c);
      CHECK(std::int64_t(image.size()) == q.group().order());
    }
  }
}

TEST_CASE("subgroupGenerated") {
  FinAbGroup c12 = FinAbGroup::cyclic(12);
  auto [h, images] = subgroupGenerated(c12, {c12.reduce({4}), c12.reduce({6})});
  // <4,6> = <2> = C6
  CHECK(h == FinAbGroup::cyclic(6));
  REQUIRE(images.size() == 2);
  CHECK(h.elementOrder(images[0]) == 3);
  CHECK(h.elementOrder(images[1]) == 2);

  auto [z, zi] = subgroupGenerated(c12, {c12.zero()});
  CHECK(z.isTrivial());
  CHECK(zi.size() == 1);

  auto [full, fi] = subgroupGenerated(c12, {c12.reduce({7})});
  CHECK(full == c12);
  CHECK(full.elementOrder(fi[0]) == 12);
}

TEST_CASE("normalizedDirectSum") {
  auto [g, gens] = normalizedDirectSum({2, 3});
  CHECK(g == FinAbGroup::cyclic(6));
  REQUIRE(gens.size() == 2);
  CHECK(g.elementOrder(gens[0]) == 2);
  CHECK(g.elementOrder(gens[1]) == 3);
  CHECK(g.elementOrder(g.add(gens[0], gens[1])) == 6);

  auto [h, hg] = normalizedDirectSum({6, 4});
  CHECK(h == FinAbGroup({2, 12}));

  auto [t, tg] = normalizedDirectSum({1, 1});
  CHECK(t.isTrivial());
  CHECK(tg.size() == 2);

  auto [chain, cg] = normalizedDirectSum({5, 5});
  CHECK(chain == FinAbGroup({5, 5}));
}
