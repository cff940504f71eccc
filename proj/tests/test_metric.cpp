#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pglcr/cover.hpp"
#include "pglcr/error.hpp"
#include "pglcr/metric.hpp"
#include "pglcr/witness.hpp"

using namespace pglcr;

namespace {

std::vector<PointIndex> random_perm(std::size_t n, std::mt19937_64& rng) {
  std::vector<PointIndex> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<PointIndex>(i);
  std::shuffle(v.begin(), v.end(), rng);
  return v;
}

} // namespace

TEST_CASE("hamming basics") {
  const std::vector<PointIndex> a{0, 1, 2, 3}, b{1, 0, 2, 3}, c{0, 1, 2};
  CHECK(hamming(a, a) == 0);
  CHECK(hamming(a, b) == 2);
  CHECK_THROWS_AS(hamming(a, c), InvalidArgument);
}

TEST_CASE("d(u, v) = n - fix(u^-1 v) on random pairs") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10000; ++i) {
    const std::size_t n = 2 + rng() % 20;
    const Permutation u(random_perm(n, rng)), v(random_perm(n, rng));
    REQUIRE(hamming(u, v) == n - fix_count(v.then(u.inverse())));
  }
}

TEST_CASE("metric axioms and no distance-1 pairs") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const std::size_t n = 2 + rng() % 12;
    const auto u = random_perm(n, rng), v = random_perm(n, rng), w = random_perm(n, rng);
    REQUIRE(hamming(u, v) == hamming(v, u));
    REQUIRE(hamming(u, w) <= hamming(u, v) + hamming(v, w));
    REQUIRE(hamming(u, v) != 1);
    REQUIRE((hamming(u, v) == 0) == (u == v));
  }
}

TEST_CASE("early-exit scan equals the naive distance") {
  std::mt19937_64 rng(3);
  for (const std::uint64_t q : {4ull, 5ull, 7ull, 8ull}) {
    CAPTURE(q);
    const auto t = gf::FieldTower::for_q(q);
    const ProjectiveLine line(t);
    const GroupTable group(line);
    const auto rows = oracle::rows_of(line);
    const IncidenceIndex index(group);
    std::vector<std::uint16_t> counts(group.order());
    for (int i = 0; i < 250; ++i) {
      const auto v = random_perm(line.size(), rng);
      const auto scan = distance_to_group(v, group);
      REQUIRE(scan.distance == oracle::naive_distance(v, rows));
      REQUIRE(scan.agreements == line.size() - scan.distance);
      REQUIRE(hamming(v, group.row(scan.argmin_index)) == scan.distance);
      // argmin is the lowest index attaining the minimum
      for (std::size_t g = 0; g < scan.argmin_index; ++g) REQUIRE(hamming(v, group.row(g)) > scan.distance);

      const auto inc = index.distance(v, counts);
      REQUIRE(inc.distance == scan.distance);
      REQUIRE(inc.argmin_index == scan.argmin_index);
      for (std::size_t g = 0; g < group.order(); ++g)
        REQUIRE(counts[g] == line.size() - hamming(v, group.row(g)));
    }
  }
}

TEST_CASE("incidence cells have (q-1) entries for every (x, y)") {
  const auto t = gf::FieldTower::for_q(7);
  const ProjectiveLine line(t);
  const GroupTable group(line);
  const IncidenceIndex index(group);
  for (std::size_t x = 0; x < line.size(); ++x)
    for (std::size_t y = 0; y < line.size(); ++y) {
      const auto cell = index.elements(x, y);
      REQUIRE(cell.size() == 42); // |G| / (q+1)
      for (const auto g : cell) REQUIRE(group.row(g)[x] == y);
    }
}

TEST_CASE("distance is left and right G-invariant, exhaustive for q <= 5") {
  for (const std::uint64_t q : {3ull, 4ull, 5ull}) {
    CAPTURE(q);
    const auto t = gf::FieldTower::for_q(q);
    const ProjectiveLine line(t);
    const GroupTable group(line);
    std::mt19937_64 rng(q);
    for (int i = 0; i < 30; ++i) {
      const Permutation v(random_perm(line.size(), rng));
      const auto d = distance_to_group(v, group).distance;
      for (std::size_t g = 0; g < group.order(); ++g) {
        const Permutation gp(std::vector<PointIndex>(group.row(g).begin(), group.row(g).end()));
        REQUIRE(distance_to_group(v.then(gp), group).distance == d);
        REQUIRE(distance_to_group(gp.then(v), group).distance == d);
      }
    }
  }
}

TEST_CASE("parallel scan is independent of the split") {
  const auto t = gf::FieldTower::for_q(13);
  const ProjectiveLine line(t);
  const GroupTable stored(line);
  const GroupTable streamed(line, GroupTable::Storage::streamed);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 40; ++i) {
    const auto v = random_perm(line.size(), rng);
    const auto ref = distance_to_group(v, stored);
    for (const unsigned th : {2u, 3u, 8u}) {
      const auto r = distance_to_group(v, stored, th);
      REQUIRE(r.distance == ref.distance);
      REQUIRE(r.argmin_index == ref.argmin_index);
    }
    const auto s = distance_to_group(v, streamed, 4);
    REQUIRE(s.distance == ref.distance);
    REQUIRE(s.argmin_index == ref.argmin_index);
  }
}

TEST_CASE("expected covering radius") {
  CHECK(expected_cr(2) == 0);
  CHECK(expected_cr(4) == 2);
  CHECK(expected_cr(8) == 6);
  CHECK(expected_cr(7) == 4);
  CHECK(expected_cr(13) == 10);
  CHECK_THROWS_AS(expected_cr(12), InvalidArgument);
}

TEST_CASE("witness distance at q = 7 is 4") {
  const auto t = gf::FieldTower::for_q(7);
  const ProjectiveLine line(t);
  const GroupTable group(line);
  const WitnessContext ctx(line);
  const auto r = distance_to_group(ctx.witness(), group);
  CHECK(r.distance == 4);
  CHECK(r.argmin_index == 22);
}
