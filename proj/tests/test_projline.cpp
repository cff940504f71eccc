#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "pglcr/error.hpp"
#include "pglcr/projline.hpp"

using namespace pglcr;

TEST_CASE("projective line indexing") {
  const auto t = gf::FieldTower::for_q(9);
  const ProjectiveLine line(t);
  CHECK(line.size() == 10);
  CHECK(line.infinity() == 9);
  CHECK(line.element(0) == t.zero());
  CHECK(line.element(1) == t.one());
  for (PointIndex x = 1; x < 9; ++x) CHECK(line.element(x - 1) < line.element(x));
  CHECK_FALSE(line.point(t.rho()).has_value());
}

TEST_CASE("apply: identity, affine maps fix infinity, x -> 1/x") {
  const auto t = gf::FieldTower::for_q(7);
  const ProjectiveLine line(t);
  const auto inf = line.infinity();
  for (PointIndex x = 0; x <= inf; ++x) CHECK(apply(line, MobiusMap::identity(), x) == x);

  const auto affine = MobiusMap::make(t, t.from_digits({3}), t.from_digits({5}), t.zero(), t.one());
  CHECK(apply(line, affine, inf) == inf);

  const auto recip = MobiusMap::make(t, t.zero(), t.one(), t.one(), t.zero());
  CHECK(apply(line, recip, 0) == inf);
  CHECK(apply(line, recip, inf) == 0);
  CHECK(apply(line, recip, 1) == 1);
}

TEST_CASE("MobiusMap::make rejects singular or non-subfield matrices") {
  const auto t = gf::FieldTower::for_q(5);
  CHECK_THROWS_AS(MobiusMap::make(t, t.one(), t.one(), t.one(), t.one()), InvalidArgument);
  CHECK_THROWS_AS(MobiusMap::make(t, t.primitive(), t.zero(), t.zero(), t.one()), InvalidArgument);
}

TEST_CASE("from_triple examples") {
  const auto t = gf::FieldTower::for_q(7);
  const ProjectiveLine line(t);
  const auto inf = line.infinity();
  CHECK(from_triple(line, 0, 1, inf) == MobiusMap::identity());
  const auto recip = MobiusMap::make(t, t.zero(), t.one(), t.one(), t.zero());
  CHECK(from_triple(line, inf, 1, 0) == recip);
  CHECK_THROWS_AS(from_triple(line, 2, 2, 3), InvalidArgument);
}

TEST_CASE("from_triple hits its triple; scaling does not change the permutation") {
  for (const std::uint64_t q : {4ull, 5ull, 7ull, 8ull, 9ull}) {
    const auto t = gf::FieldTower::for_q(q);
    const ProjectiveLine line(t);
    const auto inf = line.infinity();
    for (PointIndex a = 0; a <= inf; ++a)
      for (PointIndex b = 0; b <= inf; ++b)
        for (PointIndex c = 0; c <= inf; ++c) {
          if (a == b || b == c || a == c) continue;
          const auto m = from_triple(line, a, b, c);
          REQUIRE(apply(line, m, 0) == a);
          REQUIRE(apply(line, m, 1) == b);
          REQUIRE(apply(line, m, inf) == c);
          const auto perm = to_permutation(line, m);
          for (PointIndex lam = 1; lam < q; ++lam) {
            const auto s = line.element(lam);
            const auto scaled = MobiusMap::make(t, t.mul(s, m.a), t.mul(s, m.b), t.mul(s, m.c),
                                                t.mul(s, m.d));
            REQUIRE(scaled == m);
            REQUIRE(to_permutation(line, scaled) == perm);
          }
          for (PointIndex x = 0; x <= inf; ++x) REQUIRE(perm[x] == apply(line, m, x));
          REQUIRE(to_permutation(line, inverse(t, m)) == perm.inverse());
        }
  }
}

TEST_CASE("enumeration equals the matrix group mod scalars") {
  for (const std::uint64_t q : {2ull, 3ull, 4ull, 5ull, 7ull, 8ull, 9ull}) {
    CAPTURE(q);
    const auto t = gf::FieldTower::for_q(q);
    const ProjectiveLine line(t);
    const GroupTable group(line);
    REQUIRE(group.order() == q * q * q - q);
    std::set<std::vector<PointIndex>> rows;
    for (std::size_t i = 0; i < group.order(); ++i) {
      const auto r = group.row(i);
      rows.emplace(r.begin(), r.end());
    }
    CHECK(rows.size() == group.order()); // pairwise distinct: sharp 3-transitivity
    CHECK(rows == oracle::group_by_matrices(line));
  }
}

TEST_CASE("group orders") {
  CHECK(GroupTable(ProjectiveLine(gf::FieldTower::for_q(2))).order() == 6);
  CHECK(GroupTable(ProjectiveLine(gf::FieldTower::for_q(3))).order() == 24);
  CHECK(GroupTable(ProjectiveLine(gf::FieldTower::for_q(7))).order() == 336);
}

TEST_CASE("sharp 3-transitivity and fixed points, exhaustive for q <= 9") {
  for (const std::uint64_t q : {2ull, 3ull, 4ull, 5ull, 7ull, 8ull, 9ull}) {
    CAPTURE(q);
    const auto t = gf::FieldTower::for_q(q);
    const ProjectiveLine line(t);
    const GroupTable group(line);
    const auto inf = line.infinity();
    // Each ordered triple of images is realized by exactly one element.
    std::vector<int> hits((q + 1) * (q + 1) * (q + 1), 0);
    for (std::size_t i = 0; i < group.order(); ++i) {
      const auto r = group.row(i);
      ++hits[(r[0] * (q + 1) + r[1]) * (q + 1) + r[inf]];
      const auto tr = group.triple(i);
      REQUIRE(r[0] == tr[0]);
      REQUIRE(r[1] == tr[1]);
      REQUIRE(r[inf] == tr[2]);
      REQUIRE(group.index_of(tr) == i);
      if (i > 0) REQUIRE(group.triple(i - 1) < tr);
      const bool identity = fix_count(r) == q + 1;
      if (!identity) REQUIRE(fix_count(r) <= 2);
    }
    for (PointIndex a = 0; a <= inf; ++a)
      for (PointIndex b = 0; b <= inf; ++b)
        for (PointIndex c = 0; c <= inf; ++c) {
          const bool distinct = a != b && b != c && a != c;
          REQUIRE(hits[(a * (q + 1) + b) * (q + 1) + c] == (distinct ? 1 : 0));
        }
  }
}

TEST_CASE("composition closure on random pairs") {
  for (const std::uint64_t q : {7ull, 16ull, 25ull}) {
    const auto t = gf::FieldTower::for_q(q);
    const ProjectiveLine line(t);
    const GroupTable group(line);
    std::mt19937_64 rng(q);
    std::uniform_int_distribution<std::size_t> pick(0, group.order() - 1);
    const auto inf = line.infinity();
    for (int k = 0; k < 1000; ++k) {
      const auto a = group.row(pick(rng));
      const auto b = group.row(pick(rng));
      std::vector<PointIndex> ab(line.size());
      for (std::size_t x = 0; x < ab.size(); ++x) ab[x] = b[a[x]];
      // The composite is determined by the images of 0, 1, inf.
      const auto idx = group.index_of({ab[0], ab[1], ab[inf]});
      const auto row = group.row(idx);
      REQUIRE(std::equal(row.begin(), row.end(), ab.begin()));
    }
  }
}

TEST_CASE("streamed and materialized tables agree") {
  const auto t = gf::FieldTower::for_q(13);
  const ProjectiveLine line(t);
  const GroupTable stored(line, GroupTable::Storage::materialized);
  const GroupTable streamed(line, GroupTable::Storage::streamed);
  CHECK(stored.materialized());
  CHECK_FALSE(streamed.materialized());
  CHECK(stored.checksum() == streamed.checksum());
  std::vector<PointIndex> buf(line.size());
  streamed.for_each(100, 200, [&](std::size_t i, std::span<const PointIndex> row) {
    const auto ref = stored.row(i);
    REQUIRE(std::equal(row.begin(), row.end(), ref.begin()));
  });

  const auto big = gf::FieldTower::for_q(67);
  const ProjectiveLine big_line(big);
  CHECK_FALSE(GroupTable(big_line).materialized());
  CHECK_THROWS_AS(GroupTable(big_line, GroupTable::Storage::materialized), InvalidArgument);
}

TEST_CASE("fix_count") {
  CHECK(fix_count(Permutation::identity(8)) == 8);
  CHECK(fix_count(Permutation({1, 2, 3, 4, 5, 6, 7, 0})) == 0);
}

TEST_CASE("Permutation validation and composition") {
  CHECK_THROWS_AS(Permutation({0, 0, 1}), InvalidArgument);
  CHECK_THROWS_AS(Permutation({0, 3, 1}), InvalidArgument);
  const Permutation u({1, 2, 0}), v({0, 2, 1});
  CHECK(u.then(v) == Permutation({2, 1, 0}));
  CHECK(u.then(u.inverse()) == Permutation::identity(3));
}

TEST_CASE("permutation file format") {
  std::istringstream in("1 4 0 7 2 3 5 6\n\n0 1 2 3 4 5 6 inf\n");
  const auto perms = read_permutations(in, 8);
  REQUIRE(perms.size() == 2);
  CHECK(perms[1] == Permutation::identity(8));
  std::ostringstream out;
  write_permutation(out, perms[0]);
  CHECK(out.str() == "1 4 0 7 2 3 5 6\n");

  std::istringstream bad_len("0 1 2\n");
  CHECK_THROWS_AS(read_permutations(bad_len, 8), InvalidArgument);
  std::istringstream bad_tok("0 1 2 3 4 5 6 x\n");
  CHECK_THROWS_AS(read_permutations(bad_tok, 8), InvalidArgument);
  std::istringstream not_perm("0 0 2 3 4 5 6 7\n");
  CHECK_THROWS_AS(read_permutations(not_perm, 8), InvalidArgument);
}
