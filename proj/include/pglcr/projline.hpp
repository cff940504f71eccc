#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "pglcr/gf.hpp"

namespace pglcr {

// Point of the projective line over GF(q): 0..q-1 are the subfield elements
// in increasing field-index order, q is infinity.
using PointIndex = std::uint16_t;

// Permutation of {0, ..., n-1} stored as its image array.
class Permutation {
public:
  Permutation() = default;
  // Throws InvalidArgument unless images is a bijection on [0, size).
  explicit Permutation(std::vector<PointIndex> images);

  static Permutation identity(std::size_t n);

  std::size_t size() const { return images_.size(); }
  PointIndex operator[](std::size_t i) const { return images_[i]; }
  std::span<const PointIndex> images() const { return images_; }

  Permutation inverse() const;
  // x -> next(this(x)).
  Permutation then(const Permutation& next) const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

private:
  std::vector<PointIndex> images_;
};

std::size_t fix_count(std::span<const PointIndex> images);
inline std::size_t fix_count(const Permutation& v) { return fix_count(v.images()); }

// Omega = GF(q) u {inf} on top of a field tower. Holds a reference to the tower.
class ProjectiveLine {
public:
  explicit ProjectiveLine(const gf::FieldTower& tower);

  const gf::FieldTower& tower() const { return *tower_; }
  std::uint32_t q() const { return tower_->q(); }
  std::size_t size() const { return std::size_t{q()} + 1; }
  PointIndex infinity() const { return static_cast<PointIndex>(q()); }

  // Field element for a finite point.
  gf::Element element(PointIndex x) const { return elements_[x]; }
  // Finite point for a subfield element, nullopt otherwise.
  std::optional<PointIndex> point(gf::Element z) const;

  // GF(q) arithmetic on finite point indices, tabulated from the tower.
  PointIndex add(PointIndex x, PointIndex y) const { return add_[x * q() + y]; }
  PointIndex mul(PointIndex x, PointIndex y) const { return mul_[x * q() + y]; }
  PointIndex inv(PointIndex x) const { return inv_[x]; } // x != 0

private:
  const gf::FieldTower* tower_;
  std::vector<gf::Element> elements_;
  std::vector<std::int32_t> point_of_;
  std::vector<PointIndex> add_, mul_, inv_;
};

// x -> (a x + b) / (c x + d) over GF(q), normalized so that the first nonzero
// entry of (a, b, c, d) is 1.
struct MobiusMap {
  gf::Element a, b, c, d;

  // Normalizes; throws InvalidArgument when ad - bc = 0 or an entry is not in GF(q).
  static MobiusMap make(const gf::FieldTower& t, gf::Element a, gf::Element b, gf::Element c,
                        gf::Element d);
  static MobiusMap identity() {
    return {gf::Element{1}, gf::Element{0}, gf::Element{0}, gf::Element{1}};
  }

  friend bool operator==(const MobiusMap&, const MobiusMap&) = default;
};

PointIndex apply(const ProjectiveLine& line, const MobiusMap& m, PointIndex x);

// Writes the action of m on every point of the line into out.
void fill_images(const ProjectiveLine& line, const MobiusMap& m, std::span<PointIndex> out);

// The unique map sending 0 -> alpha, 1 -> beta, inf -> gamma.
MobiusMap from_triple(const ProjectiveLine& line, PointIndex alpha, PointIndex beta,
                      PointIndex gamma);

MobiusMap inverse(const gf::FieldTower& t, const MobiusMap& m);

Permutation to_permutation(const ProjectiveLine& line, const MobiusMap& m);

using Triple = std::array<PointIndex, 3>;

// PGL_2(q) acting on Omega, one element per ordered triple (alpha, beta, gamma)
// of distinct points in lexicographic order: element i is from_triple(triple(i)).
// Rows are materialized for q <= kMaterializeLimit and streamed otherwise;
// both paths yield identical rows in identical order.
class GroupTable {
public:
  static constexpr std::uint32_t kMaterializeLimit = 64;

  enum class Storage { automatic, materialized, streamed };

  explicit GroupTable(const ProjectiveLine& line, Storage storage = Storage::automatic);

  const ProjectiveLine& line() const { return *line_; }
  std::size_t order() const { return order_; }
  std::size_t degree() const { return degree_; }
  bool materialized() const { return !rows_.empty(); }

  Triple triple(std::size_t index) const;
  std::size_t index_of(const Triple& t) const;
  MobiusMap map(std::size_t index) const;

  // Materialized tables only.
  std::span<const PointIndex> row(std::size_t index) const {
    return {rows_.data() + index * degree_, degree_};
  }
  // Works for both storage modes.
  void fill_row(std::size_t index, std::span<PointIndex> out) const;

  // Calls fn(index, row) for index in [begin, end) in increasing order.
  template <typename Fn>
  void for_each(std::size_t begin, std::size_t end, Fn&& fn) const {
    if (materialized()) {
      for (std::size_t i = begin; i < end; ++i) fn(i, row(i));
      return;
    }
    std::vector<PointIndex> buf(degree_);
    for (std::size_t i = begin; i < end; ++i) {
      fill_row(i, buf);
      fn(i, std::span<const PointIndex>(buf));
    }
  }

  // FNV-1a over all rows in enumeration order.
  std::uint64_t checksum() const;

private:
  const ProjectiveLine* line_;
  std::size_t degree_;
  std::size_t order_;
  std::vector<PointIndex> rows_;
};

// One permutation per line, space separated; "inf" is accepted for index n-1.
std::vector<Permutation> read_permutations(std::istream& in, std::size_t n);
void write_permutation(std::ostream& out, const Permutation& v);

} // namespace pglcr
