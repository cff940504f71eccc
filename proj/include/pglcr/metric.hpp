#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pglcr/projline.hpp"

namespace pglcr {

// Number of positions where u and v differ. Throws on length mismatch.
std::size_t hamming(std::span<const PointIndex> u, std::span<const PointIndex> v);
inline std::size_t hamming(const Permutation& u, const Permutation& v) {
  return hamming(u.images(), v.images());
}

struct DistanceResult {
  std::size_t distance = 0;
  std::size_t argmin_index = 0; // lowest group index attaining distance
  std::size_t agreements = 0;   // degree - distance
};

// Exact d(v, G). Scans group elements in index order and abandons an element
// once its disagreements reach the best distance found so far. With threads > 1
// the index range is split and merged by (distance, index); the result does not
// depend on the split.
DistanceResult distance_to_group(std::span<const PointIndex> v, const GroupTable& group,
                                 unsigned threads = 1);
inline DistanceResult distance_to_group(const Permutation& v, const GroupTable& group,
                                        unsigned threads = 1) {
  return distance_to_group(v.images(), group, threads);
}

// For each (point x, image y), the indices of group elements g with g(x) = y.
// Summing over x gives every agreement count |{x : v(x) = g(x)}| in order(G)
// steps. Needs a materialized table.
class IncidenceIndex {
public:
  explicit IncidenceIndex(const GroupTable& group);

  const GroupTable& group() const { return *group_; }
  std::size_t degree() const { return degree_; }

  std::span<const std::uint32_t> elements(std::size_t x, std::size_t y) const {
    const std::size_t cell = x * degree_ + y;
    return {entries_.data() + cell * per_cell_, per_cell_};
  }

  // counts must have order(G) entries; overwritten.
  void agreement_counts(std::span<const PointIndex> v, std::span<std::uint16_t> counts) const;

  // Same contract as distance_to_group; counts is scratch of size order(G).
  DistanceResult distance(std::span<const PointIndex> v, std::span<std::uint16_t> counts) const;

private:
  const GroupTable* group_;
  std::size_t degree_;
  std::size_t per_cell_;
  std::vector<std::uint32_t> entries_;
};

// Covering radius of PGL_2(q): q - 2 for even q, q - 3 for odd q.
// Throws InvalidArgument unless q is a prime power.
std::size_t expected_cr(std::uint64_t q);

} // namespace pglcr
