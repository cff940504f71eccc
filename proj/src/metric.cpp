#include "pglcr/metric.hpp"

#include <algorithm>
#include <thread>

#include "pglcr/error.hpp"
#include "pglcr/gf.hpp"

namespace pglcr {

std::size_t hamming(std::span<const PointIndex> u, std::span<const PointIndex> v) {
  if (u.size() != v.size()) throw InvalidArgument("hamming: length mismatch");
  std::size_t d = 0;
  for (std::size_t i = 0; i < u.size(); ++i) d += u[i] != v[i];
  return d;
}

namespace {

DistanceResult scan_range(std::span<const PointIndex> v, const GroupTable& group,
                          std::size_t begin, std::size_t end) {
  const std::size_t n = v.size();
  DistanceResult best{n + 1, begin, 0};
  group.for_each(begin, end, [&](std::size_t index, std::span<const PointIndex> row) {
    std::size_t miss = 0;
    for (std::size_t x = 0; x < n; ++x) {
      miss += row[x] != v[x];
      if (miss >= best.distance) return;
    }
    best.distance = miss;
    best.argmin_index = index;
  });
  best.agreements = n - best.distance;
  return best;
}

} // namespace

DistanceResult distance_to_group(std::span<const PointIndex> v, const GroupTable& group,
                                 unsigned threads) {
  if (v.size() != group.degree()) throw InvalidArgument("permutation degree does not match group");
  const std::size_t order = group.order();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(order)));
  if (threads == 1) return scan_range(v, group, 0, order);

  std::vector<DistanceResult> parts(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      const std::size_t b = order * t / threads, e = order * (t + 1) / threads;
      parts[t] = scan_range(v, group, b, e);
    });
  }
  for (auto& th : pool) th.join();
  DistanceResult best = parts.front();
  for (const auto& r : parts)
    if (r.distance < best.distance) best = r; // parts are in index order
  return best;
}

IncidenceIndex::IncidenceIndex(const GroupTable& group)
    : group_(&group), degree_(group.degree()) {
  if (!group.materialized()) throw InvalidArgument("incidence index needs a materialized group");
  const std::size_t q = degree_ - 1;
  per_cell_ = q * (q - 1);
  entries_.resize(degree_ * degree_ * per_cell_);
  std::vector<std::size_t> fill(degree_ * degree_, 0);
  for (std::size_t g = 0; g < group.order(); ++g) {
    const auto row = group.row(g);
    for (std::size_t x = 0; x < degree_; ++x) {
      const std::size_t cell = x * degree_ + row[x];
      entries_[cell * per_cell_ + fill[cell]++] = static_cast<std::uint32_t>(g);
    }
  }
}

void IncidenceIndex::agreement_counts(std::span<const PointIndex> v,
                                      std::span<std::uint16_t> counts) const {
  std::fill(counts.begin(), counts.end(), 0);
  for (std::size_t x = 0; x < degree_; ++x)
    for (const auto g : elements(x, v[x])) ++counts[g];
}

DistanceResult IncidenceIndex::distance(std::span<const PointIndex> v,
                                        std::span<std::uint16_t> counts) const {
  if (v.size() != degree_) throw InvalidArgument("permutation degree does not match group");
  agreement_counts(v, counts);
  const auto it = std::max_element(counts.begin(), counts.end());
  DistanceResult r;
  r.agreements = *it;
  r.distance = degree_ - r.agreements;
  r.argmin_index = static_cast<std::size_t>(it - counts.begin());
  return r;
}

std::size_t expected_cr(std::uint64_t q) {
  std::uint32_t p = 0, f = 0;
  if (!gf::prime_power(q, p, f)) throw InvalidArgument(std::to_string(q) + " is not a prime power");
  return q % 2 == 0 ? q - 2 : q - 3;
}

} // namespace pglcr
