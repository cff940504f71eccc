#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pglcr/metric.hpp"
#include "pglcr/projline.hpp"

namespace pglcr {

// g.v for the unique g in G with g(v(0)) = 0, g(v(1)) = 1, g(v(inf)) = inf.
// The result fixes 0, 1 and inf and has the same distance to G as v.
Permutation stabilize_triple(const ProjectiveLine& line, const Permutation& v);

// The exact search ranges over permutations fixing 0, 1 and inf, ordered
// lexicographically by their images on the free points 2..q-1.
std::uint64_t candidate_count(std::uint32_t q);
Permutation candidate_from_rank(std::uint32_t q, std::uint64_t rank);
std::uint64_t candidate_rank(const Permutation& v);

struct SearchCheckpoint {
  std::uint32_t q = 0;
  std::uint64_t next_candidate_rank = 0;
  std::size_t current_max = 0;
  std::optional<Permutation> witness_so_far;
  double elapsed_s = 0;
};

enum class SearchStrategy {
  // Depth-first over prefixes with per-element agreement counters; a prefix is
  // dropped once some g already agrees with it too often to beat the max.
  prefix_dfs,
  // One candidate at a time: scan G with early exit, abandon the candidate as
  // soon as some g is closer than the running max.
  candidate_scan,
};

struct SearchOptions {
  unsigned threads = 1;
  SearchStrategy strategy = SearchStrategy::prefix_dfs;
  // Stop after this many candidates; the result is then a lower bound.
  std::optional<std::uint64_t> budget;
  // Resume state; next_candidate_rank must be a job boundary.
  std::optional<SearchCheckpoint> resume;
  // Invoked from the merging thread whenever another `checkpoint_every`
  // candidates are settled in rank order.
  std::function<void(const SearchCheckpoint&)> on_checkpoint;
  std::uint64_t checkpoint_every = 10'000'000;
};

struct SearchReport {
  std::uint32_t q = 0;
  bool complete = false; // false: covering_radius is only a lower bound
  std::size_t covering_radius = 0;
  Permutation witness_of_max;
  std::uint64_t permutations_scanned = 0; // candidates settled, this run and resumed ones
  std::uint64_t total_candidates = 0;
  std::uint64_t leaves_evaluated = 0;
  std::uint64_t start_rank = 0;
  std::uint64_t next_candidate_rank = 0;
  double wall_time_s = 0;
  SearchStrategy strategy = SearchStrategy::prefix_dfs;
};

// max over S_{q+1} of d(v, G). Needs a materialized group table.
SearchReport exact_covering_radius(const GroupTable& group, const SearchOptions& options = {});

// Candidates per job for a given q; resume ranks must be multiples of this.
std::uint64_t search_job_size(std::uint32_t q);

struct SampleReport {
  std::uint32_t q = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> histogram; // index = distance
  std::size_t max_observed = 0;
  std::size_t expected_cr = 0;
  std::uint64_t violations = 0; // samples with distance > expected_cr
  Permutation farthest;          // first sample attaining max_observed
};

// Histogram of d(v, G) over uniformly random v. Trial i draws from its own
// SplitMix64 stream derived from (seed, i), so the result does not depend on
// the thread count.
SampleReport sample_distances(const GroupTable& group, std::uint64_t trials, std::uint64_t seed,
                              unsigned threads = 1);

// Uniform random permutation of n points for trial `trial` of `seed`.
Permutation sample_permutation(std::size_t n, std::uint64_t seed, std::uint64_t trial);

} // namespace pglcr
