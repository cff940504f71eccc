#include "pglcr/cover.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>

#include "pglcr/error.hpp"

namespace pglcr {

Permutation stabilize_triple(const ProjectiveLine& line, const Permutation& v) {
  if (v.size() != line.size()) throw InvalidArgument("permutation degree does not match the line");
  if (line.size() < 3) throw InvalidArgument("stabilize_triple needs at least 3 points");
  const PointIndex inf = line.infinity();
  const MobiusMap to_v = from_triple(line, v[0], v[1], v[inf]);
  const Permutation g = to_permutation(line, inverse(line.tower(), to_v));
  return v.then(g);
}

namespace {

std::uint64_t factorial(std::uint64_t k) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 2; i <= k; ++i) r *= i;
  return r;
}

std::uint32_t free_count(std::uint32_t q) { return q >= 2 ? q - 2 : 0; }

// Length of the image prefix that identifies a job.
std::uint32_t job_prefix(std::uint32_t q) {
  const std::uint32_t m = free_count(q);
  return m > 8 ? m - 8 : std::min<std::uint32_t>(m, 2);
}

} // namespace

std::uint64_t candidate_count(std::uint32_t q) {
  if (q > 22) throw InvalidArgument("candidate count overflows for q = " + std::to_string(q));
  return factorial(free_count(q));
}

std::uint64_t search_job_size(std::uint32_t q) { return factorial(free_count(q) - job_prefix(q)); }

Permutation candidate_from_rank(std::uint32_t q, std::uint64_t rank) {
  const std::uint32_t m = free_count(q);
  if (rank >= candidate_count(q)) throw InvalidArgument("candidate rank out of range");
  std::vector<PointIndex> pool;
  for (std::uint32_t i = 0; i < m; ++i) pool.push_back(static_cast<PointIndex>(i + 2));
  std::vector<PointIndex> images(std::size_t{q} + 1);
  images[0] = 0;
  if (q >= 1) images[1] = 1;
  images[q] = static_cast<PointIndex>(q);
  for (std::uint32_t i = 0; i < m; ++i) {
    const std::uint64_t block = factorial(m - 1 - i);
    const std::uint64_t k = rank / block;
    rank %= block;
    images[2 + i] = pool[k];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(k));
  }
  return Permutation(std::move(images));
}

std::uint64_t candidate_rank(const Permutation& v) {
  const auto q = static_cast<std::uint32_t>(v.size() - 1);
  if (v[0] != 0 || v[1] != 1 || v[q] != q)
    throw InvalidArgument("candidate must fix 0, 1 and infinity");
  const std::uint32_t m = free_count(q);
  std::uint64_t rank = 0;
  for (std::uint32_t i = 0; i < m; ++i) {
    std::uint64_t smaller = 0;
    for (std::uint32_t j = i + 1; j < m; ++j) smaller += v[2 + j] < v[2 + i];
    rank += smaller * factorial(m - 1 - i);
  }
  return rank;
}

namespace {

struct JobResult {
  bool done = false;
  long best = -1;
  std::vector<PointIndex> witness;
  std::uint64_t leaves = 0;
};

class Searcher {
public:
  Searcher(const GroupTable& group, const IncidenceIndex* inc, SearchStrategy strategy,
           std::atomic<std::size_t>& global_max)
      : group_(group), inc_(inc), strategy_(strategy), global_max_(global_max),
        n_(group.degree()), q_(static_cast<std::uint32_t>(n_ - 1)), m_(free_count(q_)),
        counts_(group.order(), 0), images_(n_), used_(n_, false) {}

  void run(std::uint64_t first_rank, JobResult& out) {
    out_ = &out;
    const Permutation first = candidate_from_rank(q_, first_rank);
    std::copy(first.images().begin(), first.images().end(), images_.begin());
    const std::uint32_t prefix = job_prefix(q_);
    if (strategy_ == SearchStrategy::candidate_scan) {
      scan_job(prefix);
      return;
    }
    std::fill(counts_.begin(), counts_.end(), 0);
    std::fill(used_.begin(), used_.end(), false);
    std::size_t agree = 0;
    for (const PointIndex x : fixed_points()) agree = touch(x, static_cast<PointIndex>(x), agree);
    for (std::uint32_t i = 0; i < prefix; ++i) {
      const std::size_t x = 2 + i;
      agree = touch(x, images_[x], agree);
      used_[images_[x]] = true;
    }
    if (agree < threshold()) dfs(prefix, agree);
  }

private:
  std::vector<PointIndex> fixed_points() const { return {0, 1, static_cast<PointIndex>(q_)}; }

  // Agreement count at which every completion is closer to G than the running max.
  std::size_t threshold() const {
    return n_ - global_max_.load(std::memory_order_relaxed) + 1;
  }

  std::size_t touch(std::size_t x, PointIndex y, std::size_t agree) {
    for (const auto g : inc_->elements(x, y)) {
      const std::size_t c = ++counts_[g];
      if (c > agree) agree = c;
    }
    return agree;
  }

  void untouch(std::size_t x, PointIndex y) {
    for (const auto g : inc_->elements(x, y)) --counts_[g];
  }

  void dfs(std::uint32_t depth, std::size_t agree) {
    if (depth == m_) {
      ++out_->leaves;
      leaf(n_ - agree);
      return;
    }
    const std::size_t x = 2 + depth;
    for (PointIndex y = 2; y < q_; ++y) {
      if (used_[y]) continue;
      const std::size_t a = touch(x, y, agree);
      if (a < threshold()) {
        used_[y] = true;
        images_[x] = y;
        dfs(depth + 1, a);
        used_[y] = false;
      }
      untouch(x, y);
    }
  }

  void leaf(std::size_t d) {
    if (static_cast<long>(d) > out_->best) {
      out_->best = static_cast<long>(d);
      out_->witness = images_;
    }
    std::size_t cur = global_max_.load(std::memory_order_relaxed);
    while (d > cur && !global_max_.compare_exchange_weak(cur, d, std::memory_order_relaxed)) {
    }
  }

  void scan_job(std::uint32_t prefix) {
    const auto tail_begin = images_.begin() + 2 + prefix;
    const auto tail_end = images_.begin() + 2 + m_;
    do {
      ++out_->leaves;
      const std::size_t bar = global_max_.load(std::memory_order_relaxed);
      std::size_t best = n_ + 1;
      bool abandoned = false;
      for (std::size_t g = 0; g < group_.order() && !abandoned; ++g) {
        const auto row = group_.row(g);
        std::size_t miss = 0;
        for (std::size_t x = 0; x < n_ && miss < best; ++x) miss += row[x] != images_[x];
        if (miss < best) best = miss;
        abandoned = best < bar;
      }
      if (!abandoned) leaf(best);
    } while (std::next_permutation(tail_begin, tail_end));
  }

  const GroupTable& group_;
  const IncidenceIndex* inc_;
  SearchStrategy strategy_;
  std::atomic<std::size_t>& global_max_;
  std::size_t n_;
  std::uint32_t q_;
  std::uint32_t m_;
  std::vector<std::uint16_t> counts_;
  std::vector<PointIndex> images_;
  std::vector<bool> used_;
  JobResult* out_ = nullptr;
};

} // namespace

SearchReport exact_covering_radius(const GroupTable& group, const SearchOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const auto q = static_cast<std::uint32_t>(group.line().q());
  if (!group.materialized()) throw InvalidArgument("exact search needs a materialized group table");

  const std::uint64_t total = candidate_count(q);
  const std::uint64_t job_size = search_job_size(q);
  const std::uint64_t jobs = total / job_size;

  SearchReport report;
  report.q = q;
  report.total_candidates = total;
  report.strategy = options.strategy;

  std::uint64_t first_job = 0;
  std::size_t frontier_max = 0;
  std::optional<std::vector<PointIndex>> frontier_witness;
  double prior_elapsed = 0;
  if (options.resume) {
    const auto& cp = *options.resume;
    if (cp.q != q) throw InvalidArgument("checkpoint is for a different q");
    if (cp.next_candidate_rank % job_size != 0 || cp.next_candidate_rank > total)
      throw InvalidArgument("checkpoint rank is not a job boundary");
    first_job = cp.next_candidate_rank / job_size;
    frontier_max = cp.current_max;
    if (cp.witness_so_far) {
      if (cp.witness_so_far->size() != group.degree())
        throw InvalidArgument("checkpoint witness has the wrong degree");
      const auto w = cp.witness_so_far->images();
      frontier_witness.emplace(w.begin(), w.end());
    }
    prior_elapsed = cp.elapsed_s;
  }
  report.start_rank = first_job * job_size;

  std::uint64_t last_job = jobs;
  if (options.budget) {
    const std::uint64_t allowed = (*options.budget + job_size - 1) / job_size;
    last_job = std::min(jobs, first_job + std::max<std::uint64_t>(allowed, 1));
  }

  std::optional<IncidenceIndex> inc;
  if (options.strategy == SearchStrategy::prefix_dfs) inc.emplace(group);

  std::atomic<std::size_t> global_max{frontier_max};
  std::atomic<std::uint64_t> next_job{first_job};
  std::vector<JobResult> results(last_job - first_job);
  std::mutex mu;
  std::uint64_t frontier = first_job;
  std::uint64_t leaves = 0;
  std::uint64_t next_checkpoint =
      (report.start_rank / options.checkpoint_every + 1) * options.checkpoint_every;

  auto elapsed = [&] {
    return prior_elapsed +
           std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  // Folds finished jobs into the rank-ordered frontier. Caller holds mu.
  auto advance = [&] {
    while (frontier < last_job && results[frontier - first_job].done) {
      JobResult& r = results[frontier - first_job];
      leaves += r.leaves;
      if (r.best >= 0 && (static_cast<std::size_t>(r.best) > frontier_max || !frontier_witness)) {
        frontier_max = static_cast<std::size_t>(r.best);
        frontier_witness = std::move(r.witness);
      }
      r.witness = {};
      ++frontier;
      const std::uint64_t settled = frontier * job_size;
      if (options.on_checkpoint && settled >= next_checkpoint && frontier < jobs) {
        SearchCheckpoint cp{q, settled, frontier_max, std::nullopt, elapsed()};
        if (frontier_witness) cp.witness_so_far.emplace(*frontier_witness);
        options.on_checkpoint(cp);
        next_checkpoint = (settled / options.checkpoint_every + 1) * options.checkpoint_every;
      }
    }
  };

  auto work = [&] {
    Searcher s(group, inc ? &*inc : nullptr, options.strategy, global_max);
    for (;;) {
      const std::uint64_t j = next_job.fetch_add(1);
      if (j >= last_job) return;
      JobResult r;
      s.run(j * job_size, r);
      r.done = true;
      std::lock_guard lock(mu);
      results[j - first_job] = std::move(r);
      advance();
    }
  };

  const unsigned threads = std::max(1u, options.threads);
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  report.complete = last_job == jobs;
  report.covering_radius = frontier_max;
  if (frontier_witness) report.witness_of_max = Permutation(std::move(*frontier_witness));
  report.next_candidate_rank = last_job * job_size;
  report.permutations_scanned = report.next_candidate_rank;
  report.leaves_evaluated = leaves;
  report.wall_time_s = elapsed();
  return report;
}

namespace {

// SplitMix64 (Steele, Lea, Flood 2014).
struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // Uniform in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t r;
    do r = next();
    while (r >= limit);
    return r % bound;
  }
};

} // namespace

Permutation sample_permutation(std::size_t n, std::uint64_t seed, std::uint64_t trial) {
  SplitMix64 mixer{seed};
  const std::uint64_t base = mixer.next();
  SplitMix64 rng{base ^ (trial * 0xd1b54a32d192ed03ULL)};
  rng.next();
  std::vector<PointIndex> images(n);
  for (std::size_t i = 0; i < n; ++i) images[i] = static_cast<PointIndex>(i);
  for (std::size_t i = n; i > 1; --i) std::swap(images[i - 1], images[rng.below(i)]);
  return Permutation(std::move(images));
}

SampleReport sample_distances(const GroupTable& group, std::uint64_t trials, std::uint64_t seed,
                              unsigned threads) {
  if (trials == 0) throw InvalidArgument("trials must be >= 1");
  const std::size_t n = group.degree();
  SampleReport rep;
  rep.q = group.line().q();
  rep.trials = trials;
  rep.seed = seed;
  rep.expected_cr = expected_cr(rep.q);
  rep.histogram.assign(n + 1, 0);

  std::optional<IncidenceIndex> inc;
  if (group.materialized()) inc.emplace(group);

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(
                                                         std::min<std::uint64_t>(trials, 1024))));
  struct Part {
    std::vector<std::uint64_t> hist;
    std::size_t max = 0;
    std::uint64_t max_trial = 0;
  };
  std::vector<Part> parts(threads);
  auto body = [&](unsigned t) {
    Part& part = parts[t];
    part.hist.assign(n + 1, 0);
    std::vector<std::uint16_t> counts(inc ? group.order() : 0);
    const std::uint64_t b = trials * t / threads, e = trials * (t + 1) / threads;
    bool any = false;
    for (std::uint64_t i = b; i < e; ++i) {
      const Permutation v = sample_permutation(n, seed, i);
      const std::size_t d = inc ? inc->distance(v.images(), counts).distance
                                : distance_to_group(v, group).distance;
      ++part.hist[d];
      if (!any || d > part.max) {
        part.max = d;
        part.max_trial = i;
        any = true;
      }
    }
  };
  if (threads == 1) {
    body(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(body, t);
    for (auto& th : pool) th.join();
  }

  std::uint64_t max_trial = 0;
  for (std::size_t t = 0; t < parts.size(); ++t) {
    const Part& part = parts[t];
    for (std::size_t k = 0; k <= n; ++k) rep.histogram[k] += part.hist[k];
    // parts cover increasing trial ranges, so strict > keeps the first trial
    if (t == 0 || part.max > rep.max_observed) {
      rep.max_observed = part.max;
      max_trial = part.max_trial;
    }
  }
  for (std::size_t k = rep.expected_cr + 1; k <= n; ++k) rep.violations += rep.histogram[k];
  rep.farthest = sample_permutation(n, seed, max_trial);
  return rep;
}

} // namespace pglcr
