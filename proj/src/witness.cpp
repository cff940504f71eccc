#include "pglcr/witness.hpp"

#include <algorithm>
#include <thread>

#include "pglcr/error.hpp"

namespace pglcr {

using gf::Element;

namespace {

std::string idx(Element z) { return std::to_string(z.index()); }

template <typename Fn>
void parallel_chunks(std::size_t total, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(total ? total : 1)));
  if (threads == 1) {
    fn(0u, std::size_t{0}, total);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] { fn(t, total * t / threads, total * (t + 1) / threads); });
  for (auto& th : pool) th.join();
}

} // namespace

std::optional<std::size_t> DeltaSet::position(Element y) const {
  const auto it = std::lower_bound(elems.begin(), elems.end(), y);
  if (it == elems.end() || *it != y) return std::nullopt;
  return static_cast<std::size_t>(it - elems.begin());
}

DeltaSet build_delta(const gf::FieldTower& t, Element rho) {
  if (t.q() % 2 == 0) throw InvalidArgument("Delta is defined here for odd q only");
  const std::uint64_t e = std::uint64_t{t.q()} + 1;

  DeltaSet scanned;
  for (std::uint32_t i = 1; i < t.size(); ++i)
    if (t.pow(Element{i}, e) == t.minus_one()) scanned.elems.emplace_back(i);

  // Norm-one elements are the powers of primitive^(q-1).
  DeltaSet coset;
  const Element step = t.pow(t.primitive(), t.q() - 1);
  Element z = t.one();
  for (std::uint64_t k = 0; k < e; ++k) {
    coset.elems.push_back(t.mul(rho, z));
    z = t.mul(z, step);
  }
  std::sort(coset.elems.begin(), coset.elems.end());

  if (scanned.elems != coset.elems || scanned.elems.size() != e)
    throw CheckFailure("Delta by scan (" + std::to_string(scanned.elems.size()) +
                       " elements) disagrees with rho * ker(norm) (" +
                       std::to_string(coset.elems.size()) + ")");
  return scanned;
}

WitnessContext::WitnessContext(const ProjectiveLine& line, Options options)
    : line_(&line), rho_selector_(options.rho_selector), exponent_(options.exponent) {
  const auto& t = line.tower();
  if (t.q() % 2 == 0) throw InvalidArgument("the construction needs q odd; q = " + std::to_string(t.q()));
  if (exponent_ % 2 == 0) throw InvalidArgument("h exponent must be odd to map Delta into Delta");
  rho_ = t.rho(options.rho_selector);
  delta_ = build_delta(t, rho_);

  const std::size_t n = line.size();
  sigma_map_.resize(n);
  for (std::size_t x = 0; x < n; ++x) {
    const Element y = sigma(static_cast<PointIndex>(x));
    if (!delta_.position(y))
      throw CheckFailure("sigma(" + std::to_string(x) + ") = " + idx(y) + " is not in Delta");
    sigma_map_[x] = y;
  }
  tau_map_.resize(delta_.elems.size());
  for (std::size_t i = 0; i < delta_.elems.size(); ++i)
    tau_map_[i] = tau(delta_.elems[i]);

  std::vector<bool> hit(delta_.elems.size(), false);
  std::size_t distinct = 0;
  for (const auto y : delta_.elems) {
    const auto pos = delta_.position(t.pow(y, exponent_));
    if (!pos) throw CheckFailure("h(" + idx(y) + ") left Delta");
    if (!hit[*pos]) ++distinct;
    hit[*pos] = true;
  }
  h_bijective_ = distinct == delta_.elems.size();

  if (h_bijective_) {
    std::vector<PointIndex> images(n);
    for (std::size_t x = 0; x < n; ++x) {
      const Element hy = t.pow(sigma_map_[x], exponent_);
      images[x] = tau_map_[*delta_.position(hy)];
    }
    witness_.emplace(std::move(images));
  }
}

Element WitnessContext::sigma(PointIndex x) const {
  const auto& t = tower();
  if (x == line_->infinity()) return t.neg(t.inv(rho_));
  const Element z = line_->element(x);
  const Element den = t.sub(t.one(), t.mul(rho_, z));
  if (den.is_zero())
    throw CheckFailure("1 - rho*x vanished at x = " + idx(z) + " (rho in GF(q)?)");
  return t.div(t.add(z, rho_), den);
}

PointIndex WitnessContext::tau(Element y) const {
  const auto& t = tower();
  if (!delta_.position(y)) throw InvalidArgument("tau: " + idx(y) + " is not in Delta");
  if (y == t.neg(t.inv(rho_))) return line_->infinity();
  const Element den = t.add(t.one(), t.mul(rho_, y));
  if (den.is_zero()) throw CheckFailure("1 + rho*y vanished at y = " + idx(y));
  const Element x = t.div(t.sub(y, rho_), den);
  const auto p = line_->point(x);
  if (!p) throw CheckFailure("tau(" + idx(y) + ") = " + idx(x) + " is not in GF(q)");
  return *p;
}

Element WitnessContext::power_on_delta(Element y) const {
  if (!delta_.position(y)) throw InvalidArgument(idx(y) + " is not in Delta");
  return tower().pow(y, exponent_);
}

const Permutation& WitnessContext::witness() const {
  if (!witness_)
    throw InvalidArgument("h is not a permutation of Delta for q = " + std::to_string(tower().q()) +
                          "; no witness");
  return *witness_;
}

Element cube_on_delta(const WitnessContext& ctx, Element y) {
  if (!ctx.delta().position(y)) throw InvalidArgument(std::to_string(y.index()) + " is not in Delta");
  const auto& t = ctx.tower();
  return t.mul(y, t.mul(y, y));
}

Permutation build_witness(const WitnessContext& ctx) {
  const std::uint32_t q = ctx.tower().q();
  if (q % 6 != 1)
    throw InvalidArgument("the witness needs q = 1 (mod 6); q = " + std::to_string(q));
  return ctx.witness();
}

std::size_t coincidence_count(const WitnessContext& ctx, std::span<const PointIndex> g_row) {
  return ctx.line().size() - hamming(ctx.witness().images(), g_row);
}

std::size_t delta_coincidence_count(const WitnessContext& ctx, const MobiusMap& g) {
  const auto& t = ctx.tower();
  const auto& line = ctx.line();
  std::size_t count = 0;
  const auto& delta = ctx.delta().elems;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    const Element y = delta[i];
    const Element lhs = t.pow(y, ctx.exponent());
    const Element rhs = ctx.sigma_map()[apply(line, g, ctx.tau_map()[i])];
    count += lhs == rhs;
  }
  return count;
}

LemmaStatus check_lemma1(const WitnessContext& ctx) {
  const auto& t = ctx.tower();
  const Element r = ctx.rho();
  LemmaStatus s{true, false, {}};
  const std::uint64_t want = 2 * (std::uint64_t{t.q()} + 1);
  if (t.element_order(r) != want) {
    s.detail = "order(rho) = " + std::to_string(t.element_order(r));
  } else if (t.pow(r, t.q() + 1) != t.minus_one()) {
    s.detail = "rho^(q+1) != -1";
  } else if (t.in_subfield(r)) {
    s.detail = "rho in GF(q)";
  } else {
    s.pass = true;
    s.detail = "order(rho) = " + std::to_string(want) + ", rho^(q+1) = -1, rho not in GF(q)";
  }
  return s;
}

LemmaStatus check_lemma2(const WitnessContext& ctx) {
  const auto& t = ctx.tower();
  const auto& line = ctx.line();
  const Element minus_one = t.minus_one();
  LemmaStatus s{true, false, {}};
  for (std::size_t x = 0; x < line.size(); ++x) {
    const Element y = ctx.sigma(static_cast<PointIndex>(x));
    if (t.pow(y, t.q() + 1) != minus_one) {
      s.detail = "sigma(" + std::to_string(x) + ")^(q+1) != -1";
      return s;
    }
    if (ctx.tau(y) != x) {
      s.detail = "tau(sigma(" + std::to_string(x) + ")) != " + std::to_string(x);
      return s;
    }
  }
  for (const auto y : ctx.delta().elems) {
    const PointIndex x = ctx.tau(y);
    if (x != line.infinity() && !t.in_subfield(line.element(x))) {
      s.detail = "tau(" + idx(y) + ") not in GF(q)";
      return s;
    }
    if (ctx.sigma(x) != y) {
      s.detail = "sigma(tau(" + idx(y) + ")) != " + idx(y);
      return s;
    }
  }
  if (ctx.delta().elems.size() != line.size()) {
    s.detail = "|Delta| != q+1";
    return s;
  }
  s.pass = true;
  s.detail = "sigma: Omega -> Delta and tau: Delta -> Omega are mutually inverse on all " +
             std::to_string(line.size()) + " points";
  return s;
}

LemmaStatus check_lemma3(const WitnessContext& ctx) {
  const auto& t = ctx.tower();
  const auto& delta = ctx.delta();
  LemmaStatus s{true, false, {}};
  std::vector<bool> hit(delta.elems.size(), false);
  for (const auto y : delta.elems) {
    const Element y3 = cube_on_delta(ctx, y);
    const auto pos = delta.position(y3);
    if (!pos) {
      s.detail = "(" + idx(y) + ")^3 not in Delta";
      return s;
    }
    if (hit[*pos]) {
      s.detail = "cubing not injective on Delta: collision at " + idx(y3);
      return s;
    }
    hit[*pos] = true;
    if (t.q() % 3 == 1) {
      // y = (y^3)^((q+2)/3) / y^(q+1) = -(y^3)^((q+2)/3)
      const Element back = t.neg(t.pow(y3, (std::uint64_t{t.q()} + 2) / 3));
      if (back != y) {
        s.detail = "inverse formula fails at " + idx(y);
        return s;
      }
    }
  }
  s.pass = true;
  s.detail = "y -> y^3 permutes Delta";
  return s;
}

CertificateReport certify(const WitnessContext& ctx, const GroupTable& group,
                          const CertifyOptions& options) {
  const auto& t = ctx.tower();
  const std::uint32_t q = t.q();
  if (q % 6 != 1) throw InvalidArgument("certify needs q = 1 (mod 6); q = " + std::to_string(q));
  if (&group.line() != &ctx.line()) throw InvalidArgument("group and context use different lines");

  CertificateReport r;
  r.q = q;
  r.p = t.p();
  r.f = t.f();
  r.rho_selector = ctx.rho_selector();
  r.rho_index = ctx.rho().index();
  r.group_order = group.order();
  r.lower_bound = q - 3;

  auto require = [](const LemmaStatus& s, const char* name) {
    if (!s.pass) throw CheckFailure(std::string(name) + " failed: " + s.detail);
  };
  r.lemma1 = check_lemma1(ctx);
  require(r.lemma1, "rho check");
  r.lemma2 = check_lemma2(ctx);
  require(r.lemma2, "sigma/tau check");
  r.lemma3 = check_lemma3(ctx);
  require(r.lemma3, "cubing check");

  const Permutation& w = build_witness(ctx);
  const std::size_t n = w.size();

  // Full coincidence profile over G; any g with more than 4 coincidences is a
  // counterexample. Partitioned by index, merged in index order.
  const unsigned threads = std::max(1u, options.threads);
  std::vector<std::vector<std::uint64_t>> hist(threads, std::vector<std::uint64_t>(n + 1, 0));
  std::vector<std::size_t> first_bad(threads, group.order());
  std::vector<std::size_t> first_mismatch(threads, group.order());
  parallel_chunks(group.order(), threads, [&](unsigned slot, std::size_t b, std::size_t e) {
    group.for_each(b, e, [&](std::size_t gi, std::span<const PointIndex> row) {
      const std::size_t c = coincidence_count(ctx, row);
      ++hist[slot][c];
      if (c > 4 && first_bad[slot] == group.order()) first_bad[slot] = gi;
      if (options.delta_side && first_mismatch[slot] == group.order() &&
          delta_coincidence_count(ctx, group.map(gi)) != c)
        first_mismatch[slot] = gi;
    });
  });
  r.coincidence_histogram.assign(n + 1, 0);
  for (const auto& h : hist)
    for (std::size_t k = 0; k <= n; ++k) r.coincidence_histogram[k] += h[k];
  for (std::size_t k = 0; k <= n; ++k)
    if (r.coincidence_histogram[k]) r.max_coincidence = k;

  auto triple_str = [&](std::size_t gi) {
    const auto tr = group.triple(gi);
    return "g = (" + std::to_string(tr[0]) + ", " + std::to_string(tr[1]) + ", " +
           std::to_string(tr[2]) + ")";
  };
  const std::size_t bad = *std::min_element(first_bad.begin(), first_bad.end());
  if (bad != group.order()) {
    std::vector<PointIndex> row(n);
    group.fill_row(bad, row);
    throw CheckFailure("coincidence bound violated: " + triple_str(bad) + " agrees with the witness on " +
                       std::to_string(coincidence_count(ctx, row)) + " points");
  }
  const std::size_t mismatch = *std::min_element(first_mismatch.begin(), first_mismatch.end());
  if (mismatch != group.order())
    throw CheckFailure("Omega-side and Delta-side coincidence counts differ at " + triple_str(mismatch));
  r.delta_side_checked = options.delta_side;

  const DistanceResult d = distance_to_group(w, group, threads);
  if (n - d.distance != r.max_coincidence)
    throw CheckFailure("distance scan (" + std::to_string(d.distance) +
                       ") disagrees with the coincidence profile (max " +
                       std::to_string(r.max_coincidence) + ")");
  r.witness_distance = d.distance;
  r.argmin_index = d.argmin_index;
  r.argmin_triple = group.triple(d.argmin_index);
  if (d.distance < r.lower_bound)
    throw CheckFailure("witness distance " + std::to_string(d.distance) + " below q - 3");
  // Cr <= q - 3 is the known upper bound for odd q; a larger distance refutes it.
  if (d.distance > r.lower_bound)
    throw CheckFailure("witness distance " + std::to_string(d.distance) +
                       " exceeds the upper bound q - 3");

  r.conclusion = "d(witness, PGL2(" + std::to_string(q) + ")) = " + std::to_string(d.distance) +
                 " >= q-3; with the upper bound Cr <= q-3, Cr(PGL2(" + std::to_string(q) +
                 ")) = " + std::to_string(q - 3);
  r.pass = true;
  return r;
}

} // namespace pglcr
