#include "pglcr/projline.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "pglcr/error.hpp"

namespace pglcr {

using gf::Element;

Permutation::Permutation(std::vector<PointIndex> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (const auto y : images_) {
    if (y >= images_.size() || seen[y])
      throw InvalidArgument("image array is not a permutation of 0.." +
                            std::to_string(images_.size() - 1));
    seen[y] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  Permutation v;
  v.images_.resize(n);
  for (std::size_t i = 0; i < n; ++i) v.images_[i] = static_cast<PointIndex>(i);
  return v;
}

Permutation Permutation::inverse() const {
  Permutation v;
  v.images_.resize(size());
  for (std::size_t i = 0; i < size(); ++i) v.images_[images_[i]] = static_cast<PointIndex>(i);
  return v;
}

Permutation Permutation::then(const Permutation& next) const {
  if (next.size() != size()) throw InvalidArgument("composing permutations of different degree");
  Permutation v;
  v.images_.resize(size());
  for (std::size_t i = 0; i < size(); ++i) v.images_[i] = next.images_[images_[i]];
  return v;
}

std::size_t fix_count(std::span<const PointIndex> images) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < images.size(); ++i) n += images[i] == i;
  return n;
}

ProjectiveLine::ProjectiveLine(const gf::FieldTower& tower)
    : tower_(&tower), elements_(tower.subfield_elements()), point_of_(tower.size(), -1) {
  if (tower.q() > 1024) throw InvalidArgument("q too large for the projective line");
  for (std::size_t i = 0; i < elements_.size(); ++i)
    point_of_[elements_[i].index()] = static_cast<std::int32_t>(i);
  const std::size_t q = elements_.size();
  add_.resize(q * q);
  mul_.resize(q * q);
  inv_.assign(q, 0);
  for (std::size_t x = 0; x < q; ++x) {
    for (std::size_t y = 0; y < q; ++y) {
      add_[x * q + y] = static_cast<PointIndex>(point_of_[tower.add(elements_[x], elements_[y]).index()]);
      mul_[x * q + y] = static_cast<PointIndex>(point_of_[tower.mul(elements_[x], elements_[y]).index()]);
    }
    if (x != 0) inv_[x] = static_cast<PointIndex>(point_of_[tower.inv(elements_[x]).index()]);
  }
}

std::optional<PointIndex> ProjectiveLine::point(Element z) const {
  const auto p = point_of_.at(z.index());
  if (p < 0) return std::nullopt;
  return static_cast<PointIndex>(p);
}

MobiusMap MobiusMap::make(const gf::FieldTower& t, Element a, Element b, Element c, Element d) {
  for (const auto e : {a, b, c, d})
    if (!t.in_subfield(e)) throw InvalidArgument("Mobius coefficient outside GF(q)");
  if (t.sub(t.mul(a, d), t.mul(b, c)).is_zero())
    throw InvalidArgument("singular Mobius matrix");
  const Element lead = !a.is_zero() ? a : !b.is_zero() ? b : c;
  const Element s = t.inv(lead);
  return {t.mul(a, s), t.mul(b, s), t.mul(c, s), t.mul(d, s)};
}

PointIndex apply(const ProjectiveLine& line, const MobiusMap& m, PointIndex x) {
  const auto& t = line.tower();
  const PointIndex inf = line.infinity();
  if (x == inf) return m.c.is_zero() ? inf : *line.point(t.div(m.a, m.c));
  const Element z = line.element(x);
  const Element den = t.add(t.mul(m.c, z), m.d);
  if (den.is_zero()) return inf;
  return *line.point(t.div(t.add(t.mul(m.a, z), m.b), den));
}

MobiusMap from_triple(const ProjectiveLine& line, PointIndex alpha, PointIndex beta,
                      PointIndex gamma) {
  if (alpha == beta || beta == gamma || alpha == gamma)
    throw InvalidArgument("from_triple needs three distinct points");
  const auto& t = line.tower();
  const PointIndex inf = line.infinity();
  for (const auto x : {alpha, beta, gamma})
    if (x > inf) throw InvalidArgument("point index out of range");

  const Element one = t.one();
  const Element zero = t.zero();
  if (gamma == inf) {
    const Element al = line.element(alpha), be = line.element(beta);
    return MobiusMap::make(t, t.sub(be, al), al, zero, one);
  }
  const Element ga = line.element(gamma);
  if (alpha == inf) {
    const Element be = line.element(beta);
    return MobiusMap::make(t, ga, t.sub(be, ga), one, zero);
  }
  const Element al = line.element(alpha);
  if (beta == inf) return MobiusMap::make(t, ga, t.neg(al), one, t.neg(one));
  const Element be = line.element(beta);
  const Element ba = t.sub(be, al);
  const Element gb = t.sub(ga, be);
  return MobiusMap::make(t, t.mul(ga, ba), t.mul(al, gb), ba, gb);
}

MobiusMap inverse(const gf::FieldTower& t, const MobiusMap& m) {
  return MobiusMap::make(t, m.d, t.neg(m.b), t.neg(m.c), m.a);
}

void fill_images(const ProjectiveLine& line, const MobiusMap& m, std::span<PointIndex> out) {
  const PointIndex inf = line.infinity();
  const PointIndex a = *line.point(m.a), b = *line.point(m.b);
  const PointIndex c = *line.point(m.c), d = *line.point(m.d);
  for (PointIndex x = 0; x < inf; ++x) {
    const PointIndex den = line.add(line.mul(c, x), d);
    out[x] = den == 0 ? inf : line.mul(line.add(line.mul(a, x), b), line.inv(den));
  }
  out[inf] = c == 0 ? inf : line.mul(a, line.inv(c));
}

Permutation to_permutation(const ProjectiveLine& line, const MobiusMap& m) {
  std::vector<PointIndex> images(line.size());
  fill_images(line, m, images);
  return Permutation(std::move(images));
}

GroupTable::GroupTable(const ProjectiveLine& line, Storage storage)
    : line_(&line), degree_(line.size()) {
  const std::size_t q = line.q();
  order_ = (q + 1) * q * (q - 1);
  bool materialize = storage == Storage::materialized ||
                     (storage == Storage::automatic && q <= kMaterializeLimit);
  if (storage == Storage::materialized && q > kMaterializeLimit)
    throw InvalidArgument("group table for q = " + std::to_string(q) +
                          " exceeds the memory ceiling; use streamed storage");
  if (!materialize) return;
  rows_.resize(order_ * degree_);
  for (std::size_t i = 0; i < order_; ++i)
    fill_row(i, std::span<PointIndex>(rows_.data() + i * degree_, degree_));
}

Triple GroupTable::triple(std::size_t index) const {
  const std::size_t q = line_->q();
  const std::size_t per_alpha = q * (q - 1);
  const auto alpha = static_cast<PointIndex>(index / per_alpha);
  index %= per_alpha;
  auto beta = static_cast<PointIndex>(index / (q - 1));
  if (beta >= alpha) ++beta;
  auto gamma = static_cast<PointIndex>(index % (q - 1));
  const PointIndex lo = std::min(alpha, beta), hi = std::max(alpha, beta);
  if (gamma >= lo) ++gamma;
  if (gamma >= hi) ++gamma;
  return {alpha, beta, gamma};
}

std::size_t GroupTable::index_of(const Triple& t) const {
  const std::size_t q = line_->q();
  const auto [alpha, beta, gamma] = t;
  if (alpha == beta || beta == gamma || alpha == gamma || alpha > q || beta > q || gamma > q)
    throw InvalidArgument("not a triple of distinct points");
  const std::size_t b = beta - (beta > alpha);
  const std::size_t g = gamma - (gamma > alpha) - (gamma > beta);
  return (alpha * q + b) * (q - 1) + g;
}

MobiusMap GroupTable::map(std::size_t index) const {
  const auto t = triple(index);
  return from_triple(*line_, t[0], t[1], t[2]);
}

void GroupTable::fill_row(std::size_t index, std::span<PointIndex> out) const {
  fill_images(*line_, map(index), out);
}

std::uint64_t GroupTable::checksum() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for_each(0, order_, [&](std::size_t, std::span<const PointIndex> row) {
    for (const auto y : row) {
      h ^= y & 0xff;
      h *= 0x100000001b3ULL;
      h ^= y >> 8;
      h *= 0x100000001b3ULL;
    }
  });
  return h;
}

std::vector<Permutation> read_permutations(std::istream& in, std::size_t n) {
  std::vector<Permutation> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream is(line);
    std::vector<PointIndex> images;
    std::string tok;
    while (is >> tok) {
      if (tok == "inf") {
        images.push_back(static_cast<PointIndex>(n - 1));
        continue;
      }
      std::size_t used = 0;
      unsigned long v = 0;
      try {
        v = std::stoul(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || v >= n)
        throw InvalidArgument("line " + std::to_string(lineno) + ": bad point '" + tok + "'");
      images.push_back(static_cast<PointIndex>(v));
    }
    if (images.empty()) continue;
    if (images.size() != n)
      throw InvalidArgument("line " + std::to_string(lineno) + ": expected " + std::to_string(n) +
                            " images, got " + std::to_string(images.size()));
    out.emplace_back(std::move(images));
  }
  return out;
}

void write_permutation(std::ostream& out, const Permutation& v) {
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << v[i];
  out << '\n';
}

} // namespace pglcr
