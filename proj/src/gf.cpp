#include "pglcr/gf.hpp"

#include <algorithm>
#include <sstream>

#include "pglcr/error.hpp"

namespace pglcr::gf {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

bool prime_power(std::uint64_t q, std::uint32_t& p, std::uint32_t& f) {
  if (q < 2) return false;
  const auto factors = prime_factors(q);
  if (factors.size() != 1) return false;
  p = static_cast<std::uint32_t>(factors.front());
  f = 0;
  while (q > 1) {
    q /= p;
    ++f;
  }
  return true;
}

namespace poly {

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

namespace {

std::uint32_t inv_mod_p(std::uint32_t a, std::uint32_t p) {
  // p is prime and small: Fermat.
  std::uint64_t result = 1, base = a % p;
  for (std::uint32_t e = p - 2; e > 0; e >>= 1) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
  }
  return static_cast<std::uint32_t>(result);
}

// Remainder of a modulo b (b nonzero, trimmed).
Poly rem(Poly a, const Poly& b, std::uint32_t p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  const std::uint32_t lead_inv = inv_mod_p(b.back(), p);
  while (a.size() >= b.size()) {
    const std::uint64_t factor = std::uint64_t{a.back()} * lead_inv % p;
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) {
      const std::uint64_t sub = factor * b[i] % p;
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
    }
    trim(a);
  }
  return a;
}

} // namespace

Poly mul_mod(const Poly& a, const Poly& b, const Poly& modulus, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t{a[i]} * b[j]) % p);
  }
  return rem(std::move(prod), modulus, p);
}

Poly pow_mod(const Poly& base, std::uint64_t exponent, const Poly& modulus,
             std::uint32_t p) {
  Poly result = rem(Poly{1}, modulus, p);
  Poly b = rem(base, modulus, p);
  for (; exponent > 0; exponent >>= 1) {
    if (exponent & 1) result = mul_mod(result, b, modulus, p);
    b = mul_mod(b, b, modulus, p);
  }
  return result;
}

Poly gcd(Poly a, Poly b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const std::uint32_t lead_inv = inv_mod_p(a.back(), p);
    for (auto& c : a) c = static_cast<std::uint32_t>(std::uint64_t{c} * lead_inv % p);
  }
  return a;
}

bool is_irreducible(const Poly& monic, std::uint32_t p) {
  const std::size_t n = monic.size() - 1;
  if (n == 0) return false;
  if (n == 1) return true;
  const Poly x{0, 1};

  // x^{p^k} mod f for k = 0..n.
  std::vector<Poly> frob{rem(x, monic, p)};
  for (std::size_t k = 1; k <= n; ++k)
    frob.push_back(pow_mod(frob.back(), p, monic, p));

  auto minus_x = [&](Poly h) {
    h.resize(std::max<std::size_t>(h.size(), 2), 0);
    h[1] = (h[1] + p - 1) % p;
    trim(h);
    return h;
  };

  if (!minus_x(frob[n]).empty()) return false;
  for (const auto r : prime_factors(n)) {
    const Poly g = gcd(monic, minus_x(frob[n / r]), p);
    if (g.size() != 1) return false;
  }
  return true;
}

} // namespace poly

namespace {

poly::Poly to_poly(std::uint32_t index, std::uint32_t p, std::uint32_t m) {
  poly::Poly out(m, 0);
  for (std::uint32_t i = 0; i < m; ++i) {
    out[i] = index % p;
    index /= p;
  }
  poly::trim(out);
  return out;
}

std::uint32_t from_poly(const poly::Poly& a, std::uint32_t p) {
  std::uint32_t index = 0;
  for (std::size_t i = a.size(); i-- > 0;) index = index * p + a[i];
  return index;
}

// Scans monic polynomials x^m + c_{m-1} x^{m-1} + ... + c_0 with the tuple
// (c_0, ..., c_{m-1}) increasing lexicographically.
bool has_root(const poly::Poly& f, std::uint32_t p) {
  for (std::uint64_t x = 0; x < p; ++x) {
    std::uint64_t v = 0;
    for (std::size_t i = f.size(); i-- > 0;) v = (v * x + f[i]) % p;
    if (v == 0) return true;
  }
  return false;
}

poly::Poly smallest_irreducible(std::uint32_t p, std::uint32_t m) {
  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < m; ++i) total *= p;
  poly::Poly f(m + 1, 0);
  f[m] = 1;
  // For m >= 2 a zero constant term means x divides f, so start at c_0 = 1.
  for (std::uint64_t t = m >= 2 ? total / p : 0; t < total; ++t) {
    // c_0 is the most significant base-p digit of t.
    std::uint64_t rest = t;
    for (std::uint32_t i = m; i-- > 0;) {
      f[i] = static_cast<std::uint32_t>(rest % p);
      rest /= p;
    }
    if (m >= 2 && has_root(f, p)) continue;
    if (poly::is_irreducible(f, p)) return f;
  }
  throw CheckFailure("no irreducible polynomial found");
}

} // namespace

FieldTower FieldTower::build(std::uint32_t p, std::uint32_t f) {
  if (!is_prime(p))
    throw InvalidArgument("field characteristic " + std::to_string(p) + " is not prime");
  if (f < 1) throw InvalidArgument("extension degree must be >= 1");
  std::uint64_t size = 1;
  for (std::uint32_t i = 0; i < 2 * f; ++i) {
    size *= p;
    if (size > kMaxFieldOrder)
      throw InvalidArgument("q^2 = " + std::to_string(p) + "^" + std::to_string(2 * f) +
                            " exceeds the supported field size 2^20");
  }

  FieldTower t;
  t.p_ = p;
  t.f_ = f;
  t.size_ = static_cast<std::uint32_t>(size);
  t.q_ = 1;
  for (std::uint32_t i = 0; i < f; ++i) t.q_ *= p;

  const std::uint32_t m = 2 * f;
  t.modulus_ = smallest_irreducible(p, m);
  t.order_factors_ = prime_factors(t.group_order());

  const std::uint32_t n = t.group_order();
  for (std::uint32_t idx = 1; idx < t.size_; ++idx) {
    const auto z = to_poly(idx, p, m);
    bool generator = true;
    for (const auto r : t.order_factors_) {
      if (poly::pow_mod(z, n / r, t.modulus_, p) == poly::Poly{1}) {
        generator = false;
        break;
      }
    }
    // In GF(2), n = 1 has no prime factors and idx 1 generates.
    if (generator) {
      t.primitive_ = Element{idx};
      break;
    }
  }

  t.log_.assign(t.size_, 0);
  t.antilog_.assign(2 * std::size_t{n}, 0);
  const auto gen = to_poly(t.primitive_.index(), p, m);
  poly::Poly cur{1};
  for (std::uint32_t k = 0; k < n; ++k) {
    const std::uint32_t idx = from_poly(cur, p);
    t.antilog_[k] = idx;
    t.antilog_[k + n] = idx;
    t.log_[idx] = k;
    cur = poly::mul_mod(cur, gen, t.modulus_, p);
  }
  if (from_poly(cur, p) != 1) throw CheckFailure("primitive element has wrong order");

  // zech[k] = log(1 + g^k): bump the constant coefficient.
  t.zech_.assign(n, n);
  for (std::uint32_t k = 0; k < n; ++k) {
    const std::uint32_t idx = t.antilog_[k];
    const std::uint32_t c0 = idx % p;
    const std::uint32_t bumped = idx - c0 + (c0 + 1) % p;
    if (bumped != 0) t.zech_[k] = t.log_[bumped];
  }

  t.minus_one_ = Element{p - 1};
  return t;
}

FieldTower FieldTower::for_q(std::uint64_t q) {
  std::uint32_t p = 0, f = 0;
  if (!prime_power(q, p, f)) throw InvalidArgument(std::to_string(q) + " is not a prime power");
  return build(p, f);
}

Element FieldTower::add(Element a, Element b) const {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const std::uint32_t n = group_order();
  const std::uint32_t la = log_[a.index()];
  const std::uint32_t lb = log_[b.index()];
  const std::uint32_t z = zech_[lb >= la ? lb - la : lb + n - la];
  if (z == n) return Element{0};
  return Element{antilog_[la + z]};
}

Element FieldTower::neg(Element a) const {
  if (a.is_zero() || p_ == 2) return a;
  return Element{antilog_[log_[a.index()] + group_order() / 2]};
}

Element FieldTower::mul(Element a, Element b) const {
  if (a.is_zero() || b.is_zero()) return Element{0};
  return Element{antilog_[log_[a.index()] + log_[b.index()]]};
}

Element FieldTower::inv(Element a) const {
  if (a.is_zero()) throw InvalidArgument("inverse of zero");
  const std::uint32_t l = log_[a.index()];
  return Element{antilog_[l == 0 ? 0 : group_order() - l]};
}

Element FieldTower::pow(Element a, std::uint64_t exponent) const {
  if (exponent == 0) return one();
  if (a.is_zero()) return a;
  const std::uint64_t n = group_order();
  return Element{antilog_[(log_[a.index()] * (exponent % n)) % n]};
}

std::uint32_t FieldTower::log(Element a) const {
  if (a.is_zero()) throw InvalidArgument("logarithm of zero");
  return log_[a.index()];
}

std::uint64_t FieldTower::element_order(Element a) const {
  if (a.is_zero()) throw InvalidArgument("order of zero");
  std::uint64_t order = group_order();
  for (const auto r : order_factors_) {
    while (order % r == 0 && pow(a, order / r) == one()) order /= r;
  }
  return order;
}

std::vector<Element> FieldTower::subfield_elements() const {
  std::vector<Element> out;
  out.reserve(q_);
  for (std::uint32_t idx = 0; idx < size_; ++idx)
    if (in_subfield(Element{idx})) out.emplace_back(idx);
  return out;
}

std::uint32_t FieldTower::rho_choices() const {
  if (q_ % 2 == 0) return 0;
  const std::uint64_t k = 2 * (std::uint64_t{q_} + 1);
  std::uint64_t phi = k;
  for (const auto r : prime_factors(k)) phi = phi / r * (r - 1);
  return static_cast<std::uint32_t>(phi);
}

Element FieldTower::rho(std::uint32_t selector) const {
  if (q_ % 2 == 0)
    throw InvalidArgument("an element of order 2(q+1) needs q odd; q = " + std::to_string(q_));
  const std::uint64_t target = 2 * (std::uint64_t{q_} + 1);
  Element r;
  if (selector == 0) {
    r = exp(group_order() / target);
  } else {
    std::uint32_t seen = 0;
    bool found = false;
    for (std::uint32_t idx = 1; idx < size_ && !found; ++idx) {
      if (element_order(Element{idx}) != target) continue;
      if (++seen == selector) {
        r = Element{idx};
        found = true;
      }
    }
    if (!found)
      throw InvalidArgument("rho selector " + std::to_string(selector) + " out of range; only " +
                            std::to_string(seen) + " elements of order " +
                            std::to_string(target) + " exist");
  }
  if (element_order(r) != target)
    throw CheckFailure("rho " + std::to_string(r.index()) + " does not have order 2(q+1)");
  if (pow(r, q_ + 1) != minus_one())
    throw CheckFailure("rho^(q+1) != -1 for rho " + std::to_string(r.index()));
  if (in_subfield(r))
    throw CheckFailure("rho " + std::to_string(r.index()) + " lies in GF(q)");
  return r;
}

std::vector<std::uint32_t> FieldTower::digits(Element a) const {
  std::vector<std::uint32_t> out(degree(), 0);
  std::uint32_t idx = a.index();
  for (auto& d : out) {
    d = idx % p_;
    idx /= p_;
  }
  return out;
}

Element FieldTower::from_digits(const std::vector<std::uint32_t>& digits) const {
  if (digits.size() > degree()) throw InvalidArgument("too many coefficients");
  std::uint32_t idx = 0;
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (digits[i] >= p_) throw InvalidArgument("coefficient out of range");
    idx = idx * p_ + digits[i];
  }
  return Element{idx};
}

std::string FieldTower::to_string(Element a) const {
  if (a.is_zero()) return "0";
  const auto d = digits(a);
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] == 0) continue;
    if (!first) os << '+';
    first = false;
    if (i == 0) {
      os << d[i];
      continue;
    }
    if (d[i] != 1) os << d[i] << '*';
    os << 'x';
    if (i > 1) os << '^' << i;
  }
  return os.str();
}

} // namespace pglcr::gf
