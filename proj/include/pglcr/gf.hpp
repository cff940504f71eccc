#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace pglcr::gf {

// Element of GF(p^m) encoded as the integer sum(a_i * p^i) of its
// coefficient vector (a_0, ..., a_{m-1}) over GF(p), low degree first.
class Element {
public:
  constexpr Element() = default;
  constexpr explicit Element(std::uint32_t index) : index_(index) {}

  constexpr std::uint32_t index() const { return index_; }
  constexpr bool is_zero() const { return index_ == 0; }

  friend constexpr auto operator<=>(Element, Element) = default;

private:
  std::uint32_t index_ = 0;
};

// Largest supported q^2.
inline constexpr std::uint64_t kMaxFieldOrder = std::uint64_t{1} << 20;

bool is_prime(std::uint64_t n);

// Distinct prime factors in increasing order.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

// Returns true and fills p, f when q = p^f with p prime and f >= 1.
bool prime_power(std::uint64_t q, std::uint32_t& p, std::uint32_t& f);

// Dense polynomials over GF(p), coefficient i of x^i. Used while building a
// tower, before log tables exist.
namespace poly {
using Poly = std::vector<std::uint32_t>;

void trim(Poly& a);
Poly mul_mod(const Poly& a, const Poly& b, const Poly& modulus, std::uint32_t p);
Poly pow_mod(const Poly& base, std::uint64_t exponent, const Poly& modulus,
             std::uint32_t p);
Poly gcd(Poly a, Poly b, std::uint32_t p);

// Rabin's test for a monic polynomial of degree >= 1.
bool is_irreducible(const Poly& monic, std::uint32_t p);
} // namespace poly

// GF(p) inside GF(q) inside GF(q^2), with q = p^f. Only GF(q^2) = GF(p^{2f})
// is constructed; GF(q) is realized as {z : z^q = z}.
//
// Immutable after build(); safe for concurrent reads.
class FieldTower {
public:
  static FieldTower build(std::uint32_t p, std::uint32_t f);
  static FieldTower for_q(std::uint64_t q);

  std::uint32_t p() const { return p_; }
  std::uint32_t f() const { return f_; }
  std::uint32_t q() const { return q_; }
  std::uint32_t degree() const { return 2 * f_; }
  // q^2, the number of elements of the big field.
  std::uint32_t size() const { return size_; }
  // q^2 - 1.
  std::uint32_t group_order() const { return size_ - 1; }

  // Monic modulus, coefficients low degree first, length degree() + 1.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }
  Element primitive() const { return primitive_; }

  Element zero() const { return Element{0}; }
  Element one() const { return Element{1}; }
  Element minus_one() const { return minus_one_; }

  Element add(Element a, Element b) const;
  Element sub(Element a, Element b) const { return add(a, neg(b)); }
  Element neg(Element a) const;
  Element mul(Element a, Element b) const;
  Element inv(Element a) const;
  Element div(Element a, Element b) const { return mul(a, inv(b)); }
  Element pow(Element a, std::uint64_t exponent) const;

  // Discrete logarithm to base primitive(); a must be nonzero.
  std::uint32_t log(Element a) const;
  Element exp(std::uint64_t k) const { return Element{antilog_[k % group_order()]}; }

  std::uint64_t element_order(Element a) const;
  bool in_subfield(Element a) const { return pow(a, q_) == a; }

  // Elements of GF(q) in increasing index order.
  std::vector<Element> subfield_elements() const;

  // Element of order 2(q+1). selector 0 is primitive^((q^2-1)/(2(q+1)));
  // selector k >= 1 is the k-th such element in increasing index order.
  // Certifies order, rho^{q+1} = -1 and rho not in GF(q) before returning.
  Element rho(std::uint32_t selector = 0) const;
  // Number of elements of order 2(q+1) (Euler phi of 2(q+1)); q odd only.
  std::uint32_t rho_choices() const;

  std::vector<std::uint32_t> digits(Element a) const;
  Element from_digits(const std::vector<std::uint32_t>& digits) const;
  // "3+5*x+x^2" style, zero terms omitted; "0" for zero.
  std::string to_string(Element a) const;

private:
  FieldTower() = default;

  std::uint32_t p_ = 0;
  std::uint32_t f_ = 0;
  std::uint32_t q_ = 0;
  std::uint32_t size_ = 0;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint64_t> order_factors_;
  Element primitive_;
  Element minus_one_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> antilog_; // length 2 * group_order()
  std::vector<std::uint32_t> zech_;    // log(1 + g^k); group_order() when 1 + g^k = 0
};

} // namespace pglcr::gf
