#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mbs {

/**
 * Table-driven finite field of order at most 2^16.
 *
 * Elements are canonical integer codes in [0, order). A prime field uses the
 * residue itself; an extension of degree k over a base field of order b uses
 * the packed coefficient vector sum_j c_j * b^j (constant term in the lowest
 * digit), so codes are fully reduced and equality is coefficient-wise.
 *
 * Addition and multiplication are full lookup tables. The tables are derived
 * from polynomial arithmetic modulo the defining polynomial; inverses come from
 * the extended Euclidean algorithm on that polynomial.
 */
class FiniteField {
 public:
  using Elem = std::uint32_t;

  static FiniteField prime(std::uint32_t p);

  /// Extension base[x]/(modulus). The modulus must be monic and irreducible;
  /// callers are expected to have checked irreducibility.
  static FiniteField extension(const FiniteField& base, std::span<const Elem> modulus);

  std::uint32_t order() const { return order_; }
  std::uint32_t characteristic() const { return characteristic_; }
  std::uint32_t base_order() const { return base_order_; }
  std::uint32_t degree() const { return degree_; }
  /// Defining polynomial over the base field, constant term first.
  const std::vector<Elem>& modulus() const { return modulus_; }

  Elem add(Elem a, Elem b) const { return add_[index(a, b)]; }
  Elem neg(Elem a) const { return neg_[a]; }
  Elem sub(Elem a, Elem b) const { return add_[index(a, neg_[b])]; }
  Elem mul(Elem a, Elem b) const { return mul_[index(a, b)]; }
  /// Throws InvalidParameter on zero.
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t e) const;

  /// Coefficient j of a over the base field.
  Elem coefficient(Elem a, std::uint32_t j) const;
  Elem from_coefficients(std::span<const Elem> coeffs) const;

  /// A generator of the multiplicative group (smallest code with full order).
  Elem primitive_element() const { return primitive_; }

  /// Inverse by exponentiation a^(order-2); kept as an independent cross-check.
  Elem inv_by_power(Elem a) const;

 private:
  FiniteField() = default;
  std::size_t index(Elem a, Elem b) const { return static_cast<std::size_t>(a) * order_ + b; }

  std::uint32_t order_ = 0;
  std::uint32_t characteristic_ = 0;
  std::uint32_t base_order_ = 0;
  std::uint32_t degree_ = 1;
  std::vector<Elem> modulus_;
  Elem primitive_ = 0;
  std::vector<std::uint16_t> add_;
  std::vector<std::uint16_t> mul_;
  std::vector<std::uint16_t> neg_;
  std::vector<std::uint16_t> inv_;
};

/// Dense polynomials over a FiniteField, coefficients constant term first.
namespace poly {

using Poly = std::vector<FiniteField::Elem>;

void trim(Poly& a);
int degree(const Poly& a);
Poly add(const FiniteField& f, const Poly& a, const Poly& b);
Poly sub(const FiniteField& f, const Poly& a, const Poly& b);
Poly mul(const FiniteField& f, const Poly& a, const Poly& b);
/// Quotient and remainder; divisor must be nonzero.
std::pair<Poly, Poly> divmod(const FiniteField& f, const Poly& a, const Poly& b);
Poly mod(const FiniteField& f, const Poly& a, const Poly& m);
Poly gcd(const FiniteField& f, Poly a, Poly b);
Poly mulmod(const FiniteField& f, const Poly& a, const Poly& b, const Poly& m);
Poly powmod(const FiniteField& f, const Poly& a, std::uint64_t e, const Poly& m);
FiniteField::Elem eval(const FiniteField& f, const Poly& a, FiniteField::Elem x);
bool has_root(const FiniteField& f, const Poly& a);

/// Exact irreducibility test for a polynomial of degree >= 1. Degrees 2 and 3
/// use the root test; higher degrees check gcd(x^(b^i) - x, m) = 1 for
/// i <= deg/2.
bool is_irreducible(const FiniteField& f, const Poly& m);

/// Smallest monic irreducible of the given degree, coefficient vectors
/// compared lexicographically starting from the constant term.
Poly smallest_monic_irreducible(const FiniteField& f, std::uint32_t degree);

}  // namespace poly

std::vector<std::uint64_t> prime_factors(std::uint64_t n);
bool is_prime(std::uint64_t n);

}  // namespace mbs
