#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mbs/finite_field.hpp"

namespace mbs {

/// Element of the subfield GF(q), by canonical code (packed GF(p) digits).
struct SubElement {
  std::uint32_t code = 0;
  auto operator<=>(const SubElement&) const = default;
};

/// Element of GF(q^h), by canonical code (packed GF(q) coefficients on the
/// power basis 1, a, ..., a^(h-1) of the outer generator a).
struct ExtElement {
  std::uint32_t code = 0;
  auto operator<=>(const ExtElement&) const = default;
};

/// Upper bound on q^h accepted by make_tower unless overridden.
/// Reads MBS_MAX_PLANE_ORDER from the environment; defaults to 2048.
std::uint32_t default_max_order();

struct TowerOptions {
  std::uint32_t max_order = default_max_order();
};

/**
 * The tower GF(p) < GF(q) < GF(q^h) with q = p^d.
 *
 * Both moduli are monic irreducibles; make() picks the lexicographically
 * smallest ones (constant term compared first). Immutable after construction.
 */
class FieldTower {
 public:
  static std::shared_ptr<const FieldTower> make(std::uint32_t p, std::uint32_t d, std::uint32_t h,
                                                TowerOptions options = {});

  /// Tower with caller-chosen moduli (constant term first). Both are checked
  /// for degree, monicity and irreducibility.
  static std::shared_ptr<const FieldTower> make_with_moduli(std::uint32_t p, std::uint32_t d,
                                                            std::uint32_t h,
                                                            std::vector<std::uint32_t> inner,
                                                            std::vector<std::uint32_t> outer,
                                                            TowerOptions options = {});

  std::uint32_t p() const { return p_; }
  std::uint32_t d() const { return d_; }
  std::uint32_t h() const { return h_; }
  std::uint32_t q() const { return sub_.order(); }
  /// q^h, the order of the plane built over this tower.
  std::uint32_t order() const { return ext_.order(); }
  std::uint32_t n() const { return d_ * h_; }
  /// Smallest prime divisor of n.
  std::uint32_t s() const;
  /// True when GF(q) is the largest proper subfield of GF(q^h), i.e. h == s.
  bool subfield_is_largest() const { return h_ == s(); }

  const std::vector<std::uint32_t>& inner_modulus() const { return inner_; }
  const std::vector<std::uint32_t>& outer_modulus() const { return outer_; }

  const FiniteField& sub_field() const { return sub_; }
  const FiniteField& ext_field() const { return ext_; }

  // GF(q^h)
  ExtElement add(ExtElement a, ExtElement b) const { return {ext_.add(a.code, b.code)}; }
  ExtElement sub(ExtElement a, ExtElement b) const { return {ext_.sub(a.code, b.code)}; }
  ExtElement neg(ExtElement a) const { return {ext_.neg(a.code)}; }
  ExtElement mul(ExtElement a, ExtElement b) const { return {ext_.mul(a.code, b.code)}; }
  ExtElement inv(ExtElement a) const { return {ext_.inv(a.code)}; }
  ExtElement div(ExtElement a, ExtElement b) const { return {ext_.div(a.code, b.code)}; }
  ExtElement pow(ExtElement a, std::uint64_t e) const { return {ext_.pow(a.code, e)}; }

  // GF(q)
  SubElement add(SubElement a, SubElement b) const { return {sub_.add(a.code, b.code)}; }
  SubElement sub(SubElement a, SubElement b) const { return {sub_.sub(a.code, b.code)}; }
  SubElement neg(SubElement a) const { return {sub_.neg(a.code)}; }
  SubElement mul(SubElement a, SubElement b) const { return {sub_.mul(a.code, b.code)}; }
  SubElement inv(SubElement a) const { return {sub_.inv(a.code)}; }
  SubElement div(SubElement a, SubElement b) const { return {sub_.div(a.code, b.code)}; }

  ExtElement zero() const { return {0}; }
  ExtElement one() const { return {1}; }
  /// Class of the outer indeterminate; generates GF(q^h) over GF(q).
  ExtElement generator() const { return {q()}; }

  /// Inclusion GF(q) -> GF(q^h): the degree-0 coefficient.
  ExtElement embed(SubElement a) const { return {a.code}; }
  std::optional<SubElement> in_subfield(ExtElement x) const;

  SubElement coefficient(ExtElement x, std::uint32_t j) const { return {ext_.coefficient(x.code, j)}; }
  std::vector<SubElement> coefficients(ExtElement x) const;
  ExtElement from_coefficients(std::span<const SubElement> coeffs) const;
  /// GF(p) digits of a subfield element, constant term first.
  std::vector<std::uint32_t> digits(SubElement a) const;
  SubElement from_digits(std::span<const std::uint32_t> digits) const;

 private:
  FieldTower(std::uint32_t p, std::uint32_t d, std::uint32_t h, FiniteField sub, FiniteField ext,
             std::vector<std::uint32_t> inner, std::vector<std::uint32_t> outer)
      : p_(p), d_(d), h_(h), sub_(std::move(sub)), ext_(std::move(ext)), inner_(std::move(inner)),
        outer_(std::move(outer)) {}

  std::uint32_t p_, d_, h_;
  FiniteField sub_;
  FiniteField ext_;
  std::vector<std::uint32_t> inner_;
  std::vector<std::uint32_t> outer_;
};

using TowerPtr = std::shared_ptr<const FieldTower>;

/// GF(q)-linear map GF(q^h) -> GF(q), stored by its values on 1, a, ..., a^(h-1).
struct LinearFunctional {
  std::vector<SubElement> basis_values;

  bool is_nonzero() const;
  bool operator==(const LinearFunctional&) const = default;
};

/// Polynomial over GF(q), constant term first, trimmed.
struct SubPoly {
  std::vector<SubElement> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool operator==(const SubPoly&) const = default;
};

/// 1/(a + k) = scale * (a^(h-1) + c_1 a^(h-2) + ... + c_(h-1)), scale = -1/m(-k).
struct InverseShift {
  SubElement k;
  SubElement scale;
  std::vector<SubElement> coeffs;  // c_1 .. c_(h-1)
};

SubElement trace_to_sub(const FieldTower& tower, ExtElement x);
LinearFunctional trace_functional(const FieldTower& tower);
SubElement eval_functional(const FieldTower& tower, const LinearFunctional& f, ExtElement x);

/// One functional meeting every (vector, value) constraint. Independent
/// constraints are extended to a basis by sweeping 1, a, ..., a^(h-1) and
/// then all field elements in code order; added basis vectors get value 0.
/// Throws InvalidParameter when dependent constraints disagree.
LinearFunctional functional_from_constraints(const FieldTower& tower,
                                             std::span<const std::pair<ExtElement, SubElement>> pairs);

/// |{x : f(x) = k}| by enumeration. Rejects the zero functional.
std::uint64_t fiber_size(const FieldTower& tower, const LinearFunctional& f, SubElement k);

SubPoly minimal_polynomial(const FieldTower& tower, ExtElement x);
SubElement eval_sub_poly(const FieldTower& tower, const SubPoly& m, SubElement x);
ExtElement eval_sub_poly(const FieldTower& tower, const SubPoly& m, ExtElement x);

/// Rejects alpha whose minimal polynomial has degree below h.
InverseShift inverse_shift(const FieldTower& tower, ExtElement alpha, SubElement k);
/// Recombines an InverseShift into an element of GF(q^h) for the given alpha.
ExtElement expand_inverse_shift(const FieldTower& tower, ExtElement alpha, const InverseShift& shift);

/// Gaussian elimination over GF(q). Matrices are row-major, rows of equal length.
namespace linalg {
using Matrix = std::vector<std::vector<SubElement>>;
std::size_t rank(const FieldTower& tower, Matrix m);
/// Solves A x = b; nullopt when inconsistent. Free variables are set to zero.
std::optional<std::vector<SubElement>> solve(const FieldTower& tower, Matrix a, std::vector<SubElement> b);
}  // namespace linalg

}  // namespace mbs
