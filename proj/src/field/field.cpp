#include "mbs/field.hpp"

#include <cstdlib>
#include <string>

#include "mbs/errors.hpp"

namespace mbs {

std::uint32_t default_max_order() {
  if (const char* env = std::getenv("MBS_MAX_PLANE_ORDER")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 8192) return static_cast<std::uint32_t>(v);
  }
  return 2048;
}

namespace {

std::uint64_t checked_power(std::uint32_t base, std::uint32_t exp, std::uint32_t bound) {
  std::uint64_t v = 1;
  for (std::uint32_t i = 0; i < exp; ++i) {
    v *= base;
    if (v > bound) return bound + 1ull;
  }
  return v;
}

void check_shape(std::uint32_t p, std::uint32_t d, std::uint32_t h, const TowerOptions& options) {
  if (!is_prime(p)) throw InvalidParameter("p = " + std::to_string(p) + " is not prime");
  if (d < 1) throw InvalidParameter("inner degree d must be >= 1");
  if (h < 2) throw InvalidParameter("outer degree h must be >= 2");
  if (checked_power(p, d * h, options.max_order) > options.max_order)
    throw ResourceLimit("q^h = " + std::to_string(p) + "^" + std::to_string(d * h) +
                        " exceeds the plane-order bound " + std::to_string(options.max_order));
}

FiniteField build_subfield(std::uint32_t p, std::uint32_t d, const std::vector<std::uint32_t>& inner) {
  FiniteField prime = FiniteField::prime(p);
  if (d == 1) return prime;
  return FiniteField::extension(prime, inner);
}

void check_modulus(const FiniteField& base, const std::vector<std::uint32_t>& m, std::uint32_t degree,
                   const char* which) {
  poly::Poly pm(m.begin(), m.end());
  poly::trim(pm);
  if (poly::degree(pm) != static_cast<int>(degree) || pm.back() != 1 || pm.size() != m.size())
    throw InvalidParameter(std::string(which) + " modulus must be monic of degree " + std::to_string(degree));
  for (auto c : m)
    if (c >= base.order()) throw InvalidParameter(std::string(which) + " modulus coefficient out of range");
  if (!poly::is_irreducible(base, pm)) throw InvalidParameter(std::string(which) + " modulus is reducible");
}

}  // namespace

std::shared_ptr<const FieldTower> FieldTower::make(std::uint32_t p, std::uint32_t d, std::uint32_t h,
                                                   TowerOptions options) {
  check_shape(p, d, h, options);
  const FiniteField prime = FiniteField::prime(p);
  std::vector<std::uint32_t> inner =
      d == 1 ? std::vector<std::uint32_t>{0, 1} : poly::smallest_monic_irreducible(prime, d);
  FiniteField sub = build_subfield(p, d, inner);
  std::vector<std::uint32_t> outer = poly::smallest_monic_irreducible(sub, h);
  FiniteField ext = FiniteField::extension(sub, outer);
  return std::shared_ptr<const FieldTower>(
      new FieldTower(p, d, h, std::move(sub), std::move(ext), std::move(inner), std::move(outer)));
}

std::shared_ptr<const FieldTower> FieldTower::make_with_moduli(std::uint32_t p, std::uint32_t d,
                                                               std::uint32_t h,
                                                               std::vector<std::uint32_t> inner,
                                                               std::vector<std::uint32_t> outer,
                                                               TowerOptions options) {
  check_shape(p, d, h, options);
  const FiniteField prime = FiniteField::prime(p);
  if (d == 1 && inner != std::vector<std::uint32_t>{0, 1})
    throw InvalidParameter("inner modulus for d = 1 must be x");
  check_modulus(prime, inner, d, "inner");
  FiniteField sub = build_subfield(p, d, inner);
  check_modulus(sub, outer, h, "outer");
  FiniteField ext = FiniteField::extension(sub, outer);
  return std::shared_ptr<const FieldTower>(
      new FieldTower(p, d, h, std::move(sub), std::move(ext), std::move(inner), std::move(outer)));
}

std::uint32_t FieldTower::s() const {
  const std::uint32_t n = this->n();
  for (std::uint32_t f = 2; f <= n; ++f)
    if (n % f == 0) return f;
  return n;
}

std::optional<SubElement> FieldTower::in_subfield(ExtElement x) const {
  if (x.code < q()) return SubElement{x.code};
  return std::nullopt;
}

std::vector<SubElement> FieldTower::coefficients(ExtElement x) const {
  std::vector<SubElement> out(h_);
  std::uint32_t r = x.code;
  for (std::uint32_t j = 0; j < h_; ++j) {
    out[j] = SubElement{r % q()};
    r /= q();
  }
  return out;
}

ExtElement FieldTower::from_coefficients(std::span<const SubElement> coeffs) const {
  if (coeffs.size() != h_) throw InvalidParameter("expected " + std::to_string(h_) + " coefficients");
  std::uint32_t code = 0, scale = 1;
  for (const auto c : coeffs) {
    if (c.code >= q()) throw InvalidParameter("subfield element out of range");
    code += c.code * scale;
    scale *= q();
  }
  return ExtElement{code};
}

std::vector<std::uint32_t> FieldTower::digits(SubElement a) const {
  std::vector<std::uint32_t> out(d_);
  std::uint32_t r = a.code;
  for (std::uint32_t i = 0; i < d_; ++i) {
    out[i] = r % p_;
    r /= p_;
  }
  return out;
}

SubElement FieldTower::from_digits(std::span<const std::uint32_t> digits) const {
  if (digits.size() != d_) throw InvalidParameter("expected " + std::to_string(d_) + " GF(p) digits");
  std::uint32_t code = 0, scale = 1;
  for (const auto v : digits) {
    if (v >= p_) throw InvalidParameter("GF(p) digit out of range");
    code += v * scale;
    scale *= p_;
  }
  return SubElement{code};
}

bool LinearFunctional::is_nonzero() const {
  for (const auto v : basis_values)
    if (v.code != 0) return true;
  return false;
}

SubElement trace_to_sub(const FieldTower& tower, ExtElement x) {
  ExtElement acc = tower.zero();
  ExtElement conj = x;
  for (std::uint32_t i = 0; i < tower.h(); ++i) {
    acc = tower.add(acc, conj);
    conj = tower.pow(conj, tower.q());
  }
  const auto sub = tower.in_subfield(acc);
  if (!sub) throw ConsistencyFailure("trace left the subfield");
  return *sub;
}

LinearFunctional trace_functional(const FieldTower& tower) {
  LinearFunctional f;
  ExtElement basis = tower.one();
  for (std::uint32_t j = 0; j < tower.h(); ++j) {
    f.basis_values.push_back(trace_to_sub(tower, basis));
    basis = tower.mul(basis, tower.generator());
  }
  return f;
}

SubElement eval_functional(const FieldTower& tower, const LinearFunctional& f, ExtElement x) {
  if (f.basis_values.size() != tower.h()) throw InvalidParameter("functional has wrong length");
  const FiniteField& k = tower.sub_field();
  std::uint32_t acc = 0;
  std::uint32_t r = x.code;
  for (std::uint32_t j = 0; j < tower.h(); ++j) {
    acc = k.add(acc, k.mul(r % tower.q(), f.basis_values[j].code));
    r /= tower.q();
  }
  return SubElement{acc};
}

namespace linalg {

namespace {

/// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> eliminate(const FiniteField& k, Matrix& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.size() && m[pivot][col].code == 0) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[row], m[pivot]);
    const auto inv = k.inv(m[row][col].code);
    for (auto& e : m[row]) e.code = k.mul(e.code, inv);
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col].code == 0) continue;
      const auto factor = m[r][col].code;
      for (std::size_t c = 0; c < m[r].size(); ++c)
        m[r][c].code = k.sub(m[r][c].code, k.mul(factor, m[row][c].code));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

std::size_t rank(const FieldTower& tower, Matrix m) {
  if (m.empty()) return 0;
  return eliminate(tower.sub_field(), m, m.front().size()).size();
}

std::optional<std::vector<SubElement>> solve(const FieldTower& tower, Matrix a, std::vector<SubElement> b) {
  if (a.size() != b.size()) throw InvalidParameter("linear system shape mismatch");
  const std::size_t cols = a.empty() ? 0 : a.front().size();
  for (std::size_t r = 0; r < a.size(); ++r) a[r].push_back(b[r]);
  const auto pivots = eliminate(tower.sub_field(), a, cols);
  for (std::size_t r = pivots.size(); r < a.size(); ++r)
    if (a[r][cols].code != 0) return std::nullopt;
  std::vector<SubElement> x(cols);
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = a[r][cols];
  return x;
}

}  // namespace linalg

LinearFunctional functional_from_constraints(const FieldTower& tower,
                                             std::span<const std::pair<ExtElement, SubElement>> pairs) {
  const std::uint32_t h = tower.h();
  linalg::Matrix rows;
  std::vector<SubElement> values;

  // Consistency of the constraint system: keep independent rows, and
  // validate dependent ones against the solution of the kept rows.
  for (const auto& [vec, val] : pairs) {
    if (val.code >= tower.q()) throw InvalidParameter("constraint value outside GF(q)");
    auto candidate = rows;
    candidate.push_back(tower.coefficients(vec));
    if (linalg::rank(tower, candidate) > rows.size()) {
      rows = std::move(candidate);
      values.push_back(val);
    } else {
      auto trial_rows = rows;
      auto trial_values = values;
      trial_rows.push_back(tower.coefficients(vec));
      trial_values.push_back(val);
      if (!linalg::solve(tower, trial_rows, trial_values))
        throw InvalidParameter("dependent constraints with inconsistent values");
    }
  }

  // Basis completion sweep.
  auto try_add = [&](ExtElement v) {
    if (rows.size() == h) return;
    auto candidate = rows;
    candidate.push_back(tower.coefficients(v));
    if (linalg::rank(tower, candidate) > rows.size()) {
      rows = std::move(candidate);
      values.push_back(SubElement{0});
    }
  };
  ExtElement power = tower.one();
  for (std::uint32_t j = 0; j < h; ++j) {
    try_add(power);
    power = tower.mul(power, tower.generator());
  }
  for (std::uint32_t code = 1; code < tower.order() && rows.size() < h; ++code) try_add(ExtElement{code});

  const auto solution = linalg::solve(tower, rows, values);
  if (!solution) throw ConsistencyFailure("basis completion produced an inconsistent system");
  return LinearFunctional{*solution};
}

std::uint64_t fiber_size(const FieldTower& tower, const LinearFunctional& f, SubElement k) {
  if (!f.is_nonzero()) throw InvalidParameter("fiber_size requires a nonzero functional");
  std::uint64_t count = 0;
  for (std::uint32_t code = 0; code < tower.order(); ++code)
    if (eval_functional(tower, f, ExtElement{code}) == k) ++count;
  return count;
}

SubPoly minimal_polynomial(const FieldTower& tower, ExtElement x) {
  // prod over the Frobenius orbit of x of (X - conjugate)
  std::vector<ExtElement> orbit{x};
  for (ExtElement c = tower.pow(x, tower.q()); c != x; c = tower.pow(c, tower.q())) orbit.push_back(c);
  std::vector<ExtElement> acc{tower.one()};
  for (const auto c : orbit) {
    std::vector<ExtElement> next(acc.size() + 1, tower.zero());
    for (std::size_t i = 0; i < acc.size(); ++i) {
      next[i + 1] = tower.add(next[i + 1], acc[i]);
      next[i] = tower.sub(next[i], tower.mul(acc[i], c));
    }
    acc = std::move(next);
  }
  SubPoly m;
  for (const auto c : acc) {
    const auto s = tower.in_subfield(c);
    if (!s) throw ConsistencyFailure("minimal polynomial coefficient outside GF(q)");
    m.coeffs.push_back(*s);
  }
  return m;
}

SubElement eval_sub_poly(const FieldTower& tower, const SubPoly& m, SubElement x) {
  SubElement acc{0};
  for (auto it = m.coeffs.rbegin(); it != m.coeffs.rend(); ++it) acc = tower.add(tower.mul(acc, x), *it);
  return acc;
}

ExtElement eval_sub_poly(const FieldTower& tower, const SubPoly& m, ExtElement x) {
  ExtElement acc = tower.zero();
  for (auto it = m.coeffs.rbegin(); it != m.coeffs.rend(); ++it)
    acc = tower.add(tower.mul(acc, x), tower.embed(*it));
  return acc;
}

InverseShift inverse_shift(const FieldTower& tower, ExtElement alpha, SubElement k) {
  const SubPoly m = minimal_polynomial(tower, alpha);
  const int h = static_cast<int>(tower.h());
  if (m.degree() != h)
    throw InvalidParameter("inverse_shift needs alpha of degree h over GF(q)");
  const SubElement root = tower.neg(k);
  // Synthetic division of m by (X + k): m(X) - m(-k) = (X + k) w(X).
  std::vector<SubElement> w(h);
  w[h - 1] = m.coeffs[h];
  for (int j = h - 1; j >= 1; --j) w[j - 1] = tower.add(m.coeffs[j], tower.mul(root, w[j]));
  const SubElement value = tower.add(m.coeffs[0], tower.mul(root, w[0]));
  if (value.code == 0) throw ConsistencyFailure("minimal polynomial vanishes on GF(q)");
  InverseShift out;
  out.k = k;
  out.scale = tower.neg(tower.inv(value));
  for (int i = 1; i < h; ++i) out.coeffs.push_back(w[h - 1 - i]);
  return out;
}

ExtElement expand_inverse_shift(const FieldTower& tower, ExtElement alpha, const InverseShift& shift) {
  // Horner: a^(h-1) + c_1 a^(h-2) + ... + c_(h-1)
  ExtElement acc = tower.one();
  for (const auto c : shift.coeffs) acc = tower.add(tower.mul(acc, alpha), tower.embed(c));
  return tower.mul(acc, tower.embed(shift.scale));
}

}  // namespace mbs
