#include "mbs/finite_field.hpp"

#include <algorithm>
#include <limits>

#include "mbs/errors.hpp"

namespace mbs {

namespace {

constexpr std::uint32_t kMaxTableOrder = 1u << 16;

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r0 = m, r1 = a % m, s0 = 0, s1 = 1;
  while (r1 != 0) {
    const std::int64_t qt = r0 / r1;
    std::tie(r0, r1) = std::pair{r1, r0 - qt * r1};
    std::tie(s0, s1) = std::pair{s1, s0 - qt * s1};
  }
  return ((s0 % m) + m) % m;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

FiniteField FiniteField::prime(std::uint32_t p) {
  if (!is_prime(p)) throw InvalidParameter("characteristic " + std::to_string(p) + " is not prime");
  if (p >= 256) throw ResourceLimit("prime field too large for table arithmetic");
  FiniteField f;
  f.order_ = p;
  f.characteristic_ = p;
  f.base_order_ = p;
  f.degree_ = 1;
  f.add_.resize(std::size_t{p} * p);
  f.mul_.resize(std::size_t{p} * p);
  f.neg_.resize(p);
  f.inv_.assign(p, 0);
  for (std::uint32_t a = 0; a < p; ++a) {
    f.neg_[a] = static_cast<std::uint16_t>((p - a) % p);
    if (a != 0) f.inv_[a] = static_cast<std::uint16_t>(inverse_mod(a, p));
    for (std::uint32_t b = 0; b < p; ++b) {
      f.add_[f.index(a, b)] = static_cast<std::uint16_t>((a + b) % p);
      f.mul_[f.index(a, b)] = static_cast<std::uint16_t>((a * b) % p);
    }
  }
  const auto factors = prime_factors(p - 1);
  for (Elem g = 1; g < p; ++g) {
    const bool full = std::all_of(factors.begin(), factors.end(),
                                  [&](std::uint64_t r) { return f.pow(g, (p - 1) / r) != 1; });
    if (full) {
      f.primitive_ = g;
      break;
    }
  }
  return f;
}

FiniteField FiniteField::extension(const FiniteField& base, std::span<const Elem> modulus) {
  poly::Poly m(modulus.begin(), modulus.end());
  poly::trim(m);
  const int k = poly::degree(m);
  if (k < 1 || m.back() != 1) throw InvalidParameter("extension modulus must be monic of degree >= 1");
  const std::uint32_t b = base.order();
  std::uint64_t q = 1;
  for (int i = 0; i < k; ++i) {
    q *= b;
    if (q > kMaxTableOrder - 1) throw ResourceLimit("extension field too large for table arithmetic");
  }

  FiniteField f;
  f.order_ = static_cast<std::uint32_t>(q);
  f.characteristic_ = base.characteristic();
  f.base_order_ = b;
  f.degree_ = static_cast<std::uint32_t>(k);
  f.modulus_ = m;
  const std::uint32_t order = f.order_;

  std::vector<Elem> digits(std::size_t{order} * k);
  for (Elem a = 0; a < order; ++a) {
    Elem r = a;
    for (int j = 0; j < k; ++j) {
      digits[std::size_t{a} * k + j] = r % b;
      r /= b;
    }
  }
  auto to_poly = [&](Elem a) {
    poly::Poly out(digits.begin() + std::size_t{a} * k, digits.begin() + std::size_t{a} * k + k);
    return out;
  };
  auto from_poly = [&](const poly::Poly& p) {
    Elem code = 0, scale = 1;
    for (std::size_t j = 0; j < p.size() && j < static_cast<std::size_t>(k); ++j) {
      code += p[j] * scale;
      scale *= b;
    }
    return code;
  };

  f.add_.resize(std::size_t{order} * order);
  f.neg_.resize(order);
  for (Elem a = 0; a < order; ++a) {
    const Elem* da = &digits[std::size_t{a} * k];
    Elem n = 0, scale = 1;
    for (int j = 0; j < k; ++j, scale *= b) n += base.neg(da[j]) * scale;
    f.neg_[a] = static_cast<std::uint16_t>(n);
    for (Elem c = a; c < order; ++c) {
      const Elem* dc = &digits[std::size_t{c} * k];
      Elem s = 0;
      scale = 1;
      for (int j = 0; j < k; ++j, scale *= b) s += base.add(da[j], dc[j]) * scale;
      f.add_[f.index(a, c)] = static_cast<std::uint16_t>(s);
      f.add_[f.index(c, a)] = static_cast<std::uint16_t>(s);
    }
  }

  // Multiplicative structure from reference polynomial arithmetic.
  const auto factors = prime_factors(order - 1);
  Elem generator = 0;
  for (Elem g = 1; g < order; ++g) {
    const poly::Poly pg = to_poly(g);
    const bool full = std::all_of(factors.begin(), factors.end(), [&](std::uint64_t r) {
      poly::Poly v = poly::powmod(base, pg, (order - 1) / r, m);
      poly::trim(v);
      return !(v.size() == 1 && v[0] == 1);
    });
    if (full) {
      generator = g;
      break;
    }
  }
  if (generator == 0) throw InvalidParameter("extension modulus is not irreducible");
  f.primitive_ = generator;

  std::vector<Elem> exp(order - 1), log(order, 0);
  const poly::Poly pg = to_poly(generator);
  poly::Poly cur{1};
  for (Elem i = 0; i + 1 < order; ++i) {
    exp[i] = from_poly(cur);
    log[exp[i]] = i;
    cur = poly::mulmod(base, cur, pg, m);
  }
  f.mul_.assign(std::size_t{order} * order, 0);
  for (Elem a = 1; a < order; ++a)
    for (Elem c = 1; c < order; ++c)
      f.mul_[f.index(a, c)] = static_cast<std::uint16_t>(exp[(log[a] + log[c]) % (order - 1)]);

  // Inverses by the extended Euclidean algorithm on the modulus.
  f.inv_.assign(order, 0);
  for (Elem a = 1; a < order; ++a) {
    poly::Poly r0 = m, r1 = to_poly(a), s0{}, s1{1};
    poly::trim(r1);
    while (!(r1.empty())) {
      auto [qt, rem] = poly::divmod(base, r0, r1);
      poly::Poly s2 = poly::sub(base, s0, poly::mul(base, qt, s1));
      r0 = std::move(r1);
      r1 = std::move(rem);
      s0 = std::move(s1);
      s1 = std::move(s2);
    }
    // r0 is a nonzero constant since m is irreducible.
    if (poly::degree(r0) != 0) throw InvalidParameter("extension modulus is not irreducible");
    const Elem c = base.inv(r0[0]);
    poly::Poly inv = poly::mod(base, s0, m);
    for (auto& coeff : inv) coeff = base.mul(coeff, c);
    f.inv_[a] = static_cast<std::uint16_t>(from_poly(inv));
  }
  return f;
}

FiniteField::Elem FiniteField::inv(Elem a) const {
  if (a == 0) throw InvalidParameter("inversion of zero");
  return inv_[a];
}

FiniteField::Elem FiniteField::pow(Elem a, std::uint64_t e) const {
  Elem result = 1;
  while (e > 0) {
    if (e & 1u) result = mul(result, a);
    a = mul(a, a);
    e >>= 1u;
  }
  return result;
}

FiniteField::Elem FiniteField::inv_by_power(Elem a) const {
  if (a == 0) throw InvalidParameter("inversion of zero");
  return pow(a, order_ - 2);
}

FiniteField::Elem FiniteField::coefficient(Elem a, std::uint32_t j) const {
  for (std::uint32_t i = 0; i < j; ++i) a /= base_order_;
  return a % base_order_;
}

FiniteField::Elem FiniteField::from_coefficients(std::span<const Elem> coeffs) const {
  Elem code = 0, scale = 1;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    code += coeffs[j] * scale;
    scale *= base_order_;
  }
  return code;
}

namespace poly {

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int degree(const Poly& a) {
  for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
    if (a[i] != 0) return i;
  return -1;
}

Poly add(const FiniteField& f, const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = f.add(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
  trim(out);
  return out;
}

Poly sub(const FiniteField& f, const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = f.sub(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
  trim(out);
  return out;
}

Poly mul(const FiniteField& f, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = f.add(out[i + j], f.mul(a[i], b[j]));
  }
  trim(out);
  return out;
}

std::pair<Poly, Poly> divmod(const FiniteField& f, const Poly& a, const Poly& b) {
  const int db = degree(b);
  if (db < 0) throw InvalidParameter("polynomial division by zero");
  Poly r = a;
  trim(r);
  const int da = degree(r);
  if (da < db) return {Poly{}, r};
  Poly q(static_cast<std::size_t>(da - db + 1), 0);
  const auto lead_inv = f.inv(b[db]);
  for (int i = da; i >= db; --i) {
    const auto c = f.mul(r[i], lead_inv);
    q[i - db] = c;
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j) r[i - db + j] = f.sub(r[i - db + j], f.mul(c, b[j]));
  }
  trim(q);
  trim(r);
  return {q, r};
}

Poly mod(const FiniteField& f, const Poly& a, const Poly& m) { return divmod(f, a, m).second; }

Poly gcd(const FiniteField& f, Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = mod(f, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const auto inv = f.inv(a.back());
    for (auto& c : a) c = f.mul(c, inv);
  }
  return a;
}

Poly mulmod(const FiniteField& f, const Poly& a, const Poly& b, const Poly& m) {
  return mod(f, mul(f, a, b), m);
}

Poly powmod(const FiniteField& f, const Poly& a, std::uint64_t e, const Poly& m) {
  Poly result = mod(f, Poly{1}, m);
  Poly base = mod(f, a, m);
  while (e > 0) {
    if (e & 1u) result = mulmod(f, result, base, m);
    base = mulmod(f, base, base, m);
    e >>= 1u;
  }
  return result;
}

FiniteField::Elem eval(const FiniteField& f, const Poly& a, FiniteField::Elem x) {
  FiniteField::Elem acc = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = f.add(f.mul(acc, x), *it);
  return acc;
}

bool has_root(const FiniteField& f, const Poly& a) {
  for (FiniteField::Elem x = 0; x < f.order(); ++x)
    if (eval(f, a, x) == 0) return true;
  return false;
}

bool is_irreducible(const FiniteField& f, const Poly& m_in) {
  Poly m = m_in;
  trim(m);
  const int d = degree(m);
  if (d < 1) return false;
  if (d == 1) return true;
  if (d <= 3) return !has_root(f, m);
  const Poly x{0, 1};
  Poly xp = x;
  for (int i = 1; i <= d / 2; ++i) {
    xp = powmod(f, xp, f.order(), m);
    const Poly g = gcd(f, m, sub(f, xp, x));
    if (degree(g) != 0) return false;
  }
  return true;
}

Poly smallest_monic_irreducible(const FiniteField& f, std::uint32_t degree) {
  if (degree == 0) throw InvalidParameter("irreducible polynomial degree must be positive");
  const std::uint32_t b = f.order();
  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < degree; ++i) total *= b;
  Poly candidate(degree + 1, 0);
  candidate[degree] = 1;
  // The constant term is the most significant key of the ordering.
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t r = idx;
    for (std::uint32_t j = degree; j-- > 0;) {
      candidate[j] = static_cast<FiniteField::Elem>(r % b);
      r /= b;
    }
    if (degree > 1 && candidate[0] == 0) continue;
    if (is_irreducible(f, candidate)) return candidate;
  }
  throw ConsistencyFailure("no monic irreducible polynomial found");
}

}  // namespace poly
}  // namespace mbs
